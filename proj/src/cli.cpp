#include "ppslab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ppslab/errors.hpp"
#include "ppslab/text.hpp"

namespace ppslab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int parse_int_field(const std::string& text, const std::string& field) {
    try {
        std::size_t pos = 0;
        const int value = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(field + ": expected an integer, got '" + text + "'");
    }
}

std::uint64_t parse_u64_field(const std::string& text, const std::string& field) {
    try {
        std::size_t pos = 0;
        const std::uint64_t value = std::stoull(text, &pos);
        if (pos != text.size() || text.front() == '-') throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(field + ": expected a 64-bit unsigned integer, got '" + text +
                                    "'");
    }
}

} // namespace

std::vector<int> parse_level_list(const std::string& text) {
    std::vector<int> levels;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) throw std::invalid_argument("levels: empty list entry");
        const auto dots = token.find("..");
        if (dots == std::string::npos) {
            levels.push_back(parse_int_field(token, "levels"));
            continue;
        }
        const int lo = parse_int_field(token.substr(0, dots), "levels");
        const int hi = parse_int_field(token.substr(dots + 2), "levels");
        if (hi < lo) throw std::invalid_argument("levels: empty range '" + token + "'");
        for (int level = lo; level <= hi; ++level) levels.push_back(level);
    }
    if (levels.empty()) throw std::invalid_argument("levels: empty list");
    return levels;
}

std::vector<Topology> parse_topology_list(const std::string& text) {
    std::vector<Topology> topologies;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        topologies.push_back(parse_topology(trim(token)));
    }
    if (topologies.empty()) throw std::invalid_argument("topologies: empty list");
    return topologies;
}

SweepConfig parse_config(ProblemKind kind, const std::optional<std::filesystem::path>& file,
                         const SweepOverrides& overrides) {
    SweepConfig cfg;
    cfg.problem_kind = kind;
    // Full-scale defaults: the whole complexity grid at 100 instances x 100
    // reps with 100 agents and 100 rounds.
    cfg.levels.clear();
    if (kind == ProblemKind::nk) {
        for (int k = 0; k <= 19; ++k) cfg.levels.push_back(k);
    } else {
        for (int m = 1; m <= 20; ++m) cfg.levels.push_back(m);
    }

    bool have_seed = false;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw IoError("cannot open config file '" + file->string() + "'");
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;

            std::string key;
            std::string value;
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                key = trim(line.substr(0, eq));
                value = trim(line.substr(eq + 1));
            } else {
                const auto ws = line.find_first_of(" \t");
                if (ws == std::string::npos) {
                    throw FormatError("config line " + std::to_string(line_no) +
                                      ": expected 'key = value', got '" + line + "'");
                }
                key = trim(line.substr(0, ws));
                value = trim(line.substr(ws + 1));
            }
            if (key.empty() || value.empty()) {
                throw FormatError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + line + "'");
            }

            if (key == "problem_kind") {
                if (parse_problem_kind(value) != kind) {
                    throw std::invalid_argument(
                        "problem_kind: config file says '" + value +
                        "' but the subcommand selects '" + to_string(kind) + "'");
                }
            } else if (key == "levels") {
                cfg.levels = parse_level_list(value);
            } else if (key == "n") {
                cfg.n = parse_int_field(value, key);
            } else if (key == "instances_per_level") {
                cfg.instances_per_level = parse_int_field(value, key);
            } else if (key == "reps_per_instance") {
                cfg.reps_per_instance = parse_int_field(value, key);
            } else if (key == "topologies") {
                cfg.topologies = parse_topology_list(value);
            } else if (key == "n_agents") {
                cfg.n_agents = parse_int_field(value, key);
            } else if (key == "rounds") {
                cfg.rounds = parse_int_field(value, key);
            } else if (key == "master_seed") {
                cfg.master_seed = parse_u64_field(value, key);
                have_seed = true;
            } else {
                throw std::invalid_argument("config file: unknown key '" + key + "'");
            }
        }
    }

    if (overrides.n) cfg.n = *overrides.n;
    if (overrides.levels) cfg.levels = *overrides.levels;
    if (overrides.instances) cfg.instances_per_level = *overrides.instances;
    if (overrides.reps) cfg.reps_per_instance = *overrides.reps;
    if (overrides.topologies) cfg.topologies = *overrides.topologies;
    if (overrides.agents) cfg.n_agents = *overrides.agents;
    if (overrides.rounds) cfg.rounds = *overrides.rounds;
    if (overrides.seed) {
        cfg.master_seed = *overrides.seed;
        have_seed = true;
    }
    if (!have_seed) {
        throw std::invalid_argument(
            "master_seed: no seed supplied (pass --seed or set master_seed in the config file)");
    }

    validate_sweep_config(cfg);
    return cfg;
}

namespace {

// Per-subcommand flag holders. CLI11 binds options to these; handlers read
// them after parse. Option pointers let the dispatcher distinguish "flag
// absent" from "flag at its default".
struct SweepArgs {
    std::string config_path;
    int n = 20;
    std::string levels_text;
    int instances = 100;
    int reps = 100;
    std::string topologies_text;
    int agents = 100;
    int rounds = 100;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_prefix;

    CLI::Option* n_opt = nullptr;
    CLI::Option* instances_opt = nullptr;
    CLI::Option* reps_opt = nullptr;
    CLI::Option* agents_opt = nullptr;
    CLI::Option* rounds_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

struct RunArgs {
    std::string problem = "nk";
    int n = 20;
    int level = 0;
    int instance_id = 0;
    int rep_id = 0;
    std::string topology = "linear";
    int agents = 100;
    int rounds = 100;
    std::uint64_t seed = 0;
    std::string in_path;
    std::string out_path = "trace.csv";
};

struct OracleArgs {
    std::string problem = "nk";
    int n = 20;
    int level = 0;
    int instance_id = 0;
    std::uint64_t seed = 0;
    std::string in_path;
};

struct NetInfoArgs {
    std::string topology;
    int nodes = 0;
};

struct GenArgs {
    std::string problem = "nk";
    int n = 20;
    int level = 0;
    int instance_id = 0;
    std::uint64_t seed = 0;
    std::string out_path;
};

void add_sweep_flags(CLI::App* sub, SweepArgs& args, bool is_nk) {
    sub->add_option("--config", args.config_path, "Key-value config file (flags override it)");
    if (is_nk) {
        args.n_opt = sub->add_option("--n", args.n, "Bit-string length N (default 20)");
    }
    sub->add_option("--levels", args.levels_text,
                    is_nk ? "K values, e.g. 0,3,5 or 0..19 (default 0..19)"
                          : "City counts, e.g. 1..20 (default 1..20)");
    args.instances_opt =
        sub->add_option("--instances", args.instances, "Problem instances per level (default 100)");
    args.reps_opt =
        sub->add_option("--reps", args.reps, "Repetitions per instance (default 100)");
    sub->add_option("--topologies", args.topologies_text,
                    "Comma list of topologies (default linear,complete)");
    args.agents_opt =
        sub->add_option("--agents", args.agents, "Agents per network (default 100)");
    args.rounds_opt = sub->add_option("--rounds", args.rounds, "Rounds per run (default 100)");
    args.seed_opt = sub->add_option(
        "--seed", args.seed, "Master seed (required unless the config file sets master_seed)");
    sub->add_option("--workers", args.workers,
                    "Parallel workers (output is identical for any count)");
    sub->add_option("--out", args.out_prefix,
                    "Output prefix for <prefix>_records.csv, _summary.csv, _influence.csv");
}

int handle_sweep(const SweepArgs& args, ProblemKind kind, std::ostream& out) {
    SweepOverrides overrides;
    if (args.n_opt && args.n_opt->count()) overrides.n = args.n;
    if (args.instances_opt->count()) overrides.instances = args.instances;
    if (args.reps_opt->count()) overrides.reps = args.reps;
    if (args.agents_opt->count()) overrides.agents = args.agents;
    if (args.rounds_opt->count()) overrides.rounds = args.rounds;
    if (args.seed_opt->count()) overrides.seed = args.seed;
    if (!args.levels_text.empty()) overrides.levels = parse_level_list(args.levels_text);
    if (!args.topologies_text.empty()) {
        overrides.topologies = parse_topology_list(args.topologies_text);
    }
    std::optional<std::filesystem::path> config_file;
    if (!args.config_path.empty()) config_file = args.config_path;

    const SweepConfig cfg = parse_config(kind, config_file, overrides);
    if (args.workers < 1) throw std::invalid_argument("workers: must be >= 1");

    const auto records = run_sweep(cfg, args.workers);
    const auto summary = aggregate(records);

    const std::string prefix =
        args.out_prefix.empty() ? to_string(kind) + "_sweep" : args.out_prefix;
    const std::filesystem::path records_path = prefix + "_records.csv";
    const std::filesystem::path summary_path = prefix + "_summary.csv";
    const std::filesystem::path influence_path = prefix + "_influence.csv";
    write_records_csv(records_path, records);
    write_summary_csv(summary_path, summary);
    write_influence_csv(influence_path, summary);

    out << "wrote " << records_path.string() << " (" << records.size() << " records)\n";
    out << "wrote " << summary_path.string() << " (" << summary.cells.size() << " cells)\n";
    out << "wrote " << influence_path.string() << " (" << summary.influences.size()
        << " levels)\n";
    return kExitOk;
}

// Loads a serialized instance, dispatching on the header tag.
struct LoadedInstance {
    ProblemKind kind = ProblemKind::nk;
    NKLandscape landscape;
    TspInstance instance;
};

LoadedInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file '" + path.string() + "'");
    std::string tag;
    in >> tag;
    in.seekg(0);
    LoadedInstance loaded;
    if (tag == "nk") {
        loaded.kind = ProblemKind::nk;
        loaded.landscape = load_nk(in);
    } else if (tag == "tsp") {
        loaded.kind = ProblemKind::tsp;
        loaded.instance = load_tsp(in);
    } else {
        throw FormatError("instance file '" + path.string() + "': unknown header tag '" + tag +
                          "'");
    }
    return loaded;
}

std::string genotype_to_string(const Genotype& g) {
    std::string s;
    s.reserve(g.size());
    for (auto bit : g) s += bit ? '1' : '0';
    return s;
}

int handle_run(const RunArgs& args, std::ostream& out) {
    if (args.agents < 2) throw std::invalid_argument("agents: must be >= 2");
    if (args.rounds < 1) throw std::invalid_argument("rounds: must be >= 1");
    if (args.instance_id < 0) throw std::invalid_argument("instance: must be >= 0");
    if (args.rep_id < 0) throw std::invalid_argument("rep: must be >= 0");
    const Topology topology = parse_topology(args.topology);
    const Network net = make_network(topology, args.agents);

    RunTrace trace;
    if (!args.in_path.empty()) {
        const LoadedInstance loaded = load_instance(args.in_path);
        const int level = loaded.kind == ProblemKind::nk ? loaded.landscape.k : loaded.instance.m;
        const RunConfig run_cfg{args.agents, args.rounds,
                                run_seed(args.seed, level, args.instance_id, args.rep_id,
                                         topology)};
        if (loaded.kind == ProblemKind::nk) {
            const auto optimum = nk_global_optima(loaded.landscape);
            trace = run_once(NkProblem{&loaded.landscape, &optimum}, net, run_cfg);
        } else {
            const auto optimum = held_karp(loaded.instance);
            trace = run_once(TspProblem{&loaded.instance, &optimum}, net, run_cfg);
        }
    } else {
        SweepConfig cfg;
        cfg.problem_kind = parse_problem_kind(args.problem);
        cfg.levels = {args.level};
        cfg.n = args.n;
        cfg.n_agents = args.agents;
        cfg.rounds = args.rounds;
        cfg.master_seed = args.seed;
        trace = run_cell(cfg, args.level, args.instance_id, args.rep_id, topology);
    }

    std::ofstream trace_out(args.out_path);
    if (!trace_out) throw IoError("cannot open '" + args.out_path + "' for writing");
    trace_out << "round,mean_score,best_score\n";
    for (std::size_t round = 0; round < trace.mean_score.size(); ++round) {
        trace_out << round << ',' << format_double(trace.mean_score[round]) << ','
                  << format_double(trace.best_score[round]) << '\n';
    }
    trace_out.flush();
    if (!trace_out) throw IoError("write failed for '" + args.out_path + "'");

    out << "success=" << (trace.success ? 1 : 0);
    out << " first_success_round=";
    if (trace.first_success_round) {
        out << *trace.first_success_round;
    } else {
        out << "none";
    }
    out << " final_best_score=" << format_double(trace.best_score.back()) << '\n';
    out << "wrote " << args.out_path << '\n';
    return kExitOk;
}

int handle_oracle(const OracleArgs& args, bool have_seed, std::ostream& out) {
    LoadedInstance loaded;
    if (!args.in_path.empty()) {
        loaded = load_instance(args.in_path);
    } else {
        if (!have_seed) {
            throw std::invalid_argument("seed: required when generating an instance (or pass --in)");
        }
        if (args.instance_id < 0) throw std::invalid_argument("instance: must be >= 0");
        loaded.kind = parse_problem_kind(args.problem);
        if (loaded.kind == ProblemKind::nk) {
            if (args.level < 0 || args.level > args.n - 1) {
                throw std::invalid_argument("level: K must lie in [0, n-1]");
            }
            Rng rng(instance_seed(args.seed, args.level, args.instance_id));
            loaded.landscape = generate_nk(args.n, args.level, rng);
        } else {
            if (args.level < 1) throw std::invalid_argument("level: city count must be >= 1");
            Rng rng(instance_seed(args.seed, args.level, args.instance_id));
            loaded.instance = generate_tsp(args.level, rng);
        }
    }

    if (loaded.kind == ProblemKind::nk) {
        const auto record = nk_global_optima(loaded.landscape);
        out << "kind nk\n";
        out << "n " << loaded.landscape.n << "\n";
        out << "k " << loaded.landscape.k << "\n";
        out << "best_score " << format_double(record.best_score) << "\n";
        out << "optima_count " << record.optima.size() << "\n";
        out << "optimum " << genotype_to_string(record.optima.front()) << "\n";
    } else {
        const auto record = held_karp(loaded.instance);
        out << "kind tsp\n";
        out << "m " << loaded.instance.m << "\n";
        out << "optimal_length " << format_double(0.0 - record.best_score) << "\n";
        out << "best_score " << format_double(record.best_score) << "\n";
        out << "optimum";
        for (int city : record.optima.front().order) out << ' ' << city;
        out << "\n";
    }
    return kExitOk;
}

int handle_net_info(const NetInfoArgs& args, std::ostream& out) {
    const Topology topology = parse_topology(args.topology);
    const Network net = make_network(topology, args.nodes);
    out << "nodes " << net.n_nodes << "\n";
    out << "edges " << net.edge_count() << "\n";
    out << "average_path_length " << format_double(average_path_length(net)) << "\n";
    return kExitOk;
}

int handle_gen(const GenArgs& args, std::ostream& out) {
    if (args.instance_id < 0) throw std::invalid_argument("instance: must be >= 0");
    const ProblemKind kind = parse_problem_kind(args.problem);
    const std::string comment = "seed=" + std::to_string(args.seed) +
                                " level=" + std::to_string(args.level) +
                                " instance=" + std::to_string(args.instance_id);
    std::ofstream file(args.out_path);
    if (!file) throw IoError("cannot open '" + args.out_path + "' for writing");
    if (kind == ProblemKind::nk) {
        if (args.level < 0 || args.level > args.n - 1) {
            throw std::invalid_argument("level: K must lie in [0, n-1]");
        }
        Rng rng(instance_seed(args.seed, args.level, args.instance_id));
        save_nk(file, generate_nk(args.n, args.level, rng), comment);
    } else {
        if (args.level < 1) throw std::invalid_argument("level: city count must be >= 1");
        Rng rng(instance_seed(args.seed, args.level, args.instance_id));
        save_tsp(file, generate_tsp(args.level, rng), comment);
    }
    file.flush();
    if (!file) throw IoError("write failed for '" + args.out_path + "'");
    out << "wrote " << args.out_path << '\n';
    return kExitOk;
}

} // namespace

int run_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collective-search simulation lab: explore/exploit agent populations on "
                 "communication networks solving NK landscapes and TSP instances"};
    app.name("ppslab");
    app.require_subcommand(1);

    SweepArgs nk_sweep_args;
    SweepArgs tsp_sweep_args;
    RunArgs run_args;
    OracleArgs oracle_args;
    NetInfoArgs net_info_args;
    GenArgs gen_args;

    auto* nk_sweep = app.add_subcommand(
        "nk-sweep", "Run the NK complexity sweep and write records/summary/influence CSVs");
    add_sweep_flags(nk_sweep, nk_sweep_args, true);

    auto* tsp_sweep = app.add_subcommand(
        "tsp-sweep", "Run the TSP city-count sweep and write records/summary/influence CSVs");
    add_sweep_flags(tsp_sweep, tsp_sweep_args, false);

    auto* run_cmd = app.add_subcommand("run", "Execute one run and write its per-round trace CSV");
    auto* run_problem =
        run_cmd->add_option("--problem", run_args.problem, "Problem kind: nk or tsp (default nk)");
    auto* run_n = run_cmd->add_option("--n", run_args.n, "NK bit-string length (default 20)");
    auto* run_level =
        run_cmd->add_option("--level", run_args.level, "Complexity level: K (nk) or city count (tsp)");
    run_cmd->add_option("--instance", run_args.instance_id, "Instance id within the level (default 0)");
    run_cmd->add_option("--rep", run_args.rep_id, "Repetition id (default 0)");
    run_cmd->add_option("--topology", run_args.topology, "linear or complete (default linear)");
    run_cmd->add_option("--agents", run_args.agents, "Agents in the population (default 100)");
    run_cmd->add_option("--rounds", run_args.rounds, "Rounds to simulate (default 100)");
    run_cmd->add_option("--seed", run_args.seed, "Master seed (required)")->required();
    auto* run_in = run_cmd->add_option("--in", run_args.in_path,
                                       "Serialized instance file (instead of --problem/--level)");
    run_cmd->add_option("--out", run_args.out_path, "Trace CSV path (default trace.csv)");
    run_in->excludes(run_level);
    run_in->excludes(run_problem);
    run_in->excludes(run_n);

    auto* oracle_cmd =
        app.add_subcommand("oracle", "Print an instance's exact optimum (score and solution)");
    auto* oracle_problem = oracle_cmd->add_option("--problem", oracle_args.problem,
                                                  "Problem kind: nk or tsp (default nk)");
    auto* oracle_n = oracle_cmd->add_option("--n", oracle_args.n, "NK bit-string length (default 20)");
    auto* oracle_level = oracle_cmd->add_option("--level", oracle_args.level,
                                                "Complexity level: K (nk) or city count (tsp)");
    auto* oracle_instance = oracle_cmd->add_option("--instance", oracle_args.instance_id,
                                                   "Instance id within the level (default 0)");
    auto* oracle_seed =
        oracle_cmd->add_option("--seed", oracle_args.seed, "Master seed (required unless --in)");
    auto* oracle_in = oracle_cmd->add_option("--in", oracle_args.in_path,
                                             "Serialized instance file (instead of generation flags)");
    oracle_in->excludes(oracle_level);
    oracle_in->excludes(oracle_problem);
    oracle_in->excludes(oracle_n);
    oracle_in->excludes(oracle_instance);
    oracle_in->excludes(oracle_seed);

    auto* net_info = app.add_subcommand("net-info",
                                        "Print node count, edge count and average path length");
    net_info->add_option("--topology", net_info_args.topology, "linear or complete")->required();
    net_info->add_option("--nodes", net_info_args.nodes, "Node count (>= 2)")->required();

    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance and write its serialized form");
    gen_cmd->add_option("--problem", gen_args.problem, "Problem kind: nk or tsp (default nk)");
    gen_cmd->add_option("--n", gen_args.n, "NK bit-string length (default 20)");
    gen_cmd->add_option("--level", gen_args.level, "Complexity level: K (nk) or city count (tsp)")
        ->required();
    gen_cmd->add_option("--instance", gen_args.instance_id,
                        "Instance id within the level (default 0)");
    gen_cmd->add_option("--seed", gen_args.seed, "Master seed (required)")->required();
    gen_cmd->add_option("--out", gen_args.out_path, "Destination path")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        const auto parsed = app.get_subcommands();
        out << (parsed.empty() ? app.help() : parsed.front()->help());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (nk_sweep->parsed()) return handle_sweep(nk_sweep_args, ProblemKind::nk, out);
        if (tsp_sweep->parsed()) return handle_sweep(tsp_sweep_args, ProblemKind::tsp, out);
        if (run_cmd->parsed()) return handle_run(run_args, out);
        if (oracle_cmd->parsed()) return handle_oracle(oracle_args, oracle_seed->count() > 0, out);
        if (net_info->parsed()) return handle_net_info(net_info_args, out);
        if (gen_cmd->parsed()) return handle_gen(gen_args, out);
        err << "error: no subcommand given\n";
        return kExitUsage;
    } catch (const InfeasibleOracleError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace ppslab::cli
