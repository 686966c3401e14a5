#include "ppslab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "ppslab/errors.hpp"
#include "ppslab/text.hpp"

namespace ppslab {

namespace {

constexpr int kNkOracleMaxN = 25;
constexpr int kTspOracleMaxM = 20;

std::string cell_name(int level, int instance_id, int rep_id, Topology t) {
    return "(level=" + std::to_string(level) + ", instance=" + std::to_string(instance_id) +
           ", rep=" + std::to_string(rep_id) + ", topology=" + to_string(t) + ")";
}

} // namespace

std::string to_string(ProblemKind kind) {
    return kind == ProblemKind::nk ? "nk" : "tsp";
}

ProblemKind parse_problem_kind(const std::string& name) {
    if (name == "nk") return ProblemKind::nk;
    if (name == "tsp") return ProblemKind::tsp;
    throw std::invalid_argument("unknown problem kind '" + name + "' (expected nk or tsp)");
}

void validate_sweep_config(const SweepConfig& cfg) {
    if (cfg.levels.empty()) throw std::invalid_argument("sweep config: levels must be non-empty");
    if (cfg.instances_per_level < 1) {
        throw std::invalid_argument("sweep config: instances_per_level must be >= 1");
    }
    if (cfg.reps_per_instance < 1) {
        throw std::invalid_argument("sweep config: reps_per_instance must be >= 1");
    }
    if (cfg.topologies.empty()) {
        throw std::invalid_argument("sweep config: topologies must be non-empty");
    }
    if (cfg.n_agents < 2) throw std::invalid_argument("sweep config: n_agents must be >= 2");
    if (cfg.rounds < 1) throw std::invalid_argument("sweep config: rounds must be >= 1");

    std::set<int> level_set(cfg.levels.begin(), cfg.levels.end());
    if (level_set.size() != cfg.levels.size()) {
        throw std::invalid_argument("sweep config: duplicate levels");
    }
    std::set<Topology> topo_set(cfg.topologies.begin(), cfg.topologies.end());
    if (topo_set.size() != cfg.topologies.size()) {
        throw std::invalid_argument("sweep config: duplicate topologies");
    }

    if (cfg.problem_kind == ProblemKind::nk) {
        if (cfg.n < 1) throw std::invalid_argument("sweep config: n must be >= 1");
        for (int level : cfg.levels) {
            if (level < 0 || level > cfg.n - 1) {
                throw std::invalid_argument("sweep config: K level " + std::to_string(level) +
                                            " outside [0, n-1] with n=" + std::to_string(cfg.n));
            }
        }
        if (cfg.n > kNkOracleMaxN) {
            throw InfeasibleOracleError("sweep config: n=" + std::to_string(cfg.n) +
                                        " exceeds the NK oracle guard of " +
                                        std::to_string(kNkOracleMaxN));
        }
    } else {
        for (int level : cfg.levels) {
            if (level < 1 || level > kTspOracleMaxM) {
                throw std::invalid_argument("sweep config: city count " + std::to_string(level) +
                                            " outside [1, " + std::to_string(kTspOracleMaxM) + "]");
            }
        }
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t level, std::uint64_t instance_id,
                          std::uint64_t rep_id, std::uint64_t topology_id,
                          std::uint64_t purpose_tag) {
    std::uint64_t h = master;
    h = mix_absorb(h, purpose_tag);
    h = mix_absorb(h, level);
    h = mix_absorb(h, instance_id);
    h = mix_absorb(h, rep_id);
    h = mix_absorb(h, topology_id);
    return h;
}

std::uint64_t instance_seed(std::uint64_t master, int level, int instance_id) {
    return derive_seed(master, static_cast<std::uint64_t>(level),
                       static_cast<std::uint64_t>(instance_id), 0, kTopologySentinel,
                       kSeedPurposeInstance);
}

std::uint64_t run_seed(std::uint64_t master, int level, int instance_id, int rep_id, Topology t) {
    return derive_seed(master, static_cast<std::uint64_t>(level),
                       static_cast<std::uint64_t>(instance_id), static_cast<std::uint64_t>(rep_id),
                       static_cast<std::uint64_t>(t), kSeedPurposeRun);
}

NKLandscape sweep_nk_instance(const SweepConfig& cfg, int level, int instance_id) {
    Rng rng(instance_seed(cfg.master_seed, level, instance_id));
    return generate_nk(cfg.n, level, rng);
}

TspInstance sweep_tsp_instance(const SweepConfig& cfg, int level, int instance_id) {
    Rng rng(instance_seed(cfg.master_seed, level, instance_id));
    return generate_tsp(level, rng);
}

namespace {

template <SearchProblem P>
RunRecord make_record(const SweepConfig& cfg, const P& problem, const Network& net, int level,
                      int instance_id, int rep_id, Topology t) {
    const RunConfig run_cfg{cfg.n_agents, cfg.rounds,
                            run_seed(cfg.master_seed, level, instance_id, rep_id, t)};
    const RunTrace trace = run_once(problem, net, run_cfg);
    RunRecord rec;
    rec.problem_kind = cfg.problem_kind;
    rec.level = level;
    rec.instance_id = instance_id;
    rec.rep_id = rep_id;
    rec.topology = t;
    rec.success = trace.success;
    rec.final_mean_score = trace.mean_score.back();
    rec.final_best_score = trace.best_score.back();
    rec.first_success_round = trace.first_success_round;
    return rec;
}

// One task = one instance: generate it, solve it exactly once, then run all
// (rep, topology) cells against the shared optimum record.
void run_instance_block(const SweepConfig& cfg, const std::vector<Network>& nets, int level,
                        int instance_id, RunRecord* out) {
    std::size_t slot = 0;
    if (cfg.problem_kind == ProblemKind::nk) {
        const NKLandscape landscape = sweep_nk_instance(cfg, level, instance_id);
        const OptimumRecord<Genotype> optimum = nk_global_optima(landscape);
        const NkProblem problem{&landscape, &optimum};
        for (int rep = 0; rep < cfg.reps_per_instance; ++rep) {
            for (std::size_t ti = 0; ti < cfg.topologies.size(); ++ti) {
                out[slot++] = make_record(cfg, problem, nets[ti], level, instance_id, rep,
                                          cfg.topologies[ti]);
            }
        }
    } else {
        const TspInstance instance = sweep_tsp_instance(cfg, level, instance_id);
        const OptimumRecord<Tour> optimum = held_karp(instance);
        const TspProblem problem{&instance, &optimum};
        for (int rep = 0; rep < cfg.reps_per_instance; ++rep) {
            for (std::size_t ti = 0; ti < cfg.topologies.size(); ++ti) {
                out[slot++] = make_record(cfg, problem, nets[ti], level, instance_id, rep,
                                          cfg.topologies[ti]);
            }
        }
    }
}

} // namespace

RunTrace run_cell(const SweepConfig& cfg, int level, int instance_id, int rep_id, Topology t) {
    validate_sweep_config(cfg);
    const Network net = make_network(t, cfg.n_agents);
    const RunConfig run_cfg{cfg.n_agents, cfg.rounds,
                            run_seed(cfg.master_seed, level, instance_id, rep_id, t)};
    if (cfg.problem_kind == ProblemKind::nk) {
        const NKLandscape landscape = sweep_nk_instance(cfg, level, instance_id);
        const OptimumRecord<Genotype> optimum = nk_global_optima(landscape);
        return run_once(NkProblem{&landscape, &optimum}, net, run_cfg);
    }
    const TspInstance instance = sweep_tsp_instance(cfg, level, instance_id);
    const OptimumRecord<Tour> optimum = held_karp(instance);
    return run_once(TspProblem{&instance, &optimum}, net, run_cfg);
}

std::vector<RunRecord> run_sweep(const SweepConfig& cfg, int workers) {
    validate_sweep_config(cfg);

    std::vector<Network> nets;
    nets.reserve(cfg.topologies.size());
    for (Topology t : cfg.topologies) nets.push_back(make_network(t, cfg.n_agents));

    const std::size_t records_per_instance =
        static_cast<std::size_t>(cfg.reps_per_instance) * cfg.topologies.size();
    const std::size_t n_tasks =
        cfg.levels.size() * static_cast<std::size_t>(cfg.instances_per_level);
    std::vector<RunRecord> records(n_tasks * records_per_instance);

    auto run_task = [&](std::size_t task) {
        const int level = cfg.levels[task / cfg.instances_per_level];
        const int instance_id = static_cast<int>(task % cfg.instances_per_level);
        run_instance_block(cfg, nets, level, instance_id, &records[task * records_per_instance]);
    };

    const int thread_count =
        std::max(1, std::min<int>(workers, static_cast<int>(n_tasks)));
    if (thread_count == 1) {
        for (std::size_t task = 0; task < n_tasks; ++task) run_task(task);
        return records;
    }

    std::atomic<std::size_t> next_task{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker_loop = [&] {
        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= n_tasks) return;
            try {
                run_task(task);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker_loop);
    for (auto& thread : threads) thread.join();
    if (first_error) std::rethrow_exception(first_error);
    return records;
}

SweepSummary aggregate(const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");

    const ProblemKind kind = records.front().problem_kind;
    std::set<int> levels;
    std::set<int> instances;
    std::set<int> reps;
    std::set<Topology> topologies;
    for (const auto& rec : records) {
        if (rec.problem_kind != kind) {
            throw std::invalid_argument("aggregate: records mix problem kinds");
        }
        levels.insert(rec.level);
        instances.insert(rec.instance_id);
        reps.insert(rec.rep_id);
        topologies.insert(rec.topology);
    }

    // Complete-grid check: every combination of the observed coordinate sets
    // must appear exactly once.
    std::map<std::tuple<int, int, int, Topology>, int> counts;
    for (const auto& rec : records) {
        const auto key = std::make_tuple(rec.level, rec.instance_id, rec.rep_id, rec.topology);
        if (++counts[key] > 1) {
            throw std::invalid_argument("aggregate: duplicate record for cell " +
                                        cell_name(rec.level, rec.instance_id, rec.rep_id,
                                                  rec.topology));
        }
    }
    const std::size_t expected =
        levels.size() * instances.size() * reps.size() * topologies.size();
    if (records.size() != expected) {
        std::string missing;
        int shown = 0;
        for (int level : levels) {
            for (int inst : instances) {
                for (int rep : reps) {
                    for (Topology t : topologies) {
                        if (!counts.count(std::make_tuple(level, inst, rep, t))) {
                            if (shown < 5) {
                                missing += (shown ? ", " : "") + cell_name(level, inst, rep, t);
                            }
                            ++shown;
                        }
                    }
                }
            }
        }
        throw std::invalid_argument("aggregate: incomplete grid, " + std::to_string(shown) +
                                    " missing cells: " + missing +
                                    (shown > 5 ? ", ..." : ""));
    }

    const double runs_per_cell = static_cast<double>(instances.size() * reps.size());
    std::map<std::pair<int, Topology>, std::pair<int, double>> stats; // successes, score sum
    for (const auto& rec : records) {
        auto& [successes, score_sum] = stats[{rec.level, rec.topology}];
        successes += rec.success ? 1 : 0;
        score_sum += rec.final_mean_score;
    }

    SweepSummary summary;
    for (const auto& [key, value] : stats) {
        SummaryCell cell;
        cell.problem_kind = kind;
        cell.level = key.first;
        cell.topology = key.second;
        cell.success_probability = static_cast<double>(value.first) / runs_per_cell;
        cell.mean_final_score = value.second / runs_per_cell;
        summary.cells.push_back(cell);
    }
    std::sort(summary.cells.begin(), summary.cells.end(), [](const auto& a, const auto& b) {
        return std::tie(a.level, a.topology) < std::tie(b.level, b.topology);
    });

    if (topologies.count(Topology::linear) && topologies.count(Topology::complete)) {
        for (int level : levels) {
            const auto& lin = stats.at({level, Topology::linear});
            const auto& com = stats.at({level, Topology::complete});
            InfluenceCell cell;
            cell.problem_kind = kind;
            cell.level = level;
            cell.influence = (static_cast<double>(lin.first) - com.first) / runs_per_cell;
            summary.influences.push_back(cell);
        }
    }
    return summary;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << "problem,level,instance,rep,topology,success,final_mean_score,final_best_score,"
           "first_success_round\n";
    for (const auto& rec : records) {
        out << to_string(rec.problem_kind) << ',' << rec.level << ',' << rec.instance_id << ','
            << rec.rep_id << ',' << to_string(rec.topology) << ',' << (rec.success ? 1 : 0) << ','
            << format_double(rec.final_mean_score) << ',' << format_double(rec.final_best_score)
            << ',';
        if (rec.first_success_round) out << *rec.first_success_round;
        out << '\n';
    }
}

void write_summary_csv(std::ostream& out, const SweepSummary& summary) {
    out << "problem,level,topology,success_prob,mean_final_score\n";
    for (const auto& cell : summary.cells) {
        out << to_string(cell.problem_kind) << ',' << cell.level << ',' << to_string(cell.topology)
            << ',' << format_double(cell.success_probability) << ','
            << format_double(cell.mean_final_score) << '\n';
    }
}

void write_influence_csv(std::ostream& out, const SweepSummary& summary) {
    out << "problem,level,influence\n";
    for (const auto& cell : summary.influences) {
        out << to_string(cell.problem_kind) << ',' << cell.level << ','
            << format_double(cell.influence) << '\n';
    }
}

namespace {

template <typename Payload, typename Writer>
void write_csv_file(const std::filesystem::path& path, const Payload& payload, Writer writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    writer(out, payload);
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace

void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
    write_csv_file(path, records,
                   [](std::ostream& out, const std::vector<RunRecord>& r) { write_records_csv(out, r); });
}

void write_summary_csv(const std::filesystem::path& path, const SweepSummary& summary) {
    write_csv_file(path, summary,
                   [](std::ostream& out, const SweepSummary& s) { write_summary_csv(out, s); });
}

void write_influence_csv(const std::filesystem::path& path, const SweepSummary& summary) {
    write_csv_file(path, summary,
                   [](std::ostream& out, const SweepSummary& s) { write_influence_csv(out, s); });
}

} // namespace ppslab
