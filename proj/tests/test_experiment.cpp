#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppslab/errors.hpp"
#include "ppslab/experiment.hpp"
#include "test_support.hpp"

using namespace ppslab;

namespace {

SweepConfig small_nk_config() {
    SweepConfig cfg;
    cfg.problem_kind = ProblemKind::nk;
    cfg.levels = {0, 2};
    cfg.n = 8;
    cfg.instances_per_level = 2;
    cfg.reps_per_instance = 2;
    cfg.n_agents = 10;
    cfg.rounds = 15;
    cfg.master_seed = 4242;
    return cfg;
}

std::string records_csv_text(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    write_records_csv(out, records);
    return out.str();
}

} // namespace

TEST_CASE("derive_seed separates every field") {
    const std::uint64_t base = derive_seed(1, 2, 3, 4, 5, 6);
    CHECK(base == derive_seed(1, 2, 3, 4, 5, 6)); // pure function

    std::mt19937_64 rng(7);
    int collisions = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::uint64_t fields[6] = {rng(), rng() % 32, rng() % 1000, rng() % 1000, rng() % 2,
                                   rng() % 4};
        const std::uint64_t reference =
            derive_seed(fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]);
        for (int flip = 0; flip < 6; ++flip) {
            std::uint64_t changed[6];
            std::copy(std::begin(fields), std::end(fields), std::begin(changed));
            changed[flip] += 1;
            const std::uint64_t other =
                derive_seed(changed[0], changed[1], changed[2], changed[3], changed[4], changed[5]);
            if (other == reference) ++collisions;
        }
    }
    CHECK(collisions == 0);
}

TEST_CASE("instance seeds ignore topology; run seeds do not") {
    const std::uint64_t master = 99;
    CHECK(instance_seed(master, 3, 7) == instance_seed(master, 3, 7));
    CHECK(instance_seed(master, 3, 7) != instance_seed(master, 3, 8));
    CHECK(instance_seed(master, 4, 7) != instance_seed(master, 3, 7));

    const std::uint64_t lin = run_seed(master, 3, 7, 1, Topology::linear);
    const std::uint64_t com = run_seed(master, 3, 7, 1, Topology::complete);
    CHECK(lin != com);
    CHECK(lin != instance_seed(master, 3, 7));
}

TEST_CASE("sweep instances are paired across topology configurations") {
    SweepConfig cfg = small_nk_config();
    SweepConfig linear_only = cfg;
    linear_only.topologies = {Topology::linear};
    SweepConfig complete_only = cfg;
    complete_only.topologies = {Topology::complete};

    for (int level : cfg.levels) {
        for (int inst = 0; inst < cfg.instances_per_level; ++inst) {
            const NKLandscape a = sweep_nk_instance(linear_only, level, inst);
            const NKLandscape b = sweep_nk_instance(complete_only, level, inst);
            CHECK(a.partners == b.partners);
            CHECK(a.tables == b.tables);
        }
    }

    SweepConfig tsp_cfg;
    tsp_cfg.problem_kind = ProblemKind::tsp;
    tsp_cfg.levels = {5};
    tsp_cfg.master_seed = 7;
    const TspInstance t1 = sweep_tsp_instance(tsp_cfg, 5, 0);
    tsp_cfg.topologies = {Topology::complete};
    tsp_cfg.reps_per_instance = 50;
    const TspInstance t2 = sweep_tsp_instance(tsp_cfg, 5, 0);
    CHECK(t1.xs == t2.xs);
    CHECK(t1.ys == t2.ys);
}

TEST_CASE("validate_sweep_config rejects bad grids") {
    SweepConfig cfg = small_nk_config();
    validate_sweep_config(cfg); // baseline is fine

    SweepConfig bad = cfg;
    bad.levels = {};
    CHECK_THROWS_AS(validate_sweep_config(bad), std::invalid_argument);

    bad = cfg;
    bad.levels = {0, 0};
    CHECK_THROWS_AS(validate_sweep_config(bad), std::invalid_argument);

    bad = cfg;
    bad.levels = {8}; // K > n-1
    CHECK_THROWS_AS(validate_sweep_config(bad), std::invalid_argument);

    bad = cfg;
    bad.n = 26; // beyond the NK enumeration guard
    CHECK_THROWS_AS(validate_sweep_config(bad), InfeasibleOracleError);

    bad = cfg;
    bad.n_agents = 1;
    CHECK_THROWS_AS(validate_sweep_config(bad), std::invalid_argument);

    bad = cfg;
    bad.topologies = {Topology::linear, Topology::linear};
    CHECK_THROWS_AS(validate_sweep_config(bad), std::invalid_argument);

    SweepConfig tsp;
    tsp.problem_kind = ProblemKind::tsp;
    tsp.levels = {0};
    CHECK_THROWS_AS(validate_sweep_config(tsp), std::invalid_argument);
    tsp.levels = {21};
    CHECK_THROWS_AS(validate_sweep_config(tsp), std::invalid_argument);
}

TEST_CASE("run_sweep emits the full grid in deterministic order") {
    SweepConfig cfg = small_nk_config();
    const auto records = run_sweep(cfg);
    CHECK(records.size() == 2 * 2 * 2 * 2);

    std::size_t index = 0;
    for (int level : cfg.levels) {
        for (int inst = 0; inst < cfg.instances_per_level; ++inst) {
            for (int rep = 0; rep < cfg.reps_per_instance; ++rep) {
                for (Topology t : cfg.topologies) {
                    const RunRecord& rec = records[index++];
                    CHECK(rec.level == level);
                    CHECK(rec.instance_id == inst);
                    CHECK(rec.rep_id == rep);
                    CHECK(rec.topology == t);
                    CHECK(rec.problem_kind == ProblemKind::nk);
                    CHECK(rec.final_best_score >= rec.final_mean_score);
                    if (rec.success) CHECK(rec.first_success_round.has_value());
                }
            }
        }
    }

    SUBCASE("single-cell grid") {
        SweepConfig tiny = cfg;
        tiny.levels = {0};
        tiny.instances_per_level = 1;
        tiny.reps_per_instance = 1;
        tiny.topologies = {Topology::complete};
        CHECK(run_sweep(tiny).size() == 1);
    }
}

TEST_CASE("run_sweep output is identical for any worker count") {
    const SweepConfig cfg = small_nk_config();
    const auto serial = run_sweep(cfg, 1);
    const auto parallel = run_sweep(cfg, 3);
    CHECK(records_csv_text(serial) == records_csv_text(parallel));
}

TEST_CASE("run_cell replays exactly the cell the sweep ran") {
    const SweepConfig cfg = small_nk_config();
    const auto records = run_sweep(cfg);
    for (const auto& rec : {records.front(), records[5], records.back()}) {
        const RunTrace trace =
            run_cell(cfg, rec.level, rec.instance_id, rec.rep_id, rec.topology);
        CHECK(trace.success == rec.success);
        CHECK(trace.mean_score.back() == rec.final_mean_score);
        CHECK(trace.best_score.back() == rec.final_best_score);
        CHECK(trace.first_success_round == rec.first_success_round);
    }
}

TEST_CASE("tsp sweep: single-city level always succeeds") {
    SweepConfig cfg;
    cfg.problem_kind = ProblemKind::tsp;
    cfg.levels = {1};
    cfg.instances_per_level = 2;
    cfg.reps_per_instance = 3;
    cfg.n_agents = 5;
    cfg.rounds = 2;
    cfg.master_seed = 11;
    const auto records = run_sweep(cfg);
    CHECK(records.size() == 2 * 3 * 2);
    for (const auto& rec : records) {
        CHECK(rec.success);
        CHECK(rec.first_success_round == 0);
        CHECK(rec.final_best_score == 0.0);
    }
}

TEST_CASE("aggregate computes probabilities and influence") {
    // Synthetic records: at level 0, linear succeeds 3/10 runs and complete
    // 1/10; at level 1 everyone succeeds.
    std::vector<RunRecord> records;
    for (int level : {0, 1}) {
        for (int inst = 0; inst < 5; ++inst) {
            for (int rep = 0; rep < 2; ++rep) {
                for (Topology t : {Topology::linear, Topology::complete}) {
                    RunRecord rec;
                    rec.problem_kind = ProblemKind::nk;
                    rec.level = level;
                    rec.instance_id = inst;
                    rec.rep_id = rep;
                    rec.topology = t;
                    const int run_index = inst * 2 + rep;
                    if (level == 1) {
                        rec.success = true;
                    } else {
                        rec.success = t == Topology::linear ? run_index < 3 : run_index < 1;
                    }
                    rec.final_mean_score = 0.25;
                    rec.final_best_score = 0.5;
                    records.push_back(rec);
                }
            }
        }
    }

    auto summary = aggregate(records);
    REQUIRE(summary.cells.size() == 4);
    REQUIRE(summary.influences.size() == 2);

    CHECK(summary.cells[0].level == 0);
    CHECK(summary.cells[0].topology == Topology::linear);
    CHECK(summary.cells[0].success_probability == doctest::Approx(0.3));
    CHECK(summary.cells[1].topology == Topology::complete);
    CHECK(summary.cells[1].success_probability == doctest::Approx(0.1));
    CHECK(summary.cells[0].mean_final_score == doctest::Approx(0.25));

    CHECK(summary.influences[0].level == 0);
    CHECK(summary.influences[0].influence == doctest::Approx(0.2));
    CHECK(summary.influences[1].influence == doctest::Approx(0.0));

    SUBCASE("record order does not matter") {
        std::mt19937_64 rng(3);
        std::shuffle(records.begin(), records.end(), rng);
        const auto shuffled = aggregate(records);
        std::ostringstream a;
        std::ostringstream b;
        write_summary_csv(a, summary);
        write_summary_csv(b, shuffled);
        CHECK(a.str() == b.str());
    }

    SUBCASE("missing cells are named") {
        records.pop_back();
        try {
            aggregate(records);
            FAIL("expected an incomplete-grid error");
        } catch (const std::invalid_argument& e) {
            const std::string what = e.what();
            CHECK(what.find("incomplete grid") != std::string::npos);
            CHECK(what.find("level=1") != std::string::npos);
        }
    }

    SUBCASE("duplicates are rejected") {
        records.push_back(records.back());
        CHECK_THROWS_AS(aggregate(records), std::invalid_argument);
    }
}

TEST_CASE("success probability is a proportion: doubling the reps moves the estimate only within binomial noise") {
    SweepConfig cfg;
    cfg.problem_kind = ProblemKind::nk;
    cfg.levels = {2};
    cfg.n = 8;
    cfg.instances_per_level = 8;
    cfg.reps_per_instance = 40;
    cfg.topologies = {Topology::complete};
    cfg.n_agents = 10;
    cfg.rounds = 15;
    cfg.master_seed = 555;

    const auto base = aggregate(run_sweep(cfg, 2));
    cfg.reps_per_instance = 80;
    const auto doubled = aggregate(run_sweep(cfg, 2));

    const double p1 = base.cells[0].success_probability;
    const double p2 = doubled.cells[0].success_probability;
    // 5 sigma on the difference of two proportions at n=320 / n=640.
    const double pooled = (p1 * 320 + p2 * 640) / 960;
    const double sigma =
        std::sqrt(pooled * (1 - pooled) * (1.0 / 320 + 1.0 / 640));
    CHECK(std::abs(p1 - p2) <= 5 * sigma + 1e-12);
}

TEST_CASE("single-topology records aggregate without influence") {
    SweepConfig cfg = small_nk_config();
    cfg.topologies = {Topology::complete};
    const auto summary = aggregate(run_sweep(cfg));
    CHECK(summary.cells.size() == 2);
    CHECK(summary.influences.empty());
}

TEST_CASE("records CSV schema and round-trip") {
    SUBCASE("empty record list produces a header-only file") {
        const std::string text = records_csv_text({});
        CHECK(text ==
              "problem,level,instance,rep,topology,success,final_mean_score,final_best_score,"
              "first_success_round\n");
    }

    SUBCASE("one record round-trips through a CSV parser") {
        RunRecord rec;
        rec.problem_kind = ProblemKind::tsp;
        rec.level = 12;
        rec.instance_id = 3;
        rec.rep_id = 9;
        rec.topology = Topology::complete;
        rec.success = true;
        rec.final_mean_score = -3.25881293617181055;
        rec.final_best_score = -2.9981155413117;
        rec.first_success_round = 42;

        const auto rows = ppslab::testing::parse_csv(records_csv_text({rec}));
        REQUIRE(rows.size() == 2);
        REQUIRE(rows[1].size() == 9);
        CHECK(rows[1][0] == "tsp");
        CHECK(rows[1][1] == "12");
        CHECK(rows[1][2] == "3");
        CHECK(rows[1][3] == "9");
        CHECK(rows[1][4] == "complete");
        CHECK(rows[1][5] == "1");
        CHECK(std::stod(rows[1][6]) == rec.final_mean_score);
        CHECK(std::stod(rows[1][7]) == rec.final_best_score);
        CHECK(rows[1][8] == "42");
    }

    SUBCASE("absent first_success_round becomes an empty field") {
        RunRecord rec;
        rec.problem_kind = ProblemKind::nk;
        const auto rows = ppslab::testing::parse_csv(records_csv_text({rec}));
        REQUIRE(rows.size() == 2);
        REQUIRE(rows[1].size() == 9);
        CHECK(rows[1][8] == "");
    }
}

TEST_CASE("summary and influence CSV schemas") {
    const SweepConfig cfg = small_nk_config();
    const auto summary = aggregate(run_sweep(cfg));

    std::ostringstream sum_out;
    write_summary_csv(sum_out, summary);
    const auto sum_rows = ppslab::testing::parse_csv(sum_out.str());
    REQUIRE(sum_rows.size() == 1 + 2 * 2); // header + levels x topologies
    CHECK(sum_rows[0] ==
          std::vector<std::string>{"problem", "level", "topology", "success_prob",
                                   "mean_final_score"});

    std::ostringstream inf_out;
    write_influence_csv(inf_out, summary);
    const auto inf_rows = ppslab::testing::parse_csv(inf_out.str());
    REQUIRE(inf_rows.size() == 1 + 2);
    CHECK(inf_rows[0] == std::vector<std::string>{"problem", "level", "influence"});
    for (std::size_t i = 1; i < inf_rows.size(); ++i) {
        const double influence = std::stod(inf_rows[i][2]);
        CHECK(influence >= -1.0);
        CHECK(influence <= 1.0);
    }
}

TEST_CASE("csv path writers surface io failures with the destination") {
    const std::vector<RunRecord> records;
    try {
        write_records_csv(std::filesystem::path("/nonexistent-dir/records.csv"), records);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/records.csv") != std::string::npos);
    }
}
