#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "ppslab/engine.hpp"
#include "ppslab/nk_landscape.hpp"
#include "test_support.hpp"

using namespace ppslab;
using ppslab::testing::ToyProblem;

using ToyPop = std::vector<AgentState<int>>;

namespace {

ToyPop make_pop(const ToyProblem& problem, const std::vector<int>& solutions) {
    ToyPop pop;
    for (int s : solutions) pop.push_back({s, problem.fitness(s)});
    return pop;
}

} // namespace

TEST_CASE("init_population draws independent solutions and caches scores") {
    Rng rng(19);
    const NKLandscape land = generate_nk(20, 0, rng);
    const auto record = nk_global_optima(land);
    const NkProblem problem{&land, &record};

    Rng init_rng(101);
    const auto pop = init_population(problem, 1000, init_rng);
    REQUIRE(pop.size() == 1000);

    for (const auto& agent : pop) {
        CHECK(agent.score == nk_fitness(land, agent.solution));
    }

    // Fair-coin bits: each position should be set in roughly half the agents.
    for (int bit = 0; bit < 20; ++bit) {
        int ones = 0;
        for (const auto& agent : pop) ones += agent.solution[bit];
        CHECK(ones > 437); // 4 sigma around 500
        CHECK(ones < 563);
    }

    Rng again(101);
    const auto pop2 = init_population(problem, 1000, again);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        CHECK(pop[i].solution == pop2[i].solution);
    }

    Rng small(3);
    CHECK_THROWS_AS(init_population(problem, 1, small), std::invalid_argument);
}

TEST_CASE("step_round hand trace on a 3-agent line") {
    // Agents hold solutions 0, 1, 2 with scores 0.9, 0.1, 0.9. Solution 3
    // scores 0.95 and is where mutation leads from 0 and 2; solution 4
    // scores 1.0 and would be agent 1's mutation target if it explored.
    ToyProblem problem;
    problem.scores = {0.9, 0.1, 0.9, 0.95, 1.0};
    problem.mutate_to = {3, 4, 3, 3, 4};
    problem.optimal = 4;

    const Network net = make_linear(3);
    const ToyPop pop = make_pop(problem, {0, 1, 2});
    ToyPop next;
    Rng rng(1);
    step_round(pop, next, net, problem, rng);

    // End agents explore (no better neighbor) and adopt the improvement.
    CHECK(next[0].solution == 3);
    CHECK(next[2].solution == 3);
    // The middle agent copies the lowest-indexed best neighbor's start-of-
    // round solution. Had it explored instead, it would hold 4.
    CHECK(next[1].solution == 0);
    CHECK(next[1].score == 0.9);
}

TEST_CASE("one strictly better agent floods a complete network in one round") {
    ToyProblem problem;
    problem.scores = {0.3, 0.5, 0.8, 0.2};
    problem.mutate_to = {0, 1, 2, 3}; // exploration never improves
    problem.optimal = -1;

    const Network net = make_complete(4);
    const ToyPop pop = make_pop(problem, {0, 1, 2, 3});
    ToyPop next;
    Rng rng(1);
    step_round(pop, next, net, problem, rng);

    for (int i = 0; i < 4; ++i) {
        CHECK(next[i].solution == 2);
        CHECK(next[i].score == 0.8);
    }
}

TEST_CASE("homogeneous population at a strict local optimum is a fixed point") {
    ToyProblem problem;
    problem.scores = {0.7, 0.4};
    problem.mutate_to = {1, 0}; // the only move from 0 is strictly worse
    problem.optimal = -1;

    const Network net = make_complete(5);
    ToyPop pop = make_pop(problem, {0, 0, 0, 0, 0});
    ToyPop next;
    Rng rng(9);
    for (int round = 0; round < 10; ++round) {
        step_round(pop, next, net, problem, rng);
        pop.swap(next);
        for (const auto& agent : pop) {
            CHECK(agent.solution == 0);
            CHECK(agent.score == 0.7);
        }
    }
}

TEST_CASE("step_round rejects contract violations") {
    ToyProblem problem;
    problem.scores = {0.5};
    problem.mutate_to = {0};

    const Network net = make_complete(3);
    ToyPop pop = make_pop(problem, {0, 0});
    ToyPop next;
    Rng rng(2);
    CHECK_THROWS_AS(step_round(pop, next, net, problem, rng), std::invalid_argument);
    ToyPop three = make_pop(problem, {0, 0, 0});
    CHECK_THROWS_AS(step_round(three, three, net, problem, rng), std::invalid_argument);
}

TEST_CASE("per-agent scores never decrease") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng gen(seed + 1000);
        const int n = 6 + static_cast<int>(uniform_below(gen, 5));
        const int k = static_cast<int>(uniform_below(gen, n));
        const NKLandscape land = generate_nk(n, k, gen);
        const auto record = nk_global_optima(land);
        const NkProblem problem{&land, &record};

        const Network net = seed % 2 ? make_linear(12) : make_complete(12);
        Rng run_rng(seed);
        auto pop = init_population(problem, 12, run_rng);
        decltype(pop) next;
        for (int round = 0; round < 30; ++round) {
            step_round(pop, next, net, problem, run_rng);
            for (std::size_t i = 0; i < pop.size(); ++i) {
                CHECK(next[i].score >= pop[i].score);
            }
            pop.swap(next);
        }
    }
}

TEST_CASE("run_once records a full trace with monotone aggregates") {
    Rng gen(77);
    const NKLandscape land = generate_nk(10, 4, gen);
    const auto record = nk_global_optima(land);
    const NkProblem problem{&land, &record};
    const Network net = make_linear(20);

    const RunTrace trace = run_once(problem, net, RunConfig{20, 50, 12345});
    REQUIRE(trace.mean_score.size() == 51);
    REQUIRE(trace.best_score.size() == 51);

    for (std::size_t r = 0; r < trace.mean_score.size(); ++r) {
        CHECK(trace.best_score[r] >= trace.mean_score[r]);
        CHECK(trace.best_score[r] <= record.best_score);
        if (r > 0) {
            CHECK(trace.mean_score[r] >= trace.mean_score[r - 1]);
            CHECK(trace.best_score[r] >= trace.best_score[r - 1]);
        }
        // The trace touches the oracle score exactly when success has
        // happened by round r (score ties without identity have measure
        // zero under continuous table draws).
        const bool at_optimum = trace.best_score[r] == record.best_score;
        const bool success_by_r =
            trace.first_success_round && *trace.first_success_round <= static_cast<int>(r);
        CHECK(at_optimum == success_by_r);
    }
    if (trace.first_success_round) CHECK(trace.success);
}

TEST_CASE("run_once is deterministic in (problem, network, config)") {
    Rng gen(31);
    const NKLandscape land = generate_nk(12, 3, gen);
    const auto record = nk_global_optima(land);
    const NkProblem problem{&land, &record};
    const Network net = make_complete(10);

    const RunConfig cfg{10, 40, 999};
    const RunTrace a = run_once(problem, net, cfg);
    const RunTrace b = run_once(problem, net, cfg);
    CHECK(a.mean_score == b.mean_score);
    CHECK(a.best_score == b.best_score);
    CHECK(a.success == b.success);
    CHECK(a.first_success_round == b.first_success_round);
}

TEST_CASE("an initial optimum is reported at round zero") {
    ToyProblem problem;
    problem.scores = {1.0};
    problem.mutate_to = {0};
    problem.optimal = 0; // the only solution is optimal

    const Network net = make_complete(3);
    const RunTrace trace = run_once(problem, net, RunConfig{3, 1, 0});
    CHECK(trace.success);
    REQUIRE(trace.first_success_round.has_value());
    CHECK(*trace.first_success_round == 0);
}

TEST_CASE("a constant-fitness problem starts at that constant mean") {
    ToyProblem problem;
    problem.scores = {0.5, 0.5, 0.5};
    problem.mutate_to = {1, 2, 0};
    problem.optimal = -1;

    const Network net = make_linear(8);
    const RunTrace trace = run_once(problem, net, RunConfig{8, 3, 17});
    CHECK(trace.mean_score[0] == 0.5);
    CHECK(trace.best_score[0] == 0.5);
    CHECK_FALSE(trace.success);
}

TEST_CASE("k=0 landscapes are solved almost surely with enough rounds") {
    int successes = 0;
    int total = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng gen(seed * 17 + 3);
        const NKLandscape land = generate_nk(10, 0, gen);
        const auto record = nk_global_optima(land);
        const NkProblem problem{&land, &record};
        for (Topology t : {Topology::linear, Topology::complete}) {
            const Network net = make_network(t, 100);
            const RunTrace trace = run_once(problem, net, RunConfig{100, 200, seed});
            successes += trace.success ? 1 : 0;
            ++total;
        }
    }
    CHECK(total == 100);
    CHECK(successes >= 99);
}
