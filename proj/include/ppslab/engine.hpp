#ifndef PPSLAB_ENGINE_HPP
#define PPSLAB_ENGINE_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ppslab/network.hpp"
#include "ppslab/rng.hpp"

namespace ppslab {

/// Behavioral contract the engine searches against. fitness must be a pure
/// function of the solution, and is_optimal must agree with the problem's
/// precomputed optimum record.
template <typename P>
concept SearchProblem = requires(const P& p, const typename P::Solution& s, Rng& rng) {
    { p.random_solution(rng) } -> std::same_as<typename P::Solution>;
    { p.fitness(s) } -> std::convertible_to<double>;
    { p.mutate(s, rng) } -> std::same_as<typename P::Solution>;
    { p.is_optimal(s) } -> std::same_as<bool>;
};

/// One agent: its current solution and the cached fitness. The cache is
/// valid at every round boundary.
template <typename Solution>
struct AgentState {
    Solution solution;
    double score = 0.0;
};

struct RunConfig {
    int n_agents = 100;
    int rounds = 100;
    std::uint64_t seed = 0;
};

/// Per-round population metrics plus the run's outcome. Index 0 holds the
/// initial state, so both vectors have rounds+1 entries.
struct RunTrace {
    std::vector<double> mean_score;
    std::vector<double> best_score;
    bool success = false;
    std::optional<int> first_success_round;
};

/// Independent uniform-random solution per agent, fitness cached.
template <SearchProblem P>
std::vector<AgentState<typename P::Solution>> init_population(const P& problem, int n_agents,
                                                              Rng& rng) {
    if (n_agents < 2) throw std::invalid_argument("init_population: need at least 2 agents");
    std::vector<AgentState<typename P::Solution>> pop;
    pop.reserve(n_agents);
    for (int i = 0; i < n_agents; ++i) {
        auto solution = problem.random_solution(rng);
        const double score = problem.fitness(solution);
        pop.push_back({std::move(solution), score});
    }
    return pop;
}

/// One synchronous round. Every decision reads `current` (the start-of-round
/// state); results land in `next`. For each agent: if the best-scoring
/// neighbor (ties broken by lowest node index) is strictly better, copy its
/// solution verbatim; otherwise mutate once and adopt the candidate only if
/// strictly better. Exploring agents consume the stream in agent-index
/// order; copying agents draw nothing.
template <SearchProblem P>
void step_round(const std::vector<AgentState<typename P::Solution>>& current,
                std::vector<AgentState<typename P::Solution>>& next, const Network& net,
                const P& problem, Rng& rng) {
    const int n = static_cast<int>(current.size());
    if (n != net.n_nodes) {
        throw std::invalid_argument("population size does not match the network's node count");
    }
    if (&current == &next) throw std::invalid_argument("step_round: next must not alias current");
    next.resize(n);

    for (int i = 0; i < n; ++i) {
        int best = -1;
        double best_score = -1.0;
        for (int j : net.adjacency[i]) { // ascending, so the first max wins ties
            if (best < 0 || current[j].score > best_score) {
                best = j;
                best_score = current[j].score;
            }
        }
        if (best >= 0 && best_score > current[i].score) {
            next[i] = current[best]; // exploitation
            continue;
        }
        auto candidate = problem.mutate(current[i].solution, rng); // exploration
        const double candidate_score = problem.fitness(candidate);
        if (candidate_score > current[i].score) {
            next[i] = {std::move(candidate), candidate_score};
        } else {
            next[i] = current[i];
        }
    }
}

/// Full run: seeds a fresh stream from cfg.seed, initializes the population,
/// advances cfg.rounds synchronous rounds, and records mean/best score at
/// every round boundary. success reflects the final population;
/// first_success_round is the earliest round at which any agent held an
/// optimal solution.
template <SearchProblem P>
RunTrace run_once(const P& problem, const Network& net, const RunConfig& cfg) {
    if (cfg.n_agents != net.n_nodes) {
        throw std::invalid_argument("run_once: n_agents must equal the network's node count");
    }
    if (cfg.rounds < 1) throw std::invalid_argument("run_once: rounds must be >= 1");

    Rng rng(cfg.seed);
    auto pop = init_population(problem, cfg.n_agents, rng);
    decltype(pop) scratch;

    RunTrace trace;
    trace.mean_score.reserve(cfg.rounds + 1);
    trace.best_score.reserve(cfg.rounds + 1);

    auto record_round = [&](int round) {
        double sum = 0.0;
        double best = pop[0].score;
        for (const auto& agent : pop) {
            sum += agent.score;
            if (agent.score > best) best = agent.score;
        }
        // Summation rounding can push the computed mean an ulp above the
        // maximum once the population is homogeneous; the true mean never
        // exceeds it.
        const double mean = std::min(sum / static_cast<double>(pop.size()), best);
        trace.mean_score.push_back(mean);
        trace.best_score.push_back(best);
        if (!trace.first_success_round) {
            for (const auto& agent : pop) {
                if (problem.is_optimal(agent.solution)) {
                    trace.first_success_round = round;
                    break;
                }
            }
        }
    };

    record_round(0);
    for (int round = 1; round <= cfg.rounds; ++round) {
        step_round(pop, scratch, net, problem, rng);
        pop.swap(scratch);
        record_round(round);
    }

    for (const auto& agent : pop) {
        if (problem.is_optimal(agent.solution)) {
            trace.success = true;
            break;
        }
    }
    return trace;
}

} // namespace ppslab

#endif // PPSLAB_ENGINE_HPP
