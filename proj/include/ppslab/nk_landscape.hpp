#ifndef PPSLAB_NK_LANDSCAPE_HPP
#define PPSLAB_NK_LANDSCAPE_HPP

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ppslab/optimum.hpp"
#include "ppslab/rng.hpp"

namespace ppslab {

/// Candidate solution: a fixed-length bitstring. Every element is 0 or 1.
using Genotype = std::vector<std::uint8_t>;

/// NK fitness landscape. n decision variables; each variable's contribution
/// depends on its own state and the states of k epistatic partners, via a
/// lookup table of 2^(k+1) values drawn uniformly from [0,1]. k tunes the
/// ruggedness: k=0 is smooth and unimodal, k=n-1 maximally rugged.
///
/// Table indexing convention (fixed; serialized landscapes rely on it): the
/// variable's own bit is the most significant index bit, followed by the
/// partner bits in stored order.
struct NKLandscape {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> partners; // per variable, k distinct indices != i
    std::vector<std::vector<double>> tables; // per variable, 2^(k+1) values in [0,1]
};

/// Draws a random landscape: each variable's partners are sampled uniformly
/// without replacement from the other n-1 indices, and every table entry is
/// an independent Uniform[0,1] draw. Deterministic given the rng state.
/// Throws std::invalid_argument unless n >= 1 and 0 <= k <= n-1.
NKLandscape generate_nk(int n, int k, Rng& rng);

/// Mean of the per-variable contributions; always in [0,1].
/// g.size() must equal landscape.n.
double nk_fitness(const NKLandscape& landscape, const Genotype& g);

/// Exhaustive enumeration of all 2^n genotypes. Returns the maximum fitness
/// and every genotype attaining it (ties resolved by exact equality of
/// scores computed in the same summation order as nk_fitness). Guarded to
/// n <= 25; larger n throws InfeasibleOracleError.
OptimumRecord<Genotype> nk_global_optima(const NKLandscape& landscape);

/// Copy of g with one uniformly chosen bit inverted.
Genotype nk_mutate(const Genotype& g, Rng& rng);

/// Line-oriented text format:
///   nk <n> <k> <comment...>
/// then per variable one line of partner indices (blank when k=0) and one
/// line of 2^(k+1) table values. Doubles are written with 17 significant
/// digits so a round trip reproduces them bit-exactly.
void save_nk(std::ostream& out, const NKLandscape& landscape, std::string_view comment);
NKLandscape load_nk(std::istream& in);

/// Engine-facing adapter binding a landscape to its precomputed optimum.
/// Optimality is decided by genotype identity against the optima set, never
/// by comparing floating-point scores at simulation time.
struct NkProblem {
    using Solution = Genotype;

    const NKLandscape* landscape = nullptr;
    const OptimumRecord<Genotype>* optimum = nullptr;

    Solution random_solution(Rng& rng) const {
        Genotype g(static_cast<std::size_t>(landscape->n));
        for (auto& bit : g) bit = static_cast<std::uint8_t>(rng() & 1u);
        return g;
    }
    double fitness(const Solution& g) const { return nk_fitness(*landscape, g); }
    Solution mutate(const Solution& g, Rng& rng) const { return nk_mutate(g, rng); }
    bool is_optimal(const Solution& g) const {
        for (const auto& opt : optimum->optima) {
            if (g == opt) return true;
        }
        return false;
    }
};

} // namespace ppslab

#endif // PPSLAB_NK_LANDSCAPE_HPP
