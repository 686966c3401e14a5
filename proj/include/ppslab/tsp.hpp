#ifndef PPSLAB_TSP_HPP
#define PPSLAB_TSP_HPP

#include <iosfwd>
#include <string_view>
#include <vector>

#include "ppslab/optimum.hpp"
#include "ppslab/rng.hpp"

namespace ppslab {

/// Euclidean TSP instance: m cities placed in the unit square, with the full
/// symmetric distance matrix precomputed. Immutable after generation.
struct TspInstance {
    int m = 0;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> dist; // row-major m*m

    double distance(int i, int j) const { return dist[static_cast<std::size_t>(i) * m + j]; }
};

/// Cyclic tour in canonical form: a permutation of {0..m-1} with city 0
/// first, which fixes the rotational symmetry of the cycle. Reflections are
/// not collapsed; see tsp_is_optimal_length.
struct Tour {
    std::vector<int> order;

    bool operator==(const Tour&) const = default;
};

/// Cities drawn independently and uniformly on [0,1]^2. Throws
/// std::invalid_argument for m < 1.
TspInstance generate_tsp(int m, Rng& rng);

/// Sum of edge lengths around the cycle, including the closing edge back to
/// the first city. 0 for a single-city tour.
double tour_length(const TspInstance& inst, const Tour& t);

/// Negated tour length, so the search engine always maximizes.
double tsp_fitness(const TspInstance& inst, const Tour& t);

/// Swaps the cities at two distinct uniformly chosen positions among
/// 1..m-1; position 0 stays fixed to preserve canonical form. Tours with
/// m <= 2 have no swappable pair and are returned unchanged.
Tour tsp_mutate(const Tour& t, Rng& rng);

/// Identity tour (0, 1, ..., m-1).
Tour identity_tour(int m);

/// Uniform random canonical tour: Fisher-Yates over positions 1..m-1.
Tour random_tour(int m, Rng& rng);

/// Exact optimum by dynamic programming over city subsets, O(m^2 * 2^m).
/// best_score is the negated optimal length; optima holds one canonical
/// optimal tour reconstructed from the DP table. Guarded to m <= 20.
OptimumRecord<Tour> held_karp(const TspInstance& inst);

/// Exact optimum by enumerating all (m-1)! canonical tours; the optima set
/// holds every tour whose length compares exactly equal to the minimum
/// under tour_length's summation order. Guarded to m <= 9. Independent
/// cross-check for held_karp.
OptimumRecord<Tour> brute_force_tsp(const TspInstance& inst);

/// Optimality test used by the simulation: a tour counts as optimal iff its
/// length is within 1e-9 relative tolerance of the oracle's optimal length
/// (with an absolute floor for near-zero optima). Length-based because
/// distinct optimal tours differing only by reflection must all count.
bool tsp_is_optimal_length(double length, double optimal_length);

/// Text format: header `tsp <m> <comment...>`, then one `x y` line per city
/// with 17 significant digits. Distances are recomputed on load.
void save_tsp(std::ostream& out, const TspInstance& inst, std::string_view comment);
TspInstance load_tsp(std::istream& in);

/// Engine-facing adapter binding an instance to its precomputed optimum.
struct TspProblem {
    using Solution = Tour;

    const TspInstance* instance = nullptr;
    const OptimumRecord<Tour>* optimum = nullptr;

    Solution random_solution(Rng& rng) const { return random_tour(instance->m, rng); }
    double fitness(const Solution& t) const { return tsp_fitness(*instance, t); }
    Solution mutate(const Solution& t, Rng& rng) const { return tsp_mutate(t, rng); }
    bool is_optimal(const Solution& t) const {
        return tsp_is_optimal_length(tour_length(*instance, t), -optimum->best_score);
    }
};

} // namespace ppslab

#endif // PPSLAB_TSP_HPP
