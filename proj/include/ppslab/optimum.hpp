#ifndef PPSLAB_OPTIMUM_HPP
#define PPSLAB_OPTIMUM_HPP

#include <vector>

namespace ppslab {

/// Result of an exact oracle: the best attainable fitness and the solutions
/// attaining it. For NK landscapes the set is exhaustive; for TSP it holds
/// one canonical optimal tour (optimality of other tours is decided by
/// length, not identity).
template <typename Solution>
struct OptimumRecord {
    double best_score = 0.0;
    std::vector<Solution> optima;
};

} // namespace ppslab

#endif // PPSLAB_OPTIMUM_HPP
