#ifndef PPSLAB_RNG_HPP
#define PPSLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace ppslab {

/// All stochastic code draws from a 64-bit Mersenne Twister. Streams are
/// created from explicit 64-bit seeds and never shared between concurrent
/// units of work.
using Rng = std::mt19937_64;

/// splitmix64 finalizer (Vigna). Full-avalanche 64-bit mixer: every input
/// bit affects every output bit. Stateless, bijective.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Folds one more 64-bit field into a seed chain. The golden-gamma offset
/// keeps zero fields from fixing the state; the avalanche in between makes
/// the absorption order-sensitive.
constexpr std::uint64_t mix_absorb(std::uint64_t h, std::uint64_t field) {
    return mix64(h + 0x9e3779b97f4a7c15ull + field);
}

/// Unbiased uniform draw from {0, 1, ..., bound-1} by rejection on the top
/// of the 64-bit range. bound must be nonzero.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

/// Uniform int in [lo, hi], inclusive.
inline int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform double in [0, 1) with 53 random mantissa bits.
/// Implemented directly (not via std::uniform_real_distribution) so that
/// results do not depend on the standard library in use.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace ppslab

#endif // PPSLAB_RNG_HPP
