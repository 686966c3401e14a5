#include "ppslab/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppslab/errors.hpp"
#include "ppslab/text.hpp"

namespace ppslab {

namespace {

constexpr int kHeldKarpMaxM = 20;
constexpr int kBruteForceMaxM = 9;

void fill_distances(TspInstance& inst) {
    const int m = inst.m;
    inst.dist.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double dx = inst.xs[i] - inst.xs[j];
            const double dy = inst.ys[i] - inst.ys[j];
            const double d = std::sqrt(dx * dx + dy * dy);
            inst.dist[static_cast<std::size_t>(i) * m + j] = d;
            inst.dist[static_cast<std::size_t>(j) * m + i] = d;
        }
    }
}

// Requires a permutation of the instance's cities. Canonical form (city 0
// first) is a representation invariant maintained by the tour constructors
// and mutation, not a precondition of length evaluation: the cyclic sum is
// well defined for any rotation.
void check_tour(const TspInstance& inst, const Tour& t) {
    if (static_cast<int>(t.order.size()) != inst.m) {
        throw std::invalid_argument("tour has " + std::to_string(t.order.size()) +
                                    " cities, instance has " + std::to_string(inst.m));
    }
    bool ok = true;
    if (inst.m <= 64) {
        std::uint64_t seen = 0;
        for (int city : t.order) {
            if (city < 0 || city >= inst.m) { ok = false; break; }
            seen |= std::uint64_t{1} << city;
        }
        // A length-m sequence over [0,m) covers all m cities iff no repeats.
        ok = ok && seen == (inst.m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << inst.m) - 1);
    } else {
        std::vector<bool> seen(inst.m, false);
        for (int city : t.order) {
            if (city < 0 || city >= inst.m || seen[city]) { ok = false; break; }
            seen[city] = true;
        }
    }
    if (!ok) {
        throw std::invalid_argument("tour is not a permutation of the instance's cities");
    }
}

} // namespace

TspInstance generate_tsp(int m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("generate_tsp: m must be >= 1");
    TspInstance inst;
    inst.m = m;
    inst.xs.resize(m);
    inst.ys.resize(m);
    for (int i = 0; i < m; ++i) {
        inst.xs[i] = uniform_unit(rng);
        inst.ys[i] = uniform_unit(rng);
    }
    fill_distances(inst);
    return inst;
}

double tour_length(const TspInstance& inst, const Tour& t) {
    check_tour(inst, t);
    const int m = inst.m;
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        total += inst.distance(t.order[i], t.order[(i + 1) % m]);
    }
    return total;
}

double tsp_fitness(const TspInstance& inst, const Tour& t) {
    return 0.0 - tour_length(inst, t); // +0 for the single-city tour, not -0
}

Tour tsp_mutate(const Tour& t, Rng& rng) {
    const int m = static_cast<int>(t.order.size());
    Tour out = t;
    if (m <= 2) return out; // no distinct swappable pair among positions 1..m-1
    const int a = 1 + static_cast<int>(uniform_below(rng, m - 1));
    int b = 1 + static_cast<int>(uniform_below(rng, m - 2));
    if (b >= a) ++b;
    std::swap(out.order[a], out.order[b]);
    return out;
}

Tour identity_tour(int m) {
    Tour t;
    t.order.resize(m);
    std::iota(t.order.begin(), t.order.end(), 0);
    return t;
}

Tour random_tour(int m, Rng& rng) {
    Tour t = identity_tour(m);
    for (int i = m - 1; i >= 2; --i) {
        const int j = 1 + static_cast<int>(uniform_below(rng, i)); // uniform in [1, i]
        std::swap(t.order[i], t.order[j]);
    }
    return t;
}

OptimumRecord<Tour> held_karp(const TspInstance& inst) {
    const int m = inst.m;
    if (m < 1) throw std::invalid_argument("held_karp: empty instance");
    if (m > kHeldKarpMaxM) {
        throw InfeasibleOracleError("held_karp: m=" + std::to_string(m) +
                                    " exceeds the guard of " + std::to_string(kHeldKarpMaxM));
    }

    OptimumRecord<Tour> record;
    if (m == 1) {
        record.best_score = 0.0;
        record.optima.push_back(identity_tour(1));
        return record;
    }

    // dp[mask][j]: shortest path starting at city 0, visiting exactly the
    // cities of mask (over cities 1..m-1), ending at city j+1.
    const int cities = m - 1;
    const std::size_t masks = std::size_t{1} << cities;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(masks * cities, inf);
    std::vector<std::int8_t> parent(masks * cities, -1);

    for (int j = 0; j < cities; ++j) {
        dp[(std::size_t{1} << j) * cities + j] = inst.distance(0, j + 1);
    }
    for (std::size_t mask = 1; mask < masks; ++mask) {
        for (int j = 0; j < cities; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const std::size_t prev_mask = mask ^ (std::size_t{1} << j);
            if (prev_mask == 0) continue;
            double best = inf;
            std::int8_t best_prev = -1;
            for (int i = 0; i < cities; ++i) {
                if (!(prev_mask & (std::size_t{1} << i))) continue;
                const double cand = dp[prev_mask * cities + i] + inst.distance(i + 1, j + 1);
                if (cand < best) {
                    best = cand;
                    best_prev = static_cast<std::int8_t>(i);
                }
            }
            dp[mask * cities + j] = best;
            parent[mask * cities + j] = best_prev;
        }
    }

    const std::size_t full = masks - 1;
    double best_total = inf;
    int best_end = -1;
    for (int j = 0; j < cities; ++j) {
        const double total = dp[full * cities + j] + inst.distance(j + 1, 0);
        if (total < best_total) {
            best_total = total;
            best_end = j;
        }
    }

    Tour tour;
    tour.order.resize(m);
    std::size_t mask = full;
    int j = best_end;
    for (int pos = m - 1; pos >= 1; --pos) {
        tour.order[pos] = j + 1;
        const int prev = parent[mask * cities + j];
        mask ^= std::size_t{1} << j;
        j = prev;
    }
    tour.order[0] = 0;

    // Report the optimal length as tour_length computes it, so membership
    // tests compare lengths produced by one summation order.
    record.best_score = 0.0 - tour_length(inst, tour);
    record.optima.push_back(std::move(tour));
    return record;
}

OptimumRecord<Tour> brute_force_tsp(const TspInstance& inst) {
    const int m = inst.m;
    if (m < 1) throw std::invalid_argument("brute_force_tsp: empty instance");
    if (m > kBruteForceMaxM) {
        throw InfeasibleOracleError("brute_force_tsp: m=" + std::to_string(m) +
                                    " exceeds the guard of " + std::to_string(kBruteForceMaxM));
    }

    OptimumRecord<Tour> record;
    Tour t = identity_tour(m);
    double best = std::numeric_limits<double>::infinity();
    do {
        const double len = tour_length(inst, t);
        if (len < best) {
            best = len;
            record.optima.clear();
            record.optima.push_back(t);
        } else if (len == best) {
            record.optima.push_back(t);
        }
    } while (std::next_permutation(t.order.begin() + 1, t.order.end()));
    record.best_score = 0.0 - best;
    return record;
}

bool tsp_is_optimal_length(double length, double optimal_length) {
    const double tolerance = 1e-9 * std::max(optimal_length, 1.0);
    return length <= optimal_length + tolerance;
}

void save_tsp(std::ostream& out, const TspInstance& inst, std::string_view comment) {
    out << "tsp " << inst.m << ' ' << comment << '\n';
    for (int i = 0; i < inst.m; ++i) {
        out << format_double(inst.xs[i]) << ' ' << format_double(inst.ys[i]) << '\n';
    }
}

TspInstance load_tsp(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("tsp file: missing header line");
    std::istringstream hs(header);
    std::string tag;
    int m = 0;
    if (!(hs >> tag >> m) || tag != "tsp") {
        throw FormatError("tsp file: bad header '" + header + "'");
    }
    if (m < 1) throw FormatError("tsp file: invalid m=" + std::to_string(m));

    TspInstance inst;
    inst.m = m;
    inst.xs.resize(m);
    inst.ys.resize(m);
    std::string line;
    for (int i = 0; i < m; ++i) {
        if (!std::getline(in, line)) {
            throw FormatError("tsp file: missing coordinate line for city " + std::to_string(i));
        }
        std::istringstream cs(line);
        if (!(cs >> inst.xs[i] >> inst.ys[i])) {
            throw FormatError("tsp file: bad coordinate line '" + line + "'");
        }
    }
    fill_distances(inst);
    return inst;
}

} // namespace ppslab
