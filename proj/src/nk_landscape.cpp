#include "ppslab/nk_landscape.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppslab/errors.hpp"
#include "ppslab/text.hpp"

namespace ppslab {

namespace {

constexpr int kMaxEnumerableN = 25;

void check_genotype(const NKLandscape& landscape, const Genotype& g) {
    if (static_cast<int>(g.size()) != landscape.n) {
        throw std::invalid_argument("genotype length " + std::to_string(g.size()) +
                                    " does not match landscape n=" + std::to_string(landscape.n));
    }
}

} // namespace

NKLandscape generate_nk(int n, int k, Rng& rng) {
    if (n < 1) throw std::invalid_argument("generate_nk: n must be >= 1");
    if (k < 0 || k > n - 1) {
        throw std::invalid_argument("generate_nk: k must satisfy 0 <= k <= n-1, got k=" +
                                    std::to_string(k) + " with n=" + std::to_string(n));
    }

    NKLandscape landscape;
    landscape.n = n;
    landscape.k = k;
    landscape.partners.resize(n);
    landscape.tables.resize(n);

    const std::size_t table_size = std::size_t{1} << (k + 1);
    std::vector<int> pool;
    pool.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        // Partial Fisher-Yates over the other n-1 indices; the first k
        // positions are a uniform ordered sample without replacement.
        pool.clear();
        for (int j = 0; j < n; ++j) {
            if (j != i) pool.push_back(j);
        }
        for (int slot = 0; slot < k; ++slot) {
            const int pick = slot + static_cast<int>(uniform_below(rng, pool.size() - slot));
            std::swap(pool[slot], pool[pick]);
        }
        landscape.partners[i].assign(pool.begin(), pool.begin() + k);

        auto& table = landscape.tables[i];
        table.resize(table_size);
        for (auto& value : table) value = uniform_unit(rng);
    }
    return landscape;
}

double nk_fitness(const NKLandscape& landscape, const Genotype& g) {
    check_genotype(landscape, g);
    double sum = 0.0;
    for (int i = 0; i < landscape.n; ++i) {
        // Own bit is the most significant index bit, partners follow in
        // stored order.
        std::size_t index = g[i];
        for (int p : landscape.partners[i]) {
            index = (index << 1) | g[p];
        }
        sum += landscape.tables[i][index];
    }
    return sum / landscape.n;
}

OptimumRecord<Genotype> nk_global_optima(const NKLandscape& landscape) {
    if (landscape.n > kMaxEnumerableN) {
        throw InfeasibleOracleError("nk_global_optima: n=" + std::to_string(landscape.n) +
                                    " exceeds the enumeration guard of " +
                                    std::to_string(kMaxEnumerableN));
    }

    OptimumRecord<Genotype> record;
    record.best_score = -1.0;

    Genotype g(static_cast<std::size_t>(landscape.n));
    const std::uint64_t count = std::uint64_t{1} << landscape.n;
    for (std::uint64_t x = 0; x < count; ++x) {
        for (int i = 0; i < landscape.n; ++i) {
            g[i] = static_cast<std::uint8_t>((x >> i) & 1u);
        }
        const double score = nk_fitness(landscape, g);
        if (score > record.best_score) {
            record.best_score = score;
            record.optima.clear();
            record.optima.push_back(g);
        } else if (score == record.best_score) {
            record.optima.push_back(g);
        }
    }
    return record;
}

Genotype nk_mutate(const Genotype& g, Rng& rng) {
    if (g.empty()) throw std::invalid_argument("nk_mutate: empty genotype");
    Genotype out = g;
    const std::size_t pos = uniform_below(rng, g.size());
    out[pos] ^= 1u;
    return out;
}

void save_nk(std::ostream& out, const NKLandscape& landscape, std::string_view comment) {
    out << "nk " << landscape.n << ' ' << landscape.k << ' ' << comment << '\n';
    for (int i = 0; i < landscape.n; ++i) {
        const auto& partners = landscape.partners[i];
        for (std::size_t j = 0; j < partners.size(); ++j) {
            if (j > 0) out << ' ';
            out << partners[j];
        }
        out << '\n';
        const auto& table = landscape.tables[i];
        for (std::size_t j = 0; j < table.size(); ++j) {
            if (j > 0) out << ' ';
            out << format_double(table[j]);
        }
        out << '\n';
    }
}

NKLandscape load_nk(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("nk file: missing header line");
    std::istringstream hs(header);
    std::string tag;
    int n = 0;
    int k = 0;
    if (!(hs >> tag >> n >> k) || tag != "nk") {
        throw FormatError("nk file: bad header '" + header + "'");
    }
    if (n < 1 || k < 0 || k > n - 1) {
        throw FormatError("nk file: invalid n=" + std::to_string(n) + " k=" + std::to_string(k));
    }

    NKLandscape landscape;
    landscape.n = n;
    landscape.k = k;
    landscape.partners.resize(n);
    landscape.tables.resize(n);
    const std::size_t table_size = std::size_t{1} << (k + 1);

    std::string line;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw FormatError("nk file: missing partner line for variable " + std::to_string(i));
        }
        std::istringstream ps(line);
        int idx = 0;
        auto& partners = landscape.partners[i];
        while (ps >> idx) {
            if (idx < 0 || idx >= n || idx == i) {
                throw FormatError("nk file: bad partner index " + std::to_string(idx) +
                                  " for variable " + std::to_string(i));
            }
            partners.push_back(idx);
        }
        if (static_cast<int>(partners.size()) != k) {
            throw FormatError("nk file: variable " + std::to_string(i) + " has " +
                              std::to_string(partners.size()) + " partners, expected " +
                              std::to_string(k));
        }
        for (std::size_t a = 0; a < partners.size(); ++a) {
            for (std::size_t b = a + 1; b < partners.size(); ++b) {
                if (partners[a] == partners[b]) {
                    throw FormatError("nk file: duplicate partner " + std::to_string(partners[a]) +
                                      " for variable " + std::to_string(i));
                }
            }
        }

        if (!std::getline(in, line)) {
            throw FormatError("nk file: missing table line for variable " + std::to_string(i));
        }
        std::istringstream ts(line);
        double value = 0.0;
        auto& table = landscape.tables[i];
        table.reserve(table_size);
        while (ts >> value) {
            if (value < 0.0 || value > 1.0) {
                throw FormatError("nk file: table value out of [0,1] for variable " +
                                  std::to_string(i));
            }
            table.push_back(value);
        }
        if (table.size() != table_size) {
            throw FormatError("nk file: variable " + std::to_string(i) + " has " +
                              std::to_string(table.size()) + " table entries, expected " +
                              std::to_string(table_size));
        }
    }
    return landscape;
}

} // namespace ppslab
