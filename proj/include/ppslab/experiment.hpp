#ifndef PPSLAB_EXPERIMENT_HPP
#define PPSLAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppslab/engine.hpp"
#include "ppslab/network.hpp"
#include "ppslab/nk_landscape.hpp"
#include "ppslab/rng.hpp"
#include "ppslab/tsp.hpp"

namespace ppslab {

enum class ProblemKind { nk, tsp };

std::string to_string(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& name);

/// Full description of a sweep grid. `levels` are K values for NK and city
/// counts for TSP; every (level, instance, rep, topology) cell is one
/// simulation run.
struct SweepConfig {
    ProblemKind problem_kind = ProblemKind::nk;
    std::vector<int> levels;
    int n = 20; // NK bit count; ignored for TSP
    int instances_per_level = 100;
    int reps_per_instance = 100;
    std::vector<Topology> topologies = {Topology::linear, Topology::complete};
    int n_agents = 100;
    int rounds = 100;
    std::uint64_t master_seed = 0;
};

/// Throws std::invalid_argument on bounds violations and
/// InfeasibleOracleError when the exact oracle cannot handle the configured
/// sizes. Called by run_sweep before any work starts.
void validate_sweep_config(const SweepConfig& cfg);

/// Outcome of one grid cell.
struct RunRecord {
    ProblemKind problem_kind = ProblemKind::nk;
    int level = 0;
    int instance_id = 0;
    int rep_id = 0;
    Topology topology = Topology::linear;
    bool success = false;
    double final_mean_score = 0.0;
    double final_best_score = 0.0;
    std::optional<int> first_success_round;
};

struct SummaryCell {
    ProblemKind problem_kind = ProblemKind::nk;
    int level = 0;
    Topology topology = Topology::linear;
    double success_probability = 0.0;
    double mean_final_score = 0.0;
};

struct InfluenceCell {
    ProblemKind problem_kind = ProblemKind::nk;
    int level = 0;
    double influence = 0.0; // P(linear) - P(complete)
};

struct SweepSummary {
    std::vector<SummaryCell> cells;        // sorted by (level, topology id)
    std::vector<InfluenceCell> influences; // sorted by level; present only
                                           // when both topologies were run
};

/// Stream/seed derivation. One fixed recipe (splitmix64 avalanche chain over
/// the fields in a fixed order) maps every grid coordinate to its own
/// 64-bit seed, making each cell reproducible in isolation.
///
/// Instance seeds use topology = kTopologySentinel so both topologies search
/// the same instance; run seeds differ across topologies only through the
/// topology id, so the comparison is paired rep by rep.
inline constexpr std::uint64_t kTopologySentinel = ~std::uint64_t{0};
inline constexpr std::uint64_t kSeedPurposeInstance = 1;
inline constexpr std::uint64_t kSeedPurposeRun = 2;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t level, std::uint64_t instance_id,
                          std::uint64_t rep_id, std::uint64_t topology_id,
                          std::uint64_t purpose_tag);

std::uint64_t instance_seed(std::uint64_t master, int level, int instance_id);
std::uint64_t run_seed(std::uint64_t master, int level, int instance_id, int rep_id, Topology t);

/// The exact instance a sweep cell searches, reconstructible without running
/// the sweep. Independent of the topology list by construction.
NKLandscape sweep_nk_instance(const SweepConfig& cfg, int level, int instance_id);
TspInstance sweep_tsp_instance(const SweepConfig& cfg, int level, int instance_id);

/// Replays a single grid cell (instance generation, oracle, run) and returns
/// its full trace. Intended for drilling into sweep results; the sweep
/// itself amortizes the oracle across reps instead of calling this.
RunTrace run_cell(const SweepConfig& cfg, int level, int instance_id, int rep_id, Topology t);

/// Executes the whole grid. For each level it generates
/// instances_per_level instances, computes each instance's optimum once,
/// and runs every (rep, topology) cell on it. Records come back in
/// (level, instance, rep, topology) order regardless of worker count, and
/// their contents are a pure function of the config.
std::vector<RunRecord> run_sweep(const SweepConfig& cfg, int workers = 1);

/// Success probabilities per (level, topology), network influence per level,
/// and per-cell-group means. Requires a complete grid: every combination of
/// the distinct levels, instance ids, rep ids and topologies seen in the
/// records must appear exactly once; missing cells are named in the error.
SweepSummary aggregate(const std::vector<RunRecord>& records);

/// CSV emission. Fixed headers, floats with 17 significant digits, success
/// as 0/1, absent first_success_round as an empty field. The path overloads
/// throw IoError naming the destination on failure.
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& out, const SweepSummary& summary);
void write_influence_csv(std::ostream& out, const SweepSummary& summary);
void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
void write_summary_csv(const std::filesystem::path& path, const SweepSummary& summary);
void write_influence_csv(const std::filesystem::path& path, const SweepSummary& summary);

} // namespace ppslab

#endif // PPSLAB_EXPERIMENT_HPP
