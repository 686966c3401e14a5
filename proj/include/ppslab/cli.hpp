#ifndef PPSLAB_CLI_HPP
#define PPSLAB_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppslab/experiment.hpp"

namespace ppslab::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitIo = 4;

/// Parses "7", "0,3,5" and "0..19" (ranges and singletons may be mixed,
/// comma-separated).
std::vector<int> parse_level_list(const std::string& text);

std::vector<Topology> parse_topology_list(const std::string& text);

/// Command-line overrides for sweep configuration; unset fields fall back to
/// the config file and then to the defaults (full grid, 100x100, 100 agents,
/// 100 rounds).
struct SweepOverrides {
    std::optional<int> n;
    std::optional<std::vector<int>> levels;
    std::optional<int> instances;
    std::optional<int> reps;
    std::optional<std::vector<Topology>> topologies;
    std::optional<int> agents;
    std::optional<int> rounds;
    std::optional<std::uint64_t> seed;
};

/// Builds a validated SweepConfig from an optional key-value config file and
/// flag overrides. File keys match the config field names: problem_kind,
/// levels, n, instances_per_level, reps_per_instance, topologies, n_agents,
/// rounds, master_seed. A seed must come from one of the two sources.
SweepConfig parse_config(ProblemKind kind, const std::optional<std::filesystem::path>& file,
                         const SweepOverrides& overrides);

/// Full CLI entry point. args excludes the program name. Diagnostics go to
/// err; regular output to out. Returns the process exit status.
int run_main(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace ppslab::cli

#endif // PPSLAB_CLI_HPP
