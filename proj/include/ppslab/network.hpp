#ifndef PPSLAB_NETWORK_HPP
#define PPSLAB_NETWORK_HPP

#include <string>
#include <vector>

namespace ppslab {

/// The two topologies shipped with the lab. They sit at the extremes of
/// average path length for a connected graph on n nodes: the path graph has
/// the largest attainable mean distance, the complete graph the smallest.
/// The enum values double as stable topology ids in seed derivation, so the
/// numbering must never change.
enum class Topology { linear = 0, complete = 1 };

std::string to_string(Topology t);
Topology parse_topology(const std::string& name);

/// Undirected communication graph over agents. Immutable after construction
/// and freely shared across simulation workers.
struct Network {
    int n_nodes = 0;
    std::vector<std::vector<int>> adjacency; // per node, sorted neighbor ids

    int degree(int node) const { return static_cast<int>(adjacency[node].size()); }
    std::size_t edge_count() const;
};

/// Path graph 0-1-2-...-(n-1). Requires n >= 2.
Network make_linear(int n);

/// Complete graph on n nodes. Requires n >= 2.
Network make_complete(int n);

Network make_network(Topology t, int n);

/// Mean shortest-path distance over all unordered node pairs, by all-pairs
/// BFS. Throws std::invalid_argument if the network is disconnected.
double average_path_length(const Network& net);

} // namespace ppslab

#endif // PPSLAB_NETWORK_HPP
