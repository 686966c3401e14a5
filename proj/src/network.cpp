#include "ppslab/network.hpp"

#include <cstdint>
#include <deque>
#include <stdexcept>

namespace ppslab {

std::string to_string(Topology t) {
    return t == Topology::linear ? "linear" : "complete";
}

Topology parse_topology(const std::string& name) {
    if (name == "linear") return Topology::linear;
    if (name == "complete") return Topology::complete;
    throw std::invalid_argument("unknown topology '" + name + "' (expected linear or complete)");
}

std::size_t Network::edge_count() const {
    std::size_t total = 0;
    for (const auto& nbrs : adjacency) total += nbrs.size();
    return total / 2;
}

Network make_linear(int n) {
    if (n < 2) throw std::invalid_argument("linear network needs at least 2 nodes");
    Network net;
    net.n_nodes = n;
    net.adjacency.resize(n);
    for (int i = 0; i < n; ++i) {
        if (i > 0) net.adjacency[i].push_back(i - 1);
        if (i + 1 < n) net.adjacency[i].push_back(i + 1);
    }
    return net;
}

Network make_complete(int n) {
    if (n < 2) throw std::invalid_argument("complete network needs at least 2 nodes");
    Network net;
    net.n_nodes = n;
    net.adjacency.resize(n);
    for (int i = 0; i < n; ++i) {
        net.adjacency[i].reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j != i) net.adjacency[i].push_back(j);
        }
    }
    return net;
}

Network make_network(Topology t, int n) {
    return t == Topology::linear ? make_linear(n) : make_complete(n);
}

double average_path_length(const Network& net) {
    const int n = net.n_nodes;
    if (n < 2) throw std::invalid_argument("average path length needs at least 2 nodes");

    // Sum of BFS distances over ordered pairs; halved at the end.
    std::uint64_t total = 0;
    std::vector<int> dist(n);
    std::deque<int> queue;
    for (int src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        int reached = 1;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : net.adjacency[u]) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    total += static_cast<std::uint64_t>(dist[v]);
                    ++reached;
                    queue.push_back(v);
                }
            }
        }
        if (reached != n) throw std::invalid_argument("network is disconnected");
    }

    const std::uint64_t ordered_pairs = static_cast<std::uint64_t>(n) * (n - 1);
    return static_cast<double>(total) / static_cast<double>(ordered_pairs);
}

} // namespace ppslab
