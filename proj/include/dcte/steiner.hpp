#pragma once

#include <vector>

#include "dcte/topology.hpp"

namespace dcte {

// Arborescence rooted at the sender covering every receiver.
struct SteinerTree {
    NodeId root = -1;
    std::vector<NodeId> terminals;
    std::vector<EdgeId> edges;  // sorted ascending

    double weight(const std::vector<double>& edge_weights) const;
    bool contains_edge(EdgeId e) const;
    // Checks the arborescence + coverage invariants.
    bool valid(const Topology& topo) const;
    std::vector<NodeId> nodes(const Topology& topo) const;
};

struct SteinerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Density-greedy heuristic: repeatedly attaches the terminal with the
// cheapest shortest-path connection to the partial tree. Ties broken by
// fewer edges, then lexicographic edge order. For a single terminal this
// is a minimum-weight path. `usable` (optional) restricts the edge set.
SteinerTree min_weight_steiner(const Topology& topo,
                               const std::vector<double>& edge_weights,
                               NodeId root, const std::vector<NodeId>& terminals,
                               const std::vector<bool>* usable = nullptr);

// Exhaustive optimum via subset DP; guarded to small instances
// (|V| <= 12, |terminals| <= 5). Test oracle.
SteinerTree exact_steiner_oracle(const Topology& topo,
                                 const std::vector<double>& edge_weights,
                                 NodeId root, const std::vector<NodeId>& terminals);

}  // namespace dcte
