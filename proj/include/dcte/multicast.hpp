#pragma once

#include "dcte/steiner.hpp"

namespace dcte {

// Outstanding scheduled volume per edge in raw data units. Capacity-scaled
// policies divide by C_e when forming weights, so one load state serves
// both weight families.
using EdgeLoad = std::vector<double>;

// Tree minimizing sum of (L_e + V) over its edges.
SteinerTree dccast_select_tree(const Topology& topo, const EdgeLoad& load,
                               NodeId root, const std::vector<NodeId>& receivers,
                               double volume);

// Tree minimizing sum of (L_e + V) / C_e: loaded and slow edges both
// penalized.
SteinerTree capacity_aware_select_tree(const Topology& topo, const EdgeLoad& load,
                                       NodeId root,
                                       const std::vector<NodeId>& receivers,
                                       double volume);

// Up to k pairwise edge-disjoint capacity-aware trees, found iteratively
// with edge deletion; stops early when the receivers disconnect.
std::vector<SteinerTree> parallel_trees_select(const Topology& topo,
                                               const EdgeLoad& load, NodeId root,
                                               const std::vector<NodeId>& receivers,
                                               double volume, int k);

// Splits a volume delta (positive at assignment, negative on delivery)
// equally across the request's trees and applies it to their edges.
void parallel_load_update(EdgeLoad& load, const std::vector<SteinerTree>& trees,
                          double delta_volume);

struct MulticastError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcte
