#include "dcte/multicast.hpp"

#include <algorithm>

namespace dcte {

namespace {

SteinerTree select(const Topology& topo, const std::vector<double>& w, NodeId root,
                   const std::vector<NodeId>& receivers,
                   const std::vector<bool>* usable) {
    if (receivers.empty()) throw MulticastError("no receivers");
    try {
        return min_weight_steiner(topo, w, root, receivers, usable);
    } catch (const SteinerError& e) {
        throw MulticastError(e.what());
    }
}

}  // namespace

SteinerTree dccast_select_tree(const Topology& topo, const EdgeLoad& load,
                               NodeId root, const std::vector<NodeId>& receivers,
                               double volume) {
    std::vector<double> w(topo.edge_count());
    for (EdgeId e = 0; e < topo.edge_count(); ++e) w[e] = load[e] + volume;
    return select(topo, w, root, receivers, nullptr);
}

SteinerTree capacity_aware_select_tree(const Topology& topo, const EdgeLoad& load,
                                       NodeId root,
                                       const std::vector<NodeId>& receivers,
                                       double volume) {
    std::vector<double> w(topo.edge_count());
    for (EdgeId e = 0; e < topo.edge_count(); ++e)
        w[e] = (load[e] + volume) / topo.capacity(e);
    return select(topo, w, root, receivers, nullptr);
}

std::vector<SteinerTree> parallel_trees_select(const Topology& topo,
                                               const EdgeLoad& load, NodeId root,
                                               const std::vector<NodeId>& receivers,
                                               double volume, int k) {
    if (k < 1) throw MulticastError("k must be >= 1");
    std::vector<double> w(topo.edge_count());
    for (EdgeId e = 0; e < topo.edge_count(); ++e)
        w[e] = (load[e] + volume) / topo.capacity(e);
    std::vector<bool> usable(topo.edge_count(), true);
    std::vector<SteinerTree> trees;
    for (int i = 0; i < k; ++i) {
        SteinerTree t;
        try {
            t = select(topo, w, root, receivers, &usable);
        } catch (const MulticastError&) {
            if (trees.empty()) throw;
            break;  // later trees are best-effort
        }
        for (EdgeId e : t.edges) usable[e] = false;
        trees.push_back(std::move(t));
    }
    return trees;
}

void parallel_load_update(EdgeLoad& load, const std::vector<SteinerTree>& trees,
                          double delta_volume) {
    if (trees.empty()) return;
    double share = delta_volume / static_cast<double>(trees.size());
    for (const auto& t : trees)
        for (EdgeId e : t.edges) load[e] = std::max(0.0, load[e] + share);
}

}  // namespace dcte
