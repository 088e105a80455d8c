#pragma once

#include <random>
#include <vector>

#include "dcte/topology.hpp"

namespace dcte {

// Snapshot of an in-flight point-to-point transfer taken at the arrival
// instant of the flow being routed.
struct FlowState {
    int id = -1;
    std::vector<EdgeId> path;  // consecutive src->dst edges
    double remaining = 0.0;    // data units still to send
};

enum class CostMetric { Utilization, Load, LoadPlusDemand };

struct RoutePolicy {
    enum Kind {
        MinHop,
        RandomUniformShortest,
        MinMax,
        MinSum,
        BwrExact,
        Bwrh,
        Bwrhf,
    };
    Kind kind = MinHop;
    CostMetric metric = CostMetric::Load;  // MinMax / MinSum only
    double epsilon = 1e-6;                 // Bwrhf tie-break weight
};

struct RoutingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sum of remaining volumes over the distinct flows sharing at least one
// edge with the path; each flow counted once.
double bwr_path_weight(const std::vector<EdgeId>& path,
                       const std::vector<FlowState>& flows);

// Exhaustive minimum-weight path over all simple paths; ties broken by
// fewest hops, then lexicographic edge sequence. Guarded by an enumeration
// cap; throws RoutingError when exceeded.
std::vector<EdgeId> bwr_exact(const Topology& topo, NodeId src, NodeId dst,
                              const std::vector<FlowState>& flows);

struct BwrhResult {
    std::vector<EdgeId> path;
    bool fell_back = false;  // enumeration cap hit, heuristic fallback used
};

// Hop-bound escalation: evaluate the best path within K hops, grow K while
// the best weight keeps improving, return the last non-improved round's
// winner. Falls back to bwrhf when enumeration blows past the cap.
BwrhResult bwrh(const Topology& topo, NodeId src, NodeId dst,
                const std::vector<FlowState>& flows);

// Shortest path under per-edge weights (sum of crossing flows' remaining
// volumes) + epsilon; epsilon biases ties toward fewer hops.
std::vector<EdgeId> bwrhf(const Topology& topo, NodeId src, NodeId dst,
                          const std::vector<FlowState>& flows,
                          double epsilon = 1e-6);

// Dispatch over the policy enumeration. `edge_utilization` backs the
// Utilization metric (empty means all zero); `demand` is the new flow's
// volume for LoadPlusDemand. `rng` is consumed only by
// RandomUniformShortest (candidates at most one hop over min-hop).
std::vector<EdgeId> select_path(const Topology& topo, const RoutePolicy& policy,
                                NodeId src, NodeId dst,
                                const std::vector<FlowState>& flows,
                                const std::vector<double>& edge_utilization,
                                double demand, std::mt19937_64& rng);

// Minimum-hop path with deterministic tie-breaks. Exposed for baselines
// and tests.
std::vector<EdgeId> min_hop_path(const Topology& topo, NodeId src, NodeId dst);

// Dijkstra under nonnegative per-edge weights; ties toward fewer hops,
// then lower edge ids. Throws RoutingError when dst is unreachable (an
// infinite-weight edge counts as absent).
std::vector<EdgeId> min_cost_path(const Topology& topo, NodeId src, NodeId dst,
                                  const std::vector<double>& weights);

// All simple src->dst paths with at most max_hops edges, in DFS order over
// sorted adjacency. Throws RoutingError past `cap` paths.
std::vector<std::vector<EdgeId>> enumerate_paths(const Topology& topo, NodeId src,
                                                 NodeId dst, int max_hops,
                                                 std::size_t cap = 1000000);

}  // namespace dcte
