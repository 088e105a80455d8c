#include "dcte/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

namespace dcte {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

}  // namespace

// Dijkstra under arbitrary nonnegative edge weights with (dist, hops)
// lexicographic relaxation and edge-id tie-break, returning the path.
std::vector<EdgeId> min_cost_path(const Topology& topo, NodeId src, NodeId dst,
                                  const std::vector<double>& w) {
    int n = topo.node_count();
    std::vector<double> dist(n, kInf);
    std::vector<int> hops(n, 0);
    std::vector<EdgeId> parent(n, -1);
    using Key = std::tuple<double, int, NodeId>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, 0, src);
    while (!pq.empty()) {
        auto [d, h, u] = pq.top();
        pq.pop();
        if (d > dist[u] || (d == dist[u] && h > hops[u])) continue;
        for (auto& [e, v] : topo.out_edges(u)) {
            double nd = d + w[e];
            int nh = h + 1;
            bool better = nd < dist[v] || (nd == dist[v] && nh < hops[v]) ||
                          (nd == dist[v] && nh == hops[v] && parent[v] >= 0 &&
                           e < parent[v]);
            if (better) {
                bool requeue = nd < dist[v] || nh < hops[v];
                dist[v] = nd;
                hops[v] = nh;
                parent[v] = e;
                if (requeue) pq.emplace(nd, nh, v);
            }
        }
    }
    if (dist[dst] == kInf) throw RoutingError("destination unreachable");
    std::vector<EdgeId> path;
    for (NodeId v = dst; v != src;) {
        path.push_back(parent[v]);
        v = topo.edge(parent[v]).src;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

// Per-edge sum of remaining volumes of flows crossing the edge.
std::vector<double> edge_flow_load(const Topology& topo,
                                   const std::vector<FlowState>& flows) {
    std::vector<double> load(topo.edge_count(), 0.0);
    for (const auto& f : flows) {
        std::set<EdgeId> seen(f.path.begin(), f.path.end());
        for (EdgeId e : seen) load[e] += f.remaining;
    }
    return load;
}

// Lexicographically prefer (weight, hops, edge sequence).
bool path_better(double wa, const std::vector<EdgeId>& a, double wb,
                 const std::vector<EdgeId>& b) {
    if (wa != wb) return wa < wb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

double bwr_path_weight(const std::vector<EdgeId>& path,
                       const std::vector<FlowState>& flows) {
    std::set<EdgeId> on_path(path.begin(), path.end());
    double w = 0.0;
    for (const auto& f : flows) {
        for (EdgeId e : f.path) {
            if (on_path.count(e)) {
                w += f.remaining;
                break;
            }
        }
    }
    return w;
}

std::vector<std::vector<EdgeId>> enumerate_paths(const Topology& topo, NodeId src,
                                                 NodeId dst, int max_hops,
                                                 std::size_t cap) {
    std::vector<std::vector<EdgeId>> out;
    std::vector<bool> on_stack(topo.node_count(), false);
    std::vector<EdgeId> cur;
    // Recursion depth is bounded by max_hops.
    auto dfs = [&](auto&& self, NodeId u) -> void {
        if (u == dst) {
            if (out.size() >= cap) throw RoutingError("path enumeration cap exceeded");
            out.push_back(cur);
            return;
        }
        if (static_cast<int>(cur.size()) >= max_hops) return;
        on_stack[u] = true;
        for (auto& [e, v] : topo.out_edges(u)) {
            if (on_stack[v]) continue;
            cur.push_back(e);
            self(self, v);
            cur.pop_back();
        }
        on_stack[u] = false;
    };
    dfs(dfs, src);
    return out;
}

std::vector<EdgeId> min_hop_path(const Topology& topo, NodeId src, NodeId dst) {
    std::vector<double> unit(topo.edge_count(), 1.0);
    return min_cost_path(topo, src, dst, unit);
}

std::vector<EdgeId> bwr_exact(const Topology& topo, NodeId src, NodeId dst,
                              const std::vector<FlowState>& flows) {
    // Branch-and-bound DFS over simple paths. The path weight only grows
    // as edges are appended, so any prefix already heavier than the best
    // complete path can be cut.
    std::vector<std::vector<int>> flows_on_edge(topo.edge_count());
    for (int i = 0; i < static_cast<int>(flows.size()); ++i) {
        std::set<EdgeId> es(flows[i].path.begin(), flows[i].path.end());
        for (EdgeId e : es) flows_on_edge[e].push_back(i);
    }
    std::vector<int> hit(flows.size(), 0);  // prefix crossings per flow
    std::vector<bool> on_stack(topo.node_count(), false);
    std::vector<EdgeId> cur, best;
    double best_w = kInf;
    double cur_w = 0.0;
    std::size_t steps = 0;
    auto dfs = [&](auto&& self, NodeId u) -> void {
        if (++steps > 200000000) throw RoutingError("search budget exceeded");
        if (u == dst) {
            if (best.empty() || path_better(cur_w, cur, best_w, best)) {
                best = cur;
                best_w = cur_w;
            }
            return;
        }
        on_stack[u] = true;
        for (auto& [e, v] : topo.out_edges(u)) {
            if (on_stack[v]) continue;
            double added = 0.0;
            for (int f : flows_on_edge[e])
                if (hit[f]++ == 0) added += flows[f].remaining;
            cur_w += added;
            cur.push_back(e);
            // Equal-weight prefixes only matter while they can still beat
            // the incumbent on hop count.
            if (cur_w < best_w ||
                (cur_w == best_w && cur.size() < best.size()))
                self(self, v);
            cur.pop_back();
            cur_w -= added;
            for (int f : flows_on_edge[e]) --hit[f];
        }
        on_stack[u] = false;
    };
    dfs(dfs, src);
    if (best.empty() && src != dst) throw RoutingError("destination unreachable");
    return best;
}

BwrhResult bwrh(const Topology& topo, NodeId src, NodeId dst,
                const std::vector<FlowState>& flows) {
    auto hd = topo.hop_distance(src, dst);
    if (!hd) throw RoutingError("destination unreachable");
    int max_k = topo.node_count() - 1;
    std::vector<EdgeId> prev_best;
    double prev_w = kInf;
    std::size_t budget = 1000000;
    try {
        for (int k = *hd; k <= max_k; ++k) {
            auto paths = enumerate_paths(topo, src, dst, k, budget);
            const std::vector<EdgeId>* best = nullptr;
            double best_w = kInf;
            for (const auto& p : paths) {
                double w = bwr_path_weight(p, flows);
                if (!best || path_better(w, p, best_w, *best)) {
                    best = &p;
                    best_w = w;
                }
            }
            if (!prev_best.empty() && best_w >= prev_w - kTol)
                return {prev_best, false};
            prev_best = *best;
            prev_w = best_w;
            if (prev_w <= kTol) return {prev_best, false};  // cannot improve on 0
        }
        return {prev_best, false};
    } catch (const RoutingError&) {
        return {bwrhf(topo, src, dst, flows), true};
    }
}

std::vector<EdgeId> bwrhf(const Topology& topo, NodeId src, NodeId dst,
                          const std::vector<FlowState>& flows, double epsilon) {
    auto load = edge_flow_load(topo, flows);
    for (double& w : load) w += epsilon;
    return min_cost_path(topo, src, dst, load);
}

std::vector<EdgeId> select_path(const Topology& topo, const RoutePolicy& policy,
                                NodeId src, NodeId dst,
                                const std::vector<FlowState>& flows,
                                const std::vector<double>& edge_utilization,
                                double demand, std::mt19937_64& rng) {
    auto metric_costs = [&]() {
        switch (policy.metric) {
            case CostMetric::Utilization: {
                std::vector<double> c = edge_utilization;
                c.resize(topo.edge_count(), 0.0);
                return c;
            }
            case CostMetric::Load:
                return edge_flow_load(topo, flows);
            case CostMetric::LoadPlusDemand: {
                auto c = edge_flow_load(topo, flows);
                for (double& x : c) x += demand;
                return c;
            }
        }
        return std::vector<double>(topo.edge_count(), 0.0);
    };

    switch (policy.kind) {
        case RoutePolicy::MinHop:
            return min_hop_path(topo, src, dst);
        case RoutePolicy::RandomUniformShortest: {
            auto hd = topo.hop_distance(src, dst);
            if (!hd) throw RoutingError("destination unreachable");
            auto paths = enumerate_paths(topo, src, dst, *hd + 1);
            // Uniform pick; modulo bias is negligible for these counts and
            // keeps the draw deterministic across platforms.
            return paths[rng() % paths.size()];
        }
        case RoutePolicy::MinSum:
            return min_cost_path(topo, src, dst, metric_costs());
        case RoutePolicy::MinMax: {
            auto costs = metric_costs();
            // Binary search over distinct cost thresholds: the smallest T
            // admitting an src->dst path over edges with cost <= T.
            std::vector<double> levels(costs);
            std::sort(levels.begin(), levels.end());
            levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
            auto reachable = [&](double t) {
                std::vector<bool> seen(topo.node_count(), false);
                std::vector<NodeId> stack{src};
                seen[src] = true;
                while (!stack.empty()) {
                    NodeId u = stack.back();
                    stack.pop_back();
                    if (u == dst) return true;
                    for (auto& [e, v] : topo.out_edges(u))
                        if (costs[e] <= t && !seen[v]) {
                            seen[v] = true;
                            stack.push_back(v);
                        }
                }
                return false;
            };
            if (levels.empty() || !reachable(levels.back()))
                throw RoutingError("destination unreachable");
            // Reachability is monotone in the threshold.
            std::size_t lo = 0, hi = levels.size() - 1;
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (reachable(levels[mid]))
                    hi = mid;
                else
                    lo = mid + 1;
            }
            double thresh = levels[lo];
            // Min-hop among surviving edges as the secondary objective.
            std::vector<double> w(topo.edge_count(), kInf);
            for (EdgeId e = 0; e < topo.edge_count(); ++e)
                if (costs[e] <= thresh) w[e] = 1.0;
            return min_cost_path(topo, src, dst, w);
        }
        case RoutePolicy::BwrExact:
            return bwr_exact(topo, src, dst, flows);
        case RoutePolicy::Bwrh:
            return bwrh(topo, src, dst, flows).path;
        case RoutePolicy::Bwrhf:
            return bwrhf(topo, src, dst, flows, policy.epsilon);
    }
    throw RoutingError("unknown policy");
}

}  // namespace dcte
