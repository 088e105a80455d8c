#include "dcte/steiner.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

namespace dcte {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double SteinerTree::weight(const std::vector<double>& edge_weights) const {
    double w = 0.0;
    for (EdgeId e : edges) w += edge_weights.at(e);
    return w;
}

bool SteinerTree::contains_edge(EdgeId e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
}

std::vector<NodeId> SteinerTree::nodes(const Topology& topo) const {
    std::set<NodeId> s{root};
    for (EdgeId e : edges) {
        s.insert(topo.edge(e).src);
        s.insert(topo.edge(e).dst);
    }
    return {s.begin(), s.end()};
}

bool SteinerTree::valid(const Topology& topo) const {
    std::vector<int> indeg(topo.node_count(), 0);
    for (EdgeId e : edges) indeg[topo.edge(e).dst]++;
    if (indeg[root] != 0) return false;
    for (NodeId v : nodes(topo))
        if (v != root && indeg[v] != 1) return false;
    // Reachability from root over tree edges (acyclicity follows from the
    // in-degree condition plus full reachability).
    std::set<EdgeId> es(edges.begin(), edges.end());
    std::vector<bool> seen(topo.node_count(), false);
    std::vector<NodeId> stack{root};
    seen[root] = true;
    int reached_edges = 0;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (auto& [e, w] : topo.out_edges(u)) {
            if (es.count(e) && !seen[w]) {
                seen[w] = true;
                ++reached_edges;
                stack.push_back(w);
            }
        }
    }
    if (reached_edges != static_cast<int>(edges.size())) return false;
    for (NodeId t : terminals)
        if (!seen[t] && t != root) return false;
    return true;
}

namespace {

struct DijkstraResult {
    std::vector<double> dist;
    std::vector<int> hops;
    std::vector<EdgeId> parent_edge;  // -1 at sources
};

// Multi-source Dijkstra with deterministic (dist, hops, parent) tie-breaks.
DijkstraResult multi_source_dijkstra(const Topology& topo,
                                     const std::vector<double>& w,
                                     const std::vector<NodeId>& sources,
                                     const std::vector<bool>* usable) {
    int n = topo.node_count();
    DijkstraResult r{std::vector<double>(n, kInf), std::vector<int>(n, 0),
                     std::vector<EdgeId>(n, -1)};
    using Key = std::tuple<double, int, NodeId>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    for (NodeId s : sources) {
        r.dist[s] = 0.0;
        r.hops[s] = 0;
        pq.emplace(0.0, 0, s);
    }
    while (!pq.empty()) {
        auto [d, h, u] = pq.top();
        pq.pop();
        if (d > r.dist[u] || (d == r.dist[u] && h > r.hops[u])) continue;
        for (auto& [e, v] : topo.out_edges(u)) {
            if (usable && !(*usable)[e]) continue;
            double nd = d + w[e];
            int nh = h + 1;
            bool better = nd < r.dist[v] ||
                          (nd == r.dist[v] && nh < r.hops[v]) ||
                          (nd == r.dist[v] && nh == r.hops[v] &&
                           r.parent_edge[v] >= 0 && e < r.parent_edge[v]);
            if (better) {
                bool requeue = nd < r.dist[v] || nh < r.hops[v];
                r.dist[v] = nd;
                r.hops[v] = nh;
                r.parent_edge[v] = e;
                if (requeue) pq.emplace(nd, nh, v);
            }
        }
    }
    return r;
}

}  // namespace

SteinerTree min_weight_steiner(const Topology& topo,
                               const std::vector<double>& edge_weights,
                               NodeId root, const std::vector<NodeId>& terminals,
                               const std::vector<bool>* usable) {
    for (double w : edge_weights)
        if (w < 0.0) throw SteinerError("negative edge weight");
    SteinerTree tree;
    tree.root = root;
    tree.terminals = terminals;
    std::vector<bool> in_tree(topo.node_count(), false);
    in_tree[root] = true;
    std::vector<NodeId> reached{root};
    std::set<NodeId> uncovered;
    for (NodeId t : terminals)
        if (t != root) uncovered.insert(t);

    std::set<EdgeId> tree_edges;
    while (!uncovered.empty()) {
        auto dj = multi_source_dijkstra(topo, edge_weights, reached, usable);
        NodeId best = -1;
        for (NodeId t : uncovered) {
            if (dj.dist[t] == kInf) continue;
            if (best < 0 || dj.dist[t] < dj.dist[best] ||
                (dj.dist[t] == dj.dist[best] && dj.hops[t] < dj.hops[best]) ||
                (dj.dist[t] == dj.dist[best] && dj.hops[t] == dj.hops[best] && t < best))
                best = t;
        }
        if (best < 0) throw SteinerError("unreachable terminal");
        // Walk back to the existing tree, attaching nodes on the way.
        NodeId v = best;
        while (!in_tree[v]) {
            EdgeId e = dj.parent_edge[v];
            tree_edges.insert(e);
            in_tree[v] = true;
            reached.push_back(v);
            uncovered.erase(v);
            v = topo.edge(e).src;
        }
    }
    tree.edges.assign(tree_edges.begin(), tree_edges.end());
    return tree;
}

SteinerTree exact_steiner_oracle(const Topology& topo,
                                 const std::vector<double>& edge_weights,
                                 NodeId root, const std::vector<NodeId>& terminals) {
    int n = topo.node_count();
    std::vector<NodeId> terms;
    for (NodeId t : terminals)
        if (t != root) terms.push_back(t);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    int k = static_cast<int>(terms.size());
    if (n > 12 || k > 5) throw SteinerError("oracle guard: instance too large");

    if (k == 0) {
        SteinerTree t;
        t.root = root;
        t.terminals = terminals;
        return t;
    }

    // Metric closure with path reconstruction.
    std::vector<DijkstraResult> sp;
    sp.reserve(n);
    for (NodeId v = 0; v < n; ++v)
        sp.push_back(multi_source_dijkstra(topo, edge_weights, {v}, nullptr));

    int full = (1 << k) - 1;
    // cost[v][S]: min weight of a structure rooted at v covering terminal set S.
    std::vector<std::vector<double>> cost(n, std::vector<double>(full + 1, kInf));
    // choice: (-1, u) extend via u; (S1, -1) merge of S1 and S\S1; (-2,-2) base.
    std::vector<std::vector<std::pair<int, int>>> choice(
        n, std::vector<std::pair<int, int>>(full + 1, {-2, -2}));

    for (int i = 0; i < k; ++i)
        for (NodeId v = 0; v < n; ++v) cost[v][1 << i] = sp[v].dist[terms[i]];

    for (int S = 1; S <= full; ++S) {
        if ((S & (S - 1)) == 0) {
            // Singletons still benefit from the extend step below? No:
            // base already uses full shortest paths.
        } else {
            for (NodeId v = 0; v < n; ++v) {
                for (int S1 = (S - 1) & S; S1 > (S ^ S1); S1 = (S1 - 1) & S) {
                    double c = cost[v][S1] + cost[v][S ^ S1];
                    if (c < cost[v][S]) {
                        cost[v][S] = c;
                        choice[v][S] = {S1, -1};
                    }
                }
            }
            for (NodeId v = 0; v < n; ++v) {
                for (NodeId u = 0; u < n; ++u) {
                    if (u == v) continue;
                    double c = sp[v].dist[u] + cost[u][S];
                    if (c < cost[v][S]) {
                        cost[v][S] = c;
                        choice[v][S] = {-1, u};
                    }
                }
            }
        }
    }
    if (cost[root][full] == kInf) throw SteinerError("unreachable terminal");

    // Expand choices into an edge set.
    std::set<EdgeId> edges;
    auto add_path = [&](NodeId from, NodeId to) {
        NodeId v = to;
        while (v != from) {
            EdgeId e = sp[from].parent_edge[v];
            edges.insert(e);
            v = topo.edge(e).src;
        }
    };
    std::vector<std::pair<NodeId, int>> stack{{root, full}};
    while (!stack.empty()) {
        auto [v, S] = stack.back();
        stack.pop_back();
        auto [a, b] = choice[v][S];
        if (a == -2) {  // singleton base: path to the terminal
            int i = __builtin_ctz(static_cast<unsigned>(S));
            add_path(v, terms[i]);
        } else if (a == -1) {
            add_path(v, b);
            stack.emplace_back(b, S);
        } else {
            stack.emplace_back(v, a);
            stack.emplace_back(v, S ^ a);
        }
    }

    // Trim to an arborescence: keep the first incoming edge found by BFS.
    SteinerTree tree;
    tree.root = root;
    tree.terminals = terminals;
    std::vector<bool> seen(n, false);
    seen[root] = true;
    std::vector<NodeId> bfs{root};
    std::set<EdgeId> kept;
    for (size_t i = 0; i < bfs.size(); ++i) {
        NodeId u = bfs[i];
        for (auto& [e, w] : topo.out_edges(u)) {
            if (edges.count(e) && !seen[w]) {
                seen[w] = true;
                kept.insert(e);
                bfs.push_back(w);
            }
        }
    }
    tree.edges.assign(kept.begin(), kept.end());
    return tree;
}

}  // namespace dcte
