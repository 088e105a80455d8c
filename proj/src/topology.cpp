#include "dcte/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace dcte {

NodeId Topology::add_node(const std::string& name) {
    auto it = name_to_id_.find(name);
    if (it != name_to_id_.end()) return it->second;
    NodeId id = static_cast<NodeId>(names_.size());
    names_.push_back(name);
    name_to_id_[name] = id;
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

NodeId Topology::node(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) throw TopologyError("unknown node: " + name);
    return it->second;
}

std::optional<NodeId> Topology::find_node(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) return std::nullopt;
    return it->second;
}

void Topology::add_edge(NodeId src, NodeId dst, double capacity, bool bidirectional) {
    if (src == dst) throw TopologyError("self-loop edge rejected");
    if (src < 0 || src >= node_count() || dst < 0 || dst >= node_count())
        throw TopologyError("edge endpoint out of range");
    if (!(capacity > 0.0) || !std::isfinite(capacity))
        throw TopologyError("edge capacity must be finite and positive");
    if (pair_to_edge_.count(pair_key(src, dst)))
        throw TopologyError("duplicate edge " + names_[src] + "->" + names_[dst]);
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({src, dst, capacity});
    pair_to_edge_[pair_key(src, dst)] = id;
    out_[src].emplace_back(id, dst);
    in_[dst].emplace_back(id, src);
    std::sort(out_[src].begin(), out_[src].end(),
              [](auto& a, auto& b) { return a.second < b.second; });
    std::sort(in_[dst].begin(), in_[dst].end(),
              [](auto& a, auto& b) { return a.second < b.second; });
    if (bidirectional) add_edge(dst, src, capacity, false);
}

std::optional<EdgeId> Topology::edge_between(NodeId u, NodeId v) const {
    auto it = pair_to_edge_.find(pair_key(u, v));
    if (it == pair_to_edge_.end()) return std::nullopt;
    return it->second;
}

static std::optional<int> bfs_hops(const Topology& g, NodeId a, NodeId b, bool undirected) {
    if (a < 0 || a >= g.node_count() || b < 0 || b >= g.node_count())
        throw TopologyError("hop_distance: unknown node");
    if (a == b) return 0;
    std::vector<int> dist(g.node_count(), -1);
    dist[a] = 0;
    std::deque<NodeId> q{a};
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        auto visit = [&](NodeId w) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        };
        for (auto& [e, w] : g.out_edges(u)) visit(w);
        if (undirected)
            for (auto& [e, w] : g.in_edges(u)) visit(w);
    }
    if (dist[b] < 0) return std::nullopt;
    return dist[b];
}

std::optional<int> Topology::hop_distance(NodeId a, NodeId b) const {
    return bfs_hops(*this, a, b, false);
}

std::optional<int> Topology::hop_distance_undirected(NodeId a, NodeId b) const {
    return bfs_hops(*this, a, b, true);
}

double Topology::max_capacity() const {
    double m = 0.0;
    for (const auto& e : edges_) m = std::max(m, e.capacity);
    return m;
}

void Topology::normalize_capacities() {
    double m = max_capacity();
    if (m <= 0.0) return;
    for (auto& e : edges_) e.capacity /= m;
}

Topology Topology::from_string(const std::string& text) {
    Topology g;
    std::istringstream in(text);
    std::string line;
    bool bidir = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "bidirectional") {
            std::string v;
            ls >> v;
            bidir = (v == "true" || v == "1" || v.empty());
            continue;
        }
        std::string dst;
        double cap;
        if (!(ls >> dst >> cap))
            throw TopologyError("malformed edge record at line " + std::to_string(lineno));
        NodeId u = g.add_node(first);
        NodeId v = g.add_node(dst);
        g.add_edge(u, v, cap, bidir);
    }
    return g;
}

Topology Topology::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw TopologyError("cannot open topology file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str());
}

}  // namespace dcte
