#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dcte {

using NodeId = int;
using EdgeId = int;

struct Edge {
    NodeId src;
    NodeId dst;
    double capacity;  // data units per timeslot, > 0
};

// Immutable capacitated directed graph of datacenters and inter-DC links.
// At most one directed edge per ordered node pair, no self loops.
class Topology {
public:
    NodeId add_node(const std::string& name);
    NodeId node(const std::string& name) const;
    std::optional<NodeId> find_node(const std::string& name) const;
    const std::string& node_name(NodeId id) const { return names_.at(id); }

    // Adds a directed edge; with bidirectional=true also adds the reverse
    // edge with equal capacity.
    void add_edge(NodeId src, NodeId dst, double capacity, bool bidirectional = false);

    int node_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const { return edges_; }
    double capacity(EdgeId e) const { return edges_.at(e).capacity; }

    std::optional<EdgeId> edge_between(NodeId u, NodeId v) const;

    // Outgoing (edge id, head node) pairs, sorted by head node id.
    const std::vector<std::pair<EdgeId, NodeId>>& out_edges(NodeId u) const {
        return out_.at(u);
    }
    const std::vector<std::pair<EdgeId, NodeId>>& in_edges(NodeId v) const {
        return in_.at(v);
    }

    // BFS hop count over directed edges; nullopt if unreachable.
    std::optional<int> hop_distance(NodeId a, NodeId b) const;
    // Hop count treating every edge as undirected (receiver clustering).
    std::optional<int> hop_distance_undirected(NodeId a, NodeId b) const;

    double max_capacity() const;
    // Divides every capacity by the current maximum.
    void normalize_capacities();

    // Parses the edge-list format: optional "bidirectional" directive,
    // then one "src dst capacity" record per line. '#' starts a comment.
    static Topology from_file(const std::string& path);
    static Topology from_string(const std::string& text);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> name_to_id_;
    std::vector<Edge> edges_;
    std::unordered_map<long long, EdgeId> pair_to_edge_;
    std::vector<std::vector<std::pair<EdgeId, NodeId>>> out_;
    std::vector<std::vector<std::pair<EdgeId, NodeId>>> in_;

    static long long pair_key(NodeId u, NodeId v) {
        return static_cast<long long>(u) * 1000003LL + v;
    }
};

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcte
