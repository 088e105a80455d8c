#include <doctest.h>

#include "dcte/multicast.hpp"

using namespace dcte;

namespace {

// s reaches d via a high-capacity relay x and a low-capacity relay y.
Topology relay_pair() {
    Topology t;
    auto s = t.add_node("s");
    auto x = t.add_node("x");
    auto y = t.add_node("y");
    auto d = t.add_node("d");
    t.add_edge(s, x, 10.0);  // e0
    t.add_edge(x, d, 10.0);  // e1
    t.add_edge(s, y, 1.0);   // e2
    t.add_edge(y, d, 1.0);   // e3
    return t;
}

}  // namespace

TEST_CASE("idle network yields a minimum-edge tree") {
    Topology t;
    auto s = t.add_node("s");
    auto a = t.add_node("a");
    auto b = t.add_node("b");
    auto c = t.add_node("c");
    t.add_edge(s, a, 1.0);
    t.add_edge(a, b, 1.0);
    t.add_edge(a, c, 1.0);
    t.add_edge(s, b, 1.0);
    t.add_edge(s, c, 1.0);
    EdgeLoad load(t.edge_count(), 0.0);
    auto tree = dccast_select_tree(t, load, s, {b, c}, 5.0);
    CHECK(tree.valid(t));
    CHECK(tree.edges.size() == 2);  // the two direct edges beat the relay
}

TEST_CASE("a loaded edge diverts the tree to a detour") {
    auto t = relay_pair();
    EdgeLoad load(t.edge_count(), 0.0);
    load[1] = 50.0;  // fast relay overloaded
    auto tree = dccast_select_tree(t, load, 0, {3}, 1.0);
    CHECK(tree.edges == std::vector<EdgeId>{2, 3});
}

TEST_CASE("capacity-aware weight prefers fast links") {
    auto t = relay_pair();
    EdgeLoad load(t.edge_count(), 5.0);
    auto tree = capacity_aware_select_tree(t, load, 0, {3}, 1.0);
    CHECK(tree.edges == std::vector<EdgeId>{0, 1});
    // With uniform capacities both weights agree.
    Topology u = Topology::from_string("s a 1\na b 1\ns b 1\n");
    EdgeLoad lu = {3.0, 0.0, 5.0};
    auto raw = dccast_select_tree(u, lu, u.node("s"), {u.node("b")}, 1.0);
    auto scaled = capacity_aware_select_tree(u, lu, u.node("s"), {u.node("b")}, 1.0);
    CHECK(raw.edges == scaled.edges);
}

TEST_CASE("parallel trees are pairwise edge-disjoint") {
    auto t = relay_pair();
    EdgeLoad load(t.edge_count(), 0.0);
    auto trees = parallel_trees_select(t, load, 0, {3}, 1.0, 2);
    REQUIRE(trees.size() == 2);
    for (EdgeId e : trees[0].edges) CHECK_FALSE(trees[1].contains_edge(e));
    CHECK(trees[0].valid(t));
    CHECK(trees[1].valid(t));
}

TEST_CASE("tree count saturates at the disjoint-route budget") {
    auto t = relay_pair();
    EdgeLoad load(t.edge_count(), 0.0);
    CHECK(parallel_trees_select(t, load, 0, {3}, 1.0, 1).size() == 1);
    CHECK(parallel_trees_select(t, load, 0, {3}, 1.0, 3).size() == 2);
}

TEST_CASE("load updates split the volume across trees") {
    auto t = relay_pair();
    EdgeLoad load(t.edge_count(), 0.0);
    auto trees = parallel_trees_select(t, load, 0, {3}, 10.0, 2);
    REQUIRE(trees.size() == 2);
    parallel_load_update(load, trees, 10.0);
    for (const auto& tr : trees)
        for (EdgeId e : tr.edges) CHECK(load[e] == doctest::Approx(5.0));
    parallel_load_update(load, trees, -3.0);
    for (const auto& tr : trees)
        for (EdgeId e : tr.edges) CHECK(load[e] == doctest::Approx(3.5));
    // Single tree carries the full volume.
    EdgeLoad solo(t.edge_count(), 0.0);
    auto one = parallel_trees_select(t, solo, 0, {3}, 10.0, 1);
    parallel_load_update(solo, one, 10.0);
    for (EdgeId e : one[0].edges) CHECK(solo[e] == doctest::Approx(10.0));
}

TEST_CASE("unreachable receiver throws") {
    Topology t = Topology::from_string("a b 1\nc d 1\n");
    EdgeLoad load(t.edge_count(), 0.0);
    CHECK_THROWS(dccast_select_tree(t, load, t.node("a"), {t.node("d")}, 1.0));
}
