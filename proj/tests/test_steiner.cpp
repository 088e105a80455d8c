#include <doctest.h>

#include <random>

#include "dcte/routing.hpp"
#include "dcte/steiner.hpp"

using namespace dcte;

namespace {

std::vector<double> unit_weights(const Topology& t) {
    return std::vector<double>(t.edge_count(), 1.0);
}

Topology random_graph(std::mt19937_64& rng, int n, double p) {
    Topology t;
    for (int i = 0; i < n; ++i) t.add_node("n" + std::to_string(i));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if ((rng() >> 11) * 0x1.0p-53 < p)
                t.add_edge(u, v, 1.0, true);
    // Ring backbone keeps everything connected.
    for (int u = 0; u < n; ++u)
        if (!t.edge_between(u, (u + 1) % n))
            t.add_edge(u, (u + 1) % n, 1.0, true);
    return t;
}

}  // namespace

TEST_CASE("single terminal reduces to a shortest path") {
    auto t = Topology::from_string(
        "bidirectional true\n"
        "a b 1\nb c 1\nc d 1\na d 1\n");
    auto w = unit_weights(t);
    auto tree = min_weight_steiner(t, w, t.node("a"), {t.node("d")});
    CHECK(tree.valid(t));
    CHECK(tree.edges.size() == 1);
    CHECK(tree.weight(w) == doctest::Approx(1.0));
}

TEST_CASE("star topology takes the direct edges") {
    Topology t;
    auto r = t.add_node("r");
    auto a = t.add_node("a");
    auto b = t.add_node("b");
    auto c = t.add_node("c");
    t.add_edge(r, a, 1.0);
    t.add_edge(r, b, 1.0);
    t.add_edge(r, c, 1.0);
    auto w = unit_weights(t);
    auto tree = min_weight_steiner(t, w, r, {a, b, c});
    CHECK(tree.valid(t));
    CHECK(tree.edges.size() == 3);
}

TEST_CASE("terminals spanning a tree topology force the whole tree") {
    auto t = Topology::from_string(
        "r a 1\nr b 1\na c 1\na d 1\n");
    auto w = unit_weights(t);
    auto tree = min_weight_steiner(t, w, t.node("r"),
                                   {t.node("a"), t.node("b"), t.node("c"),
                                    t.node("d")});
    CHECK(tree.valid(t));
    CHECK(tree.edges.size() == 4);
}

TEST_CASE("cycle with a chord matches the exact oracle") {
    auto t = Topology::from_string(
        "bidirectional true\n"
        "n0 n1 1\nn1 n2 1\nn2 n3 1\nn3 n4 1\nn4 n5 1\nn5 n0 1\nn0 n3 1\n");
    std::vector<double> w = {3, 3, 1, 1, 2, 2, 1, 1, 2, 2, 3, 3, 1, 1};
    auto h = min_weight_steiner(t, w, t.node("n0"), {t.node("n2"), t.node("n4")});
    auto e = exact_steiner_oracle(t, w, t.node("n0"), {t.node("n2"), t.node("n4")});
    CHECK(h.valid(t));
    CHECK(e.valid(t));
    CHECK(h.weight(w) == doctest::Approx(e.weight(w)));
}

TEST_CASE("heuristic stays within 2x of the oracle on random instances") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 40; ++it) {
        auto t = random_graph(rng, 8, 0.3);
        std::vector<double> w(t.edge_count());
        for (auto& x : w) x = 1.0 + (rng() >> 11) * 0x1.0p-53 * 9.0;
        NodeId root = static_cast<NodeId>(rng() % 8);
        std::vector<NodeId> terms;
        while (terms.size() < 3) {
            NodeId v = static_cast<NodeId>(rng() % 8);
            if (v != root && std::find(terms.begin(), terms.end(), v) == terms.end())
                terms.push_back(v);
        }
        auto h = min_weight_steiner(t, w, root, terms);
        auto e = exact_steiner_oracle(t, w, root, terms);
        CHECK(h.valid(t));
        CHECK(h.weight(w) >= e.weight(w) - 1e-9);
        CHECK(h.weight(w) <= 2.0 * e.weight(w) + 1e-9);
    }
}

TEST_CASE("raising an unused edge's weight leaves the tree weight alone") {
    std::mt19937_64 rng(7);
    auto t = random_graph(rng, 8, 0.35);
    std::vector<double> w(t.edge_count(), 1.0);
    auto tree = min_weight_steiner(t, w, 0, {3, 5, 6});
    double before = tree.weight(w);
    for (EdgeId e = 0; e < t.edge_count(); ++e)
        if (!tree.contains_edge(e)) w[e] += 10.0;
    auto again = min_weight_steiner(t, w, 0, {3, 5, 6});
    CHECK(again.weight(w) == doctest::Approx(before));
}

TEST_CASE("unreachable terminal throws") {
    auto t = Topology::from_string("a b 1\nc d 1\n");
    auto w = unit_weights(t);
    CHECK_THROWS_AS(min_weight_steiner(t, w, t.node("a"), {t.node("d")}),
                    SteinerError);
    CHECK_THROWS_AS(exact_steiner_oracle(t, w, t.node("a"), {t.node("d")}),
                    SteinerError);
}

TEST_CASE("oracle guard rejects oversized instances") {
    std::mt19937_64 rng(1);
    auto t = random_graph(rng, 13, 0.3);
    auto w = unit_weights(t);
    CHECK_THROWS_AS(exact_steiner_oracle(t, w, 0, {1, 2}), SteinerError);
}
