#include <doctest.h>

#include <algorithm>
#include <random>

#include "dcte/partitioning.hpp"

using namespace dcte;

namespace {

void check_partitioning(const Partitioning& p,
                        const std::vector<NodeId>& receivers) {
    std::vector<NodeId> seen;
    for (const auto& part : p.partitions) {
        CHECK_FALSE(part.receivers.empty());
        for (NodeId r : part.receivers) seen.push_back(r);
    }
    auto want = receivers;
    std::sort(seen.begin(), seen.end());
    std::sort(want.begin(), want.end());
    CHECK(seen == want);
}

}  // namespace

TEST_CASE("objective vector run-length weighting") {
    CHECK(objective_star({0, 0, 0, 1, 0, 0}) ==
          std::vector<int>{0, 0, 3, 1, 0, 2});
    CHECK(objective_star({1, 1, 1}) == std::vector<int>{1, 1, 1});
    CHECK(objective_star({0, 0, 0, 0}) == std::vector<int>{0, 0, 0, 4});
    CHECK(objective_star({}) == std::vector<int>{});
}

TEST_CASE("partitioning factor below one forces a single tree") {
    Topology t;
    auto s = t.add_node("s");
    auto a = t.add_node("a");
    auto b = t.add_node("b");
    t.add_edge(s, a, 1.0);
    t.add_edge(s, b, 1.0);
    EdgeLoad load(t.edge_count(), 0.0);
    auto p = quickcast_partition(t, load, s, {a, b}, 1.0, 0.9, 8);
    CHECK(p.partitions.size() == 1);
    check_partitioning(p, {a, b});
    // n_max = 1 never partitions either.
    auto q = quickcast_partition(t, load, s, {a, b}, 1.0, 1.1, 1);
    CHECK(q.partitions.size() == 1);
}

TEST_CASE("disjoint idle branches split within the factor") {
    Topology t;
    auto s = t.add_node("s");
    auto a = t.add_node("a");
    auto b = t.add_node("b");
    t.add_edge(s, a, 1.0);
    t.add_edge(s, b, 1.0);
    EdgeLoad load(t.edge_count(), 0.0);
    // Two singleton trees cost exactly the combined tree, within 1.1x.
    auto p = quickcast_partition(t, load, s, {a, b}, 1.0, 1.1, 8);
    CHECK(p.partitions.size() == 2);
    check_partitioning(p, {a, b});
}

TEST_CASE("chosen layer always respects the weight bound") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 30; ++it) {
        Topology t;
        int n = 6;
        for (int i = 0; i < n; ++i) t.add_node("n" + std::to_string(i));
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 3 == 0 && !t.edge_between(u, v))
                    t.add_edge(u, v, 1.0, true);
        for (int u = 0; u < n; ++u)
            if (!t.edge_between(u, (u + 1) % n))
                t.add_edge(u, (u + 1) % n, 1.0, true);
        EdgeLoad load(t.edge_count());
        for (auto& l : load) l = (rng() % 20) * 0.5;
        std::vector<NodeId> rx = {1, 2, 3, 4};
        double volume = 1.0 + (rng() % 10);
        double p_f = 1.1;
        auto p = quickcast_partition(t, load, 0, rx, volume, p_f, 8);
        check_partitioning(p, rx);
        if (p.partitions.size() > 1) {
            std::vector<double> w(t.edge_count());
            for (EdgeId e = 0; e < t.edge_count(); ++e)
                w[e] = (load[e] + volume) / t.capacity(e);
            auto single = capacity_aware_select_tree(t, load, 0, rx, volume);
            double sum = 0.0;
            for (const auto& part : p.partitions) sum += part.tree.weight(w);
            CHECK(sum <= p_f * single.weight(w) + 1e-9);
        }
    }
}

TEST_CASE("joint completion estimates") {
    // Single partition on a bottleneck-1 chain.
    Topology chain = Topology::from_string("s a 1\na b 1\n");
    Timeline tl(chain);
    SteinerTree tr;
    tr.root = chain.node("s");
    tr.terminals = {chain.node("b")};
    tr.edges = {0, 1};
    CHECK(iris_min_completion_times(chain, tl, {tr}, {5.0}) ==
          std::vector<Slot>{5});

    // Two partitions sharing the sender uplink split it fairly.
    Topology fork = Topology::from_string("s h 1\nh a 1\nh b 1\n");
    Timeline tlf(fork);
    SteinerTree ta{fork.node("s"), {fork.node("a")}, {0, 1}};
    SteinerTree tb{fork.node("s"), {fork.node("b")}, {0, 2}};
    CHECK(iris_min_completion_times(fork, tlf, {ta, tb}, {2.0, 2.0}) ==
          std::vector<Slot>{4, 4});

    // Disjoint partitions drain independently.
    Topology par = Topology::from_string("s a 1\ns b 0.5\n");
    Timeline tlp(par);
    SteinerTree pa{par.node("s"), {par.node("a")}, {0}};
    SteinerTree pb{par.node("s"), {par.node("b")}, {1}};
    CHECK(iris_min_completion_times(par, tlp, {pa, pb}, {2.0, 2.0}) ==
          std::vector<Slot>{2, 4});
}

TEST_CASE("receiver ranking follows downlink speed and load") {
    Topology t = Topology::from_string("s a 10\ns b 1\n");
    Timeline tl(t);
    EdgeLoad load(t.edge_count(), 0.0);
    auto ranks = iris_rank_receivers(t, tl, load, t.node("s"),
                                     {t.node("a"), t.node("b")}, 5.0);
    CHECK(ranks == std::vector<int>{1, 2});

    // Equidistant receivers tie and rank by node id.
    Topology eq = Topology::from_string("s a 1\ns b 1\ns c 1\n");
    Timeline tle(eq);
    EdgeLoad le(eq.edge_count(), 0.0);
    auto req = iris_rank_receivers(eq, tle, le, eq.node("s"),
                                   {eq.node("a"), eq.node("b"), eq.node("c")},
                                   2.0);
    CHECK(req == std::vector<int>{1, 2, 3});

    // A pre-loaded edge pushes its receiver to the back.
    Topology ld = Topology::from_string("s a 1\ns b 1\n");
    Timeline tld(ld);
    for (Slot s = 1; s <= 6; ++s) tld.add(0, s, 1.0);
    EdgeLoad ll(ld.edge_count(), 0.0);
    auto rl = iris_rank_receivers(ld, tld, ll, ld.node("s"),
                                  {ld.node("a"), ld.node("b")}, 2.0);
    CHECK(rl == std::vector<int>{2, 1});
}

TEST_CASE("objective-driven partitioning covers every receiver") {
    Topology t = Topology::from_string(
        "bidirectional true\n"
        "s a 1\ns b 2\nb c 1\na d 1\nb d 2\nc d 1\n");
    Timeline tl(t);
    EdgeLoad load(t.edge_count(), 0.0);
    std::vector<NodeId> rx = {t.node("a"), t.node("b"), t.node("c"),
                              t.node("d")};

    auto zeros = iris_partition(t, tl, load, t.node("s"), rx, 2.0,
                                {0, 0, 0, 0});
    CHECK(zeros.partitions.size() == 1);
    check_partitioning(zeros, rx);

    auto ones = iris_partition(t, tl, load, t.node("s"), rx, 2.0,
                               {1, 1, 1, 1});
    check_partitioning(ones, rx);

    // Determinism.
    auto again = iris_partition(t, tl, load, t.node("s"), rx, 2.0,
                                {1, 1, 1, 1});
    CHECK(again.partitions.size() == ones.partitions.size());
}

TEST_CASE("relaxed model worked examples") {
    auto a = relaxed_partition(1.0, {10.0, 10.0});
    CHECK(a.m == 1);
    auto b = relaxed_partition(100.0, {5.0, 4.0, 3.0});
    CHECK(b.m == 3);
    CHECK(b.avg_rate == doctest::Approx(4.0));
    auto c = relaxed_partition(3.0, {3.0, 1.0});
    CHECK(c.m == 2);
    CHECK(c.receiver_rates[0] == doctest::Approx(2.0));
    CHECK(c.receiver_rates[1] == doctest::Approx(1.0));
    CHECK(c.avg_rate == doctest::Approx(1.5));
    CHECK_THROWS_AS(relaxed_partition(1.0, {1.0, 2.0}), PartitionError);
}

TEST_CASE("relaxed choice never loses to the boundary layouts") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 200; ++it) {
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<double> down(n);
        for (auto& d : down) d = 1.0 + static_cast<double>(rng() % 10);
        std::sort(down.rbegin(), down.rend());
        double up = 1.0 + static_cast<double>(rng() % 30);
        auto best = relaxed_partition(up, down);
        auto avg_for = [&](int m) {
            int fast = n - m + 1;
            std::vector<double> caps;
            caps.push_back(down[fast - 1]);  // group capped by slowest member
            for (int i = fast; i < n; ++i) caps.push_back(down[i]);
            auto rates = single_link_maxmin(up, caps);
            double total = rates[0] * fast;
            for (int i = 1; i < static_cast<int>(rates.size()); ++i)
                total += rates[i];
            return total / n;
        };
        CHECK(best.avg_rate >= avg_for(1) - 1e-9);
        CHECK(best.avg_rate >= avg_for(n) - 1e-9);
    }
}

TEST_CASE("single-link water filling honors caps") {
    auto r = single_link_maxmin(1.0, {0.1, 1e18, 1e18});
    CHECK(r[0] == doctest::Approx(0.1));
    CHECK(r[1] == doctest::Approx(0.45));
    CHECK(r[2] == doctest::Approx(0.45));
}

TEST_CASE("star relaxation bounds") {
    // Single edge: the aggregate equals the real topology, bound tight.
    Topology t = Topology::from_string("a b 1\n");
    auto ct = aggregate_lower_bound(t, {{t.node("a"), {t.node("b")}, 5.0, 0}});
    CHECK(ct == std::vector<double>{5.0});

    // Relay fan-out: both receivers bounded by the shared uplink.
    Topology f = Topology::from_string(
        "bidirectional true\n"
        "a h 1\nh b 1\nh c 1\n");
    auto cf = aggregate_lower_bound(
        f, {{f.node("a"), {f.node("b"), f.node("c")}, 2.0, 0}});
    REQUIRE(cf.size() == 2);
    CHECK(cf[0] == doctest::Approx(2.0));
    CHECK(cf[1] == doctest::Approx(2.0));
}
