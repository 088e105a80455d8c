#include <doctest.h>

#include "dcte/timeline.hpp"
#include "dcte/topology.hpp"

using namespace dcte;

namespace {

Topology line4() {
    return Topology::from_string(
        "a b 1\n"
        "b c 1\n"
        "c d 1\n");
}

}  // namespace

TEST_CASE("edge-list parsing") {
    auto t = Topology::from_string(
        "# comment\n"
        "bidirectional true\n"
        "x y 2.5\n"
        "y z 1\n");
    CHECK(t.node_count() == 3);
    CHECK(t.edge_count() == 4);
    auto e = t.edge_between(t.node("y"), t.node("x"));
    REQUIRE(e.has_value());
    CHECK(t.capacity(*e) == doctest::Approx(2.5));
}

TEST_CASE("self loops and duplicate edges rejected") {
    CHECK_THROWS_AS(Topology::from_string("a a 1\n"), TopologyError);
    CHECK_THROWS_AS(Topology::from_string("a b 1\na b 2\n"), TopologyError);
    CHECK_THROWS_AS(Topology::from_string("a b 0\n"), TopologyError);
    CHECK_THROWS_AS(Topology::from_string("a b -1\n"), TopologyError);
}

TEST_CASE("hop distance") {
    auto t = line4();
    CHECK(*t.hop_distance(t.node("a"), t.node("b")) == 1);
    CHECK(*t.hop_distance(t.node("a"), t.node("a")) == 0);
    CHECK(*t.hop_distance(t.node("a"), t.node("d")) == 3);
    // Directed line: no way back.
    CHECK_FALSE(t.hop_distance(t.node("d"), t.node("a")).has_value());
    CHECK(*t.hop_distance_undirected(t.node("d"), t.node("a")) == 3);
}

TEST_CASE("capacity normalization") {
    auto t = Topology::from_string("a b 10\nb c 2\n");
    t.normalize_capacities();
    CHECK(t.capacity(0) == doctest::Approx(1.0));
    CHECK(t.capacity(1) == doctest::Approx(0.2));
}

TEST_CASE("available bandwidth") {
    auto t = line4();
    Timeline tl(t);
    CHECK(tl.available(0, 1) == doctest::Approx(1.0));
    tl.add(0, 3, 0.4);
    CHECK(tl.available(0, 3) == doctest::Approx(0.6));
    // Background reservation active every slot, stacked with allocation.
    tl.set_background(0, {0.3, 1, 0});
    CHECK(tl.available(0, 3) == doctest::Approx(0.3));
    CHECK_THROWS_AS(tl.available(0, 0), TimelineError);
    CHECK_THROWS_AS(tl.available(99, 1), TimelineError);
}

TEST_CASE("load prefix sums") {
    auto t = line4();
    Timeline tl(t);
    tl.add(1, 1, 0.5);
    tl.add(1, 2, 0.5);
    CHECK(tl.load_until(1, 2) == doctest::Approx(1.0));
    CHECK(tl.load_until(1, 1) == doctest::Approx(0.5));
    CHECK(tl.load_until(0, 10) == doctest::Approx(0.0));
    Timeline tl2(t);
    tl2.add(0, 5, 1.0);
    CHECK(tl2.load_until(0, 4) == doctest::Approx(0.0));
    CHECK(tl2.total_load(0) == doctest::Approx(1.0));
}

TEST_CASE("allocation bounds") {
    auto t = line4();
    Timeline tl(t);
    tl.add(0, 1, 1.0);
    tl.add(0, 1, -1.0);
    CHECK(tl.allocated(0, 1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(tl.add(0, 0, 0.5), TimelineError);
    tl.advance();
    CHECK(tl.t_now() == 1);
    CHECK_THROWS_AS(tl.add(0, 1, 0.5), TimelineError);
}
