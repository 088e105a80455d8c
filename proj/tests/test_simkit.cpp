#include <doctest.h>

#include <cmath>

#include "dcte/simkit.hpp"

using namespace dcte;

namespace {

Topology chain3() {
    return Topology::from_string("a b 1\nb c 1\nc d 1\n");
}

}  // namespace

TEST_CASE("sampler moments") {
    DetRng rng(1);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.exponential(20.0);
    CHECK(sum / n == doctest::Approx(20.0).epsilon(0.05));

    DetRng rng2(2);
    double psum = 0.0, pmin = 1e18, pmax = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = rng2.bounded_pareto(2.0, 20.0, 2000.0);
        psum += v;
        pmin = std::min(pmin, v);
        pmax = std::max(pmax, v);
    }
    CHECK(pmin >= 2.0);
    CHECK(pmax <= 2000.0);
    // alpha = mean / (mean - min) = 10/9; the cap trims the unbounded mean.
    CHECK(psum / n > 10.0);
    CHECK(psum / n < 25.0);
}

TEST_CASE("trace generation is deterministic and parameter-faithful") {
    auto t = chain3();
    TraceConfig tc;
    tc.count = 500;
    tc.lambda = 2.0;
    tc.receivers = 2;
    auto a = generate_trace(t, tc, 11);
    auto b = generate_trace(t, tc, 11);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].arrival == b[i].arrival);
        CHECK(a[i].volume == b[i].volume);
        CHECK(a[i].src == b[i].src);
        CHECK(a[i].receivers == b[i].receivers);
        CHECK(a[i].receivers.size() == 2);
        for (NodeId r : a[i].receivers) CHECK(r != a[i].src);
        CHECK(a[i].volume > 0.0);
    }
    auto c = generate_trace(t, tc, 12);
    bool differs = false;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i].volume != a[i].volume) differs = true;
    CHECK(differs);

    TraceConfig off = tc;
    off.lambda = 0.0;
    CHECK(generate_trace(t, off, 1).empty());

    TraceConfig too_many = tc;
    too_many.receivers = 4;
    CHECK_THROWS_AS(generate_trace(t, too_many, 1), SimError);
}

TEST_CASE("deadline traces put every deadline after its arrival") {
    auto t = Topology::from_file("data/gscale.topo");
    auto tc = trace_preset("CH4_DEADLINE");
    tc.count = 200;
    for (const auto& r : generate_trace(t, tc, 3)) {
        CHECK(r.deadline > r.arrival);
        CHECK(r.volume > 0.0);
    }
}

TEST_CASE("scheme and policy names round-trip") {
    for (const char* name :
         {"UNICAST", "DCROUTE", "MP-DCROUTE", "DDCCAST", "DCCAST", "QUICKCAST",
          "IRIS", "PARALLEL-TREES"})
        CHECK(scheme_name(scheme_from_name(name)) == name);
    CHECK_THROWS_AS(scheme_from_name("NOPE"), SimError);
    CHECK_THROWS_AS(sched_from_name("NOPE"), SimError);
}

TEST_CASE("one transfer on an idle path") {
    auto t = chain3();
    std::vector<TransferRequest> trace = {
        {0, t.node("a"), {t.node("d")}, 3.0, 0, -1, {}}};
    ScenarioConfig cfg;
    cfg.scheme = Scheme::Unicast;
    cfg.sched = SchedulingPolicy::Fcfs;
    auto rr = run_scenario(t, trace, cfg, 1);
    REQUIRE(rr.metrics.completion_times.size() == 1);
    CHECK(rr.metrics.completion_times[0] == doctest::Approx(3.0));
    CHECK(rr.metrics.total_bandwidth == doctest::Approx(9.0));  // 3 units x 3 edges
}

TEST_CASE("fair sharing finishes equal twins together") {
    Topology t = Topology::from_string("a b 1\n");
    std::vector<TransferRequest> trace = {
        {0, t.node("a"), {t.node("b")}, 2.0, 0, -1, {}},
        {1, t.node("a"), {t.node("b")}, 2.0, 0, -1, {}}};
    ScenarioConfig cfg;
    cfg.scheme = Scheme::Unicast;
    cfg.sched = SchedulingPolicy::MaxMinFair;
    auto rr = run_scenario(t, trace, cfg, 1);
    REQUIRE(rr.metrics.completion_times.size() == 2);
    CHECK(rr.metrics.completion_times[0] == doctest::Approx(4.0));
    CHECK(rr.metrics.completion_times[1] == doctest::Approx(4.0));
}

TEST_CASE("hopeless deadlines admit nothing") {
    auto t = chain3();
    std::vector<TransferRequest> trace;
    for (int i = 0; i < 5; ++i)
        trace.push_back({i, t.node("a"), {t.node("d")}, 50.0, 0, 2, {}});
    ScenarioConfig cfg;
    cfg.scheme = Scheme::DcRoute;
    auto rr = run_scenario(t, trace, cfg, 1);
    CHECK(rr.metrics.admitted == 0);
    CHECK(rr.metrics.total_bandwidth == doctest::Approx(0.0));
}

TEST_CASE("admitted deadline transfers land inside their deadlines") {
    auto t = Topology::from_file("data/gscale.topo");
    auto tc = trace_preset("CH4_DEADLINE");
    tc.count = 120;
    tc.lambda = 0.5;
    auto trace = generate_trace(t, tc, 5);
    for (Scheme s : {Scheme::DcRoute, Scheme::MpDcRoute, Scheme::DdcCast}) {
        ScenarioConfig cfg;
        cfg.scheme = s;
        auto rr = run_scenario(t, trace, cfg, 5);
        for (const auto& log : rr.logs)
            if (log.admitted) {
                CHECK(log.completion >= 0);
                CHECK(log.completion <= log.deadline);
            }
    }
}

TEST_CASE("scenario runs are seed-deterministic") {
    auto t = Topology::from_file("data/gscale.topo");
    TraceConfig tc;
    tc.count = 60;
    tc.lambda = 0.2;
    tc.receivers = 3;
    auto trace = generate_trace(t, tc, 4);
    for (Scheme s : {Scheme::DcCast, Scheme::QuickCast, Scheme::Iris,
                     Scheme::ParallelTrees}) {
        ScenarioConfig cfg;
        cfg.scheme = s;
        auto a = run_scenario(t, trace, cfg, 4);
        auto b = run_scenario(t, trace, cfg, 4);
        CHECK(a.metrics.completion_times == b.metrics.completion_times);
        CHECK(a.metrics.total_bandwidth == b.metrics.total_bandwidth);
    }
}

TEST_CASE("percentiles and metric roll-ups") {
    CHECK(percentile_of({4.0}, 99.9) == doctest::Approx(4.0));
    CHECK(percentile_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 50.0) ==
          doctest::Approx(5.0));
    CHECK(percentile_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 100.0) ==
          doctest::Approx(10.0));

    std::vector<RequestLog> logs(1);
    logs[0].admitted = true;
    logs[0].volume = 2.0;
    auto m = compute_metrics(logs, {4.0}, 8.0, 99.9);
    CHECK(m.mean == doctest::Approx(4.0));
    CHECK(m.median == doctest::Approx(4.0));
    CHECK(m.tail == doctest::Approx(4.0));
    CHECK(m.admitted == 1);
    CHECK(m.total_bandwidth == doctest::Approx(8.0));
}

TEST_CASE("gap harness sanity at desk scale") {
    auto t = Topology::from_file("data/gscale.topo");
    auto rep = measure_bwr_gap(t, 2.0, 5.0, 60, 1, false);
    CHECK(rep.measured == 60);
    CHECK(rep.mean_gap >= 0.0);
    CHECK(rep.equal_frac >= 0.5);
    auto fast = measure_bwr_gap(t, 2.0, 5.0, 60, 1, true);
    CHECK(fast.measured == 60);
    CHECK(fast.mean_gap >= 0.0);
}
