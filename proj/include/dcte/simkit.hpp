#pragma once

#include <cstdint>
#include <string>

#include "dcte/admission.hpp"
#include "dcte/partitioning.hpp"
#include "dcte/routing.hpp"

namespace dcte {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic sampling helpers over a fixed-width generator. Inverse-CDF
// forms only, so traces are bit-identical across platforms for one seed.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : rng_(seed) {}

    double uniform01() {  // in [0, 1)
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    double exponential(double mean);
    // Bounded Pareto with xm = min and alpha chosen so the unbounded mean
    // matches `mean` (alpha = mean / (mean - min)); samples clamped at cap.
    double bounded_pareto(double min, double mean, double cap);
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return rng_() % n; }
    std::mt19937_64& raw() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct TransferRequest {
    int id = -1;
    NodeId src = -1;
    std::vector<NodeId> receivers;
    double volume = 0.0;
    Slot arrival = 0;
    Slot deadline = -1;      // -1: none
    std::vector<int> pi;     // objective vector; empty = all ones
};

struct TraceConfig {
    int count = 100;           // arrivals to generate
    double lambda = 1.0;       // Poisson arrival rate per slot
    int receivers = 1;         // receivers per transfer
    std::string size_dist = "exp";  // exp | pareto | deadline_scaled
    double size_mean = 20.0;
    double size_min = 2.0;     // pareto only
    double size_cap = 2000.0;  // pareto only
    bool deadlines = false;
    double deadline_mean = 10.0;
    // deadline_scaled sizes: V ~ Exp(mean = fraction * max volume sendable
    // on the min-hop path before the deadline).
    double deadline_volume_fraction = 0.125;
};

// Named parameter presets for common evaluation setups.
TraceConfig trace_preset(const std::string& name);

std::vector<TransferRequest> generate_trace(const Topology& topo,
                                            const TraceConfig& cfg,
                                            std::uint64_t seed);

enum class Scheme {
    Unicast,        // one point-to-point job per receiver, path per RoutePolicy
    DcRoute,        // deadline, single path
    MpDcRoute,      // deadline, k edge-disjoint paths
    DdcCast,        // deadline, multicast tree
    DcCast,         // P2MP single tree, raw-load weight
    QuickCast,      // P2MP partitioned trees
    Iris,           // P2MP objective-vector partitioned trees
    ParallelTrees,  // P2MP k edge-disjoint trees sharing the volume
};

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);
SchedulingPolicy sched_from_name(const std::string& name);
std::string sched_name(SchedulingPolicy p);

struct ScenarioConfig {
    Scheme scheme = Scheme::Unicast;
    RoutePolicy route_policy;  // Unicast only
    // Rate policy for the non-deadline engines; deadline engines are ALAP
    // by construction. Defaults depend on the scheme when unset.
    std::optional<SchedulingPolicy> sched;
    double omega = 1.0;
    double p_f = 1.1;
    int n_max = 8;
    int k_paths = 2;   // MpDcRoute
    int k_trees = 2;   // ParallelTrees
    double percentile = 99.9;
    BackgroundReservation background;  // applied to every edge when enabled
};

SchedulingPolicy default_sched(Scheme s);

struct RequestLog {
    int id = -1;
    bool admitted = false;
    int route_count = 0;
    int receiver_count = 0;
    double volume = 0.0;
    Slot arrival = 0;
    Slot deadline = -1;
    Slot completion = -1;  // last receiver; -1 if rejected
    bool fallback = false; // routing fell back to the fast heuristic
};

struct MetricsReport {
    std::vector<double> completion_times;  // per receiver, slots after arrival
    double mean = 0.0;
    double median = 0.0;
    double tail = 0.0;
    double percentile = 99.9;
    double total_bandwidth = 0.0;  // sum over edges/slots of carried units
    int requests = 0;
    int admitted = 0;
    double admitted_ratio = 1.0;
    double volume_total = 0.0;
    double volume_admitted = 0.0;
    double admitted_traffic_ratio = 1.0;
    double runtime_sec = 0.0;
};

struct RunResult {
    MetricsReport metrics;
    std::vector<RequestLog> logs;
};

// Nearest-rank percentile of an unsorted sample; p in (0, 100].
double percentile_of(std::vector<double> values, double p);

MetricsReport compute_metrics(const std::vector<RequestLog>& logs,
                              const std::vector<double>& completion_times,
                              double total_bandwidth, double percentile);

RunResult run_scenario(const Topology& topo,
                       const std::vector<TransferRequest>& trace,
                       const ScenarioConfig& cfg, std::uint64_t seed);

struct GapReport {
    int measured = 0;
    double mean_gap = 0.0;
    double max_gap = 0.0;
    double equal_frac = 0.0;  // instances where the heuristic matched exactly
};

// Draining evaluation for the bottleneck-avoiding heuristics: Poisson
// arrivals at `lambda` per slot, integer volumes ~ Exp(mu), per-slot max-min
// fair sharing on the heuristic's chosen paths. Each arrival's path weight is
// compared against the exhaustive optimum over the live flow snapshot.
GapReport measure_bwr_gap(const Topology& topo, double lambda, double mu,
                          int arrivals, std::uint64_t seed, bool use_fast);

}  // namespace dcte
