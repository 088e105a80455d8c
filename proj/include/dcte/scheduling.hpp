#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dcte/timeline.hpp"

namespace dcte {

// One route of a request (a path or the edge set of a tree) plus its
// committed per-slot rates. The rate applies to every edge of the route.
struct PathSchedule {
    std::vector<EdgeId> edges;
    std::map<Slot, double> rate;  // only slots > t_now carry traffic
};

// A request admitted to the calendar. Multipath requests carry several
// schedules over pairwise edge-disjoint routes.
struct ActiveRequest {
    int id = -1;
    double volume = 0.0;
    double residual = 0.0;
    Slot arrival = 0;
    Slot deadline = -1;  // -1: no deadline
    std::vector<PathSchedule> routes;
    bool complete = false;
    Slot completion_slot = -1;
};

enum class SchedulingPolicy { Alap, Fcfs, Srpt, MaxMinFair };

// Greedy backward fill from the deadline: each slot takes
// min(bottleneck availability, remaining/omega). Commits to the timeline
// only on success; returns nullopt and leaves the timeline untouched when
// the volume does not fit by the deadline.
std::optional<PathSchedule> alap_allocate(Timeline& tl,
                                          const std::vector<EdgeId>& edges,
                                          double volume, Slot deadline);

// Backward sweep allocating on every edge-disjoint route simultaneously
// per slot until the volume is exhausted. All-or-nothing like
// alap_allocate.
std::optional<std::vector<PathSchedule>> alap_allocate_multipath(
    Timeline& tl, const std::vector<std::vector<EdgeId>>& routes, double volume,
    Slot deadline);

// Moves traffic from later slots into slot t_now+1 wherever every edge of
// the owning route has headroom there. Requests visited in arrival order,
// slots ascending; repeats until no feasible pull remains.
void pull_back(Timeline& tl, std::vector<ActiveRequest>& active);

// Moves traffic as late as possible (at most the deadline), ascending slot
// scan repeated to a fixpoint. Requests without deadlines are skipped.
void push_forward(Timeline& tl, std::vector<ActiveRequest>& active);

// Finalizes rates for slot t_now+1, decrements residuals, records
// completions, advances t_now. Returns request id -> finalized rate.
std::map<int, double> walk(Timeline& tl, std::vector<ActiveRequest>& active);

// A route competing for rate in one slot. `cap` bounds the granted rate
// (residual/omega); use +inf for uncapped.
struct RateRequest {
    std::vector<EdgeId> edges;
    double cap = 0.0;
};

// Max-min fair water-filling over the slot's available bandwidth, honoring
// per-route caps. Returns one rate per input route, same order.
std::vector<double> maxmin_rates(const Timeline& tl, Slot slot,
                                 const std::vector<RateRequest>& routes);

struct SrptRequest {
    std::vector<EdgeId> edges;
    double residual = 0.0;
    Slot arrival = 0;
    int id = -1;
};

// Strict priority by smallest residual (ties: earlier arrival, then id);
// each granted min(remaining bottleneck, residual/omega).
std::vector<double> srpt_slot_rates(const Timeline& tl, Slot slot,
                                    const std::vector<SrptRequest>& routes);

// Non-preemptive forward fill from t_now+1: every slot takes
// min(bottleneck availability, remaining/omega) until the volume is
// placed. Commits to the timeline.
PathSchedule fcfs_forward_fill(Timeline& tl, const std::vector<EdgeId>& edges,
                               double volume);

struct SchedulingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcte
