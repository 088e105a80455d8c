#pragma once

#include <optional>

#include "dcte/scheduling.hpp"
#include "dcte/steiner.hpp"

namespace dcte {

// A deadline-constrained transfer up for admission.
struct DeadlineRequest {
    int id = -1;
    NodeId src = -1;
    std::vector<NodeId> receivers;  // exactly one for the unicast admitters
    double volume = 0.0;
    Slot arrival = 0;
    Slot deadline = 0;
};

// Single-path admission: min-cost path under cost L_e(t_d) + V, then ALAP
// placement. Returns the scheduled request on admit; nullopt on reject,
// leaving the timeline untouched.
std::optional<ActiveRequest> dcroute_admit(const Topology& topo, Timeline& tl,
                                           const DeadlineRequest& req);

// Multipath variant: up to k min-cost paths found iteratively with edge
// deletion, then a parallel backward fill across all of them.
std::optional<ActiveRequest> mp_dcroute_admit(const Topology& topo, Timeline& tl,
                                              const DeadlineRequest& req, int k);

// Multicast deadline admission: Steiner tree under weight V + L_e(t_d),
// admitted iff the summed per-slot tree bottleneck availability covers the
// volume, then ALAP at a uniform tree rate.
std::optional<ActiveRequest> ddccast_admit(const Topology& topo, Timeline& tl,
                                           const DeadlineRequest& req,
                                           SteinerTree* tree_out = nullptr);

struct AdmissionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcte
