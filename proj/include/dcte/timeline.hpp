#pragma once

#include <cstdint>
#include <vector>

#include "dcte/topology.hpp"

namespace dcte {

using Slot = std::int64_t;

inline constexpr double kFeasTol = 1e-9;

// Optional per-edge periodic reservation standing in for high-priority
// user traffic. Active every `period` slots for one slot, taking
// `fraction` of the edge capacity.
struct BackgroundReservation {
    double fraction = 0.0;  // of capacity, [0,1)
    Slot period = 0;        // 0 disables
    Slot phase = 0;
};

// Per-edge, per-slot allocated bandwidth for slots > t_now. Single
// writer; one Timeline belongs to one scenario run.
class Timeline {
public:
    explicit Timeline(const Topology& topo, double slot_width = 1.0);

    double slot_width() const { return slot_width_; }
    Slot t_now() const { return t_now_; }
    Slot t_end() const { return t_end_; }
    void advance() { ++t_now_; }

    double allocated(EdgeId e, Slot t) const;
    // C_e - alloc(e,t) - background(e,t), clamped at zero. Requires t > t_now.
    double available(EdgeId e, Slot t) const;
    double background(EdgeId e, Slot t) const;

    // Adds amount (may be negative) to alloc(e,t); asserts 0 <= alloc <= C_e.
    void add(EdgeId e, Slot t, double amount);

    // Sum of alloc(e,t') for t_now < t' <= t. L_e(t) in load-based routing.
    double load_until(EdgeId e, Slot t) const;
    // L_e = L_e(t_end).
    double total_load(EdgeId e) const { return load_until(e, t_end_); }

    void set_background(EdgeId e, const BackgroundReservation& r);

private:
    const Topology* topo_;
    double slot_width_;
    Slot t_now_ = 0;
    Slot t_end_ = 0;
    // Dense per-edge vectors indexed by absolute slot.
    std::vector<std::vector<double>> alloc_;
    std::vector<BackgroundReservation> bg_;

    void check_edge(EdgeId e) const;
};

struct TimelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcte
