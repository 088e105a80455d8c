#include "dcte/timeline.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace dcte {

Timeline::Timeline(const Topology& topo, double slot_width)
    : topo_(&topo), slot_width_(slot_width) {
    alloc_.resize(topo.edge_count());
    bg_.resize(topo.edge_count());
}

void Timeline::check_edge(EdgeId e) const {
    if (e < 0 || e >= static_cast<EdgeId>(alloc_.size()))
        throw TimelineError("unknown edge id " + std::to_string(e));
}

double Timeline::allocated(EdgeId e, Slot t) const {
    check_edge(e);
    const auto& v = alloc_[e];
    if (t < 0 || t >= static_cast<Slot>(v.size())) return 0.0;
    return v[t];
}

double Timeline::background(EdgeId e, Slot t) const {
    check_edge(e);
    const auto& r = bg_[e];
    if (r.period <= 0 || r.fraction <= 0.0) return 0.0;
    if ((t - r.phase) % r.period != 0) return 0.0;
    return r.fraction * topo_->capacity(e);
}

double Timeline::available(EdgeId e, Slot t) const {
    check_edge(e);
    if (t <= t_now_) throw TimelineError("available() queried at slot <= t_now");
    double v = topo_->capacity(e) - allocated(e, t) - background(e, t);
    return std::max(0.0, v);
}

void Timeline::add(EdgeId e, Slot t, double amount) {
    check_edge(e);
    if (t <= t_now_) throw TimelineError("allocation at slot <= t_now");
    auto& v = alloc_[e];
    if (t >= static_cast<Slot>(v.size())) v.resize(t + 1, 0.0);
    v[t] += amount;
    // Clamp float dust; anything beyond tolerance is a real bug.
    assert(v[t] >= -kFeasTol && v[t] <= topo_->capacity(e) + kFeasTol);
    v[t] = std::clamp(v[t], 0.0, topo_->capacity(e));
    t_end_ = std::max(t_end_, t);
}

double Timeline::load_until(EdgeId e, Slot t) const {
    check_edge(e);
    const auto& v = alloc_[e];
    double sum = 0.0;
    Slot hi = std::min(t, static_cast<Slot>(v.size()) - 1);
    for (Slot s = t_now_ + 1; s <= hi; ++s) sum += v[s];
    return sum;
}

void Timeline::set_background(EdgeId e, const BackgroundReservation& r) {
    check_edge(e);
    bg_[e] = r;
}

}  // namespace dcte
