#include "dcte/scheduling.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace dcte {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bottleneck(const Timeline& tl, const std::vector<EdgeId>& edges, Slot t) {
    double b = kInf;
    for (EdgeId e : edges) b = std::min(b, tl.available(e, t));
    return b;
}

void commit(Timeline& tl, const PathSchedule& s, double sign) {
    for (auto& [t, r] : s.rate)
        for (EdgeId e : s.edges) tl.add(e, t, sign * r);
}

}  // namespace

std::optional<PathSchedule> alap_allocate(Timeline& tl,
                                          const std::vector<EdgeId>& edges,
                                          double volume, Slot deadline) {
    auto r = alap_allocate_multipath(tl, {edges}, volume, deadline);
    if (!r) return std::nullopt;
    return (*r)[0];
}

std::optional<std::vector<PathSchedule>> alap_allocate_multipath(
    Timeline& tl, const std::vector<std::vector<EdgeId>>& routes, double volume,
    Slot deadline) {
    if (deadline <= tl.t_now()) return std::nullopt;
    double omega = tl.slot_width();
    double residual = volume;
    std::vector<PathSchedule> out(routes.size());
    for (std::size_t i = 0; i < routes.size(); ++i) out[i].edges = routes[i];
    for (Slot t = deadline; t > tl.t_now() && residual > kFeasTol; --t) {
        for (std::size_t i = 0; i < routes.size() && residual > kFeasTol; ++i) {
            double r = std::min(bottleneck(tl, routes[i], t), residual / omega);
            if (r <= kFeasTol) continue;
            out[i].rate[t] = r;
            residual -= r * omega;
            // Reserve immediately so overlapping edges within one request
            // are not double-booked (routes are normally disjoint).
            for (EdgeId e : routes[i]) tl.add(e, t, r);
        }
    }
    if (residual > kFeasTol) {
        for (const auto& s : out) commit(tl, s, -1.0);
        return std::nullopt;
    }
    return out;
}

void pull_back(Timeline& tl, std::vector<ActiveRequest>& active) {
    Slot target = tl.t_now() + 1;
    std::vector<ActiveRequest*> order;
    for (auto& a : active)
        if (!a.complete) order.push_back(&a);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* a, auto* b) { return a->arrival < b->arrival; });
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto* req : order) {
            for (auto& route : req->routes) {
                for (auto it = route.rate.upper_bound(target); it != route.rate.end();) {
                    double head = bottleneck(tl, route.edges, target);
                    if (head <= kFeasTol) break;
                    double moved = std::min(it->second, head);
                    for (EdgeId e : route.edges) {
                        tl.add(e, it->first, -moved);
                        tl.add(e, target, moved);
                    }
                    route.rate[target] += moved;
                    it->second -= moved;
                    progress = true;
                    if (it->second <= kFeasTol) {
                        double dust = it->second;
                        for (EdgeId e : route.edges) {
                            tl.add(e, it->first, -dust);
                            tl.add(e, target, dust);
                        }
                        route.rate[target] += dust;
                        it = route.rate.erase(it);
                    } else {
                        ++it;
                    }
                }
            }
        }
    }
}

void push_forward(Timeline& tl, std::vector<ActiveRequest>& active) {
    std::vector<ActiveRequest*> order;
    for (auto& a : active)
        if (!a.complete && a.deadline > tl.t_now()) order.push_back(&a);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* a, auto* b) { return a->arrival < b->arrival; });
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto* req : order) {
            for (auto& route : req->routes) {
                // Never move the slot being finalized next (t_now+1).
                for (auto it = route.rate.upper_bound(tl.t_now() + 1);
                     it != route.rate.end();) {
                    Slot s = it->first;
                    double remaining = it->second;
                    for (Slot t = req->deadline; t > s && remaining > kFeasTol; --t) {
                        double head = bottleneck(tl, route.edges, t);
                        double moved = std::min(remaining, head);
                        if (moved <= kFeasTol) continue;
                        for (EdgeId e : route.edges) {
                            tl.add(e, s, -moved);
                            tl.add(e, t, moved);
                        }
                        route.rate[t] += moved;
                        remaining -= moved;
                        progress = true;
                    }
                    if (remaining <= kFeasTol && remaining < it->second) {
                        for (EdgeId e : route.edges) tl.add(e, s, -remaining);
                        // The dust joins the last slot it moved to.
                        it = route.rate.erase(it);
                    } else {
                        it->second = remaining;
                        ++it;
                    }
                }
            }
        }
    }
}

std::map<int, double> walk(Timeline& tl, std::vector<ActiveRequest>& active) {
    Slot t = tl.t_now() + 1;
    double omega = tl.slot_width();
    std::map<int, double> rates;
    for (auto& req : active) {
        if (req.complete) continue;
        double r = 0.0;
        for (auto& route : req.routes) {
            auto it = route.rate.find(t);
            if (it != route.rate.end()) r += it->second;
        }
        rates[req.id] = r;
        req.residual -= r * omega;
        if (req.residual <= kFeasTol) {
            req.residual = 0.0;
            req.complete = true;
            req.completion_slot = t;
        }
    }
    tl.advance();
    return rates;
}

std::vector<double> maxmin_rates(const Timeline& tl, Slot slot,
                                 const std::vector<RateRequest>& routes) {
    int n = static_cast<int>(routes.size());
    std::vector<double> rate(n, 0.0);
    std::vector<bool> frozen(n, false);

    // Headroom per edge actually touched by some route.
    std::map<EdgeId, double> head;
    for (const auto& r : routes)
        for (EdgeId e : r.edges)
            if (!head.count(e)) head[e] = tl.available(e, slot);

    int left = n;
    while (left > 0) {
        // Fill level: min over edges of headroom / #unfrozen crossing.
        double level = kInf;
        EdgeId level_edge = -1;
        for (auto& [e, h] : head) {
            int cnt = 0;
            for (int i = 0; i < n; ++i)
                if (!frozen[i] &&
                    std::find(routes[i].edges.begin(), routes[i].edges.end(), e) !=
                        routes[i].edges.end())
                    ++cnt;
            if (cnt == 0) continue;
            double share = h / cnt;
            if (share < level - kFeasTol) {
                level = share;
                level_edge = e;
            }
        }
        if (level_edge < 0) {
            // Remaining routes touch no contended edge (empty edge lists).
            for (int i = 0; i < n; ++i)
                if (!frozen[i]) {
                    rate[i] = routes[i].cap == kInf ? 0.0 : routes[i].cap;
                    frozen[i] = true;
                    --left;
                }
            break;
        }
        // A route whose cap binds below the fill level freezes first.
        int cap_idx = -1;
        for (int i = 0; i < n; ++i)
            if (!frozen[i] && routes[i].cap < level - kFeasTol &&
                (cap_idx < 0 || routes[i].cap < routes[cap_idx].cap))
                cap_idx = i;
        if (cap_idx >= 0) {
            rate[cap_idx] = std::max(0.0, routes[cap_idx].cap);
            frozen[cap_idx] = true;
            --left;
            for (EdgeId e : routes[cap_idx].edges)
                head[e] = std::max(0.0, head[e] - rate[cap_idx]);
            continue;
        }
        // Freeze every unfrozen route crossing the bottleneck edge.
        for (int i = 0; i < n; ++i) {
            if (frozen[i]) continue;
            if (std::find(routes[i].edges.begin(), routes[i].edges.end(),
                          level_edge) == routes[i].edges.end())
                continue;
            rate[i] = std::min(level, routes[i].cap);
            frozen[i] = true;
            --left;
            for (EdgeId e : routes[i].edges)
                head[e] = std::max(0.0, head[e] - rate[i]);
        }
    }
    return rate;
}

std::vector<double> srpt_slot_rates(const Timeline& tl, Slot slot,
                                    const std::vector<SrptRequest>& routes) {
    int n = static_cast<int>(routes.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (routes[a].residual != routes[b].residual)
            return routes[a].residual < routes[b].residual;
        if (routes[a].arrival != routes[b].arrival)
            return routes[a].arrival < routes[b].arrival;
        return routes[a].id < routes[b].id;
    });
    std::map<EdgeId, double> head;
    for (const auto& r : routes)
        for (EdgeId e : r.edges)
            if (!head.count(e)) head[e] = tl.available(e, slot);
    double omega = tl.slot_width();
    std::vector<double> rate(n, 0.0);
    for (int i : order) {
        double b = kInf;
        for (EdgeId e : routes[i].edges) b = std::min(b, head[e]);
        double r = std::min(b, routes[i].residual / omega);
        if (r <= kFeasTol) continue;
        rate[i] = r;
        for (EdgeId e : routes[i].edges) head[e] -= r;
    }
    return rate;
}

PathSchedule fcfs_forward_fill(Timeline& tl, const std::vector<EdgeId>& edges,
                               double volume) {
    PathSchedule s;
    s.edges = edges;
    double omega = tl.slot_width();
    double residual = volume;
    for (Slot t = tl.t_now() + 1; residual > kFeasTol; ++t) {
        if (t > tl.t_now() + 100000000)
            throw SchedulingError("forward fill did not terminate");
        double r = std::min(bottleneck(tl, edges, t), residual / omega);
        if (r <= kFeasTol) continue;
        s.rate[t] = r;
        residual -= r * omega;
        for (EdgeId e : edges) tl.add(e, t, r);
    }
    return s;
}

}  // namespace dcte
