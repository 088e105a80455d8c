#include "dcte/admission.hpp"

#include <limits>

#include "dcte/routing.hpp"

namespace dcte {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> deadline_costs(const Topology& topo, const Timeline& tl,
                                   const DeadlineRequest& req) {
    std::vector<double> w(topo.edge_count());
    for (EdgeId e = 0; e < topo.edge_count(); ++e)
        w[e] = tl.load_until(e, req.deadline) + req.volume;
    return w;
}

void check_unicast(const Timeline& tl, const DeadlineRequest& req) {
    if (req.receivers.size() != 1)
        throw AdmissionError("unicast admitter expects exactly one receiver");
    if (req.deadline <= tl.t_now()) throw AdmissionError("deadline in the past");
}

ActiveRequest make_active(const DeadlineRequest& req,
                          std::vector<PathSchedule> routes) {
    ActiveRequest a;
    a.id = req.id;
    a.volume = req.volume;
    a.residual = req.volume;
    a.arrival = req.arrival;
    a.deadline = req.deadline;
    a.routes = std::move(routes);
    return a;
}

}  // namespace

std::optional<ActiveRequest> dcroute_admit(const Topology& topo, Timeline& tl,
                                           const DeadlineRequest& req) {
    return mp_dcroute_admit(topo, tl, req, 1);
}

std::optional<ActiveRequest> mp_dcroute_admit(const Topology& topo, Timeline& tl,
                                              const DeadlineRequest& req, int k) {
    check_unicast(tl, req);
    if (k < 1) throw AdmissionError("k must be >= 1");
    auto w = deadline_costs(topo, tl, req);
    std::vector<std::vector<EdgeId>> paths;
    for (int i = 0; i < k; ++i) {
        std::vector<EdgeId> p;
        try {
            p = min_cost_path(topo, req.src, req.receivers[0], w);
        } catch (const RoutingError&) {
            if (paths.empty()) throw AdmissionError("receiver unreachable");
            break;  // graph disconnected after deletions
        }
        for (EdgeId e : p) w[e] = kInf;  // delete for the next round
        paths.push_back(std::move(p));
    }
    auto alloc = alap_allocate_multipath(tl, paths, req.volume, req.deadline);
    if (!alloc) return std::nullopt;
    return make_active(req, std::move(*alloc));
}

std::optional<ActiveRequest> ddccast_admit(const Topology& topo, Timeline& tl,
                                           const DeadlineRequest& req,
                                           SteinerTree* tree_out) {
    if (req.receivers.empty()) throw AdmissionError("no receivers");
    if (req.deadline <= tl.t_now()) throw AdmissionError("deadline in the past");
    auto w = deadline_costs(topo, tl, req);
    SteinerTree tree;
    try {
        tree = min_weight_steiner(topo, w, req.src, req.receivers);
    } catch (const SteinerError&) {
        throw AdmissionError("receiver unreachable");
    }
    // The summed bottleneck test is exactly backward-fill feasibility, so a
    // single ALAP attempt decides admission without touching state on
    // rejection.
    auto alloc = alap_allocate(tl, tree.edges, req.volume, req.deadline);
    if (!alloc) return std::nullopt;
    if (tree_out) *tree_out = tree;
    return make_active(req, {std::move(*alloc)});
}

}  // namespace dcte
