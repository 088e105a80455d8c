#include "dcte/simkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace dcte {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Slot kSlotGuard = 10000000;
}

double DetRng::exponential(double mean) {
    if (mean <= 0.0) throw SimError("exponential mean must be positive");
    double u = uniform01();
    return -mean * std::log1p(-u);
}

double DetRng::bounded_pareto(double min, double mean, double cap) {
    if (min <= 0.0 || mean <= min || cap < min)
        throw SimError("pareto needs 0 < min < mean, cap >= min");
    double alpha = mean / (mean - min);
    double u = uniform01();
    double x = min / std::pow(1.0 - u, 1.0 / alpha);
    return std::min(x, cap);
}

TraceConfig trace_preset(const std::string& name) {
    TraceConfig c;
    if (name == "CH4_DEADLINE") {
        c.receivers = 1;
        c.deadlines = true;
        c.deadline_mean = 10.0;
        c.size_dist = "deadline_scaled";
        c.deadline_volume_fraction = 0.125;
    } else if (name == "CH5_P2MP") {
        c.receivers = 4;
        c.size_dist = "exp";
        c.size_mean = 20.0;
    } else if (name == "CH6_QUICKCAST") {
        c.receivers = 8;
        c.size_dist = "pareto";
        c.size_min = 2.0;
        c.size_mean = 20.0;
        c.size_cap = 2000.0;
    } else {
        throw SimError("unknown trace preset: " + name);
    }
    return c;
}

std::vector<TransferRequest> generate_trace(const Topology& topo,
                                            const TraceConfig& cfg,
                                            std::uint64_t seed) {
    std::vector<TransferRequest> out;
    if (cfg.lambda <= 0.0 || cfg.count <= 0) return out;
    if (cfg.receivers >= topo.node_count())
        throw SimError("more receivers than non-source nodes");
    if (cfg.receivers < 1) throw SimError("receivers must be >= 1");
    DetRng rng(seed);
    double clock = 0.0;
    for (int i = 0; i < cfg.count; ++i) {
        clock += rng.exponential(1.0 / cfg.lambda);
        TransferRequest r;
        r.id = i;
        r.arrival = static_cast<Slot>(std::floor(clock));
        r.src = static_cast<NodeId>(rng.below(topo.node_count()));
        while (static_cast<int>(r.receivers.size()) < cfg.receivers) {
            NodeId v = static_cast<NodeId>(rng.below(topo.node_count()));
            if (v == r.src) continue;
            if (std::find(r.receivers.begin(), r.receivers.end(), v) !=
                r.receivers.end())
                continue;
            r.receivers.push_back(v);
        }
        if (cfg.deadlines)
            r.deadline = r.arrival +
                         std::max<Slot>(1, static_cast<Slot>(std::ceil(
                                               rng.exponential(cfg.deadline_mean))));
        if (cfg.size_dist == "exp") {
            r.volume = std::max(1e-3, rng.exponential(cfg.size_mean));
        } else if (cfg.size_dist == "pareto") {
            r.volume = rng.bounded_pareto(cfg.size_min, cfg.size_mean, cfg.size_cap);
        } else if (cfg.size_dist == "deadline_scaled") {
            if (!cfg.deadlines) throw SimError("deadline_scaled sizes need deadlines");
            auto path = min_hop_path(topo, r.src, r.receivers[0]);
            double bneck = kInf;
            for (EdgeId e : path) bneck = std::min(bneck, topo.capacity(e));
            double max_vol = bneck * static_cast<double>(r.deadline - r.arrival);
            double mean = std::max(1e-3, cfg.deadline_volume_fraction * max_vol);
            r.volume = std::max(1e-3, rng.exponential(mean));
        } else {
            throw SimError("unknown size distribution: " + cfg.size_dist);
        }
        out.push_back(std::move(r));
    }
    return out;
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "UNICAST") return Scheme::Unicast;
    if (name == "DCROUTE") return Scheme::DcRoute;
    if (name == "MP-DCROUTE") return Scheme::MpDcRoute;
    if (name == "DDCCAST") return Scheme::DdcCast;
    if (name == "DCCAST") return Scheme::DcCast;
    if (name == "QUICKCAST") return Scheme::QuickCast;
    if (name == "IRIS") return Scheme::Iris;
    if (name == "PARALLEL-TREES") return Scheme::ParallelTrees;
    throw SimError(
        "unknown scheme: " + name +
        " (valid: UNICAST DCROUTE MP-DCROUTE DDCCAST DCCAST QUICKCAST IRIS "
        "PARALLEL-TREES)");
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Unicast: return "UNICAST";
        case Scheme::DcRoute: return "DCROUTE";
        case Scheme::MpDcRoute: return "MP-DCROUTE";
        case Scheme::DdcCast: return "DDCCAST";
        case Scheme::DcCast: return "DCCAST";
        case Scheme::QuickCast: return "QUICKCAST";
        case Scheme::Iris: return "IRIS";
        case Scheme::ParallelTrees: return "PARALLEL-TREES";
    }
    return "?";
}

SchedulingPolicy sched_from_name(const std::string& name) {
    if (name == "ALAP") return SchedulingPolicy::Alap;
    if (name == "FCFS") return SchedulingPolicy::Fcfs;
    if (name == "SRPT") return SchedulingPolicy::Srpt;
    if (name == "MAXMIN") return SchedulingPolicy::MaxMinFair;
    throw SimError("unknown scheduling policy: " + name +
                   " (valid: ALAP FCFS SRPT MAXMIN)");
}

std::string sched_name(SchedulingPolicy p) {
    switch (p) {
        case SchedulingPolicy::Alap: return "ALAP";
        case SchedulingPolicy::Fcfs: return "FCFS";
        case SchedulingPolicy::Srpt: return "SRPT";
        case SchedulingPolicy::MaxMinFair: return "MAXMIN";
    }
    return "?";
}

SchedulingPolicy default_sched(Scheme s) {
    switch (s) {
        case Scheme::Unicast:
        case Scheme::DcCast:
            return SchedulingPolicy::Fcfs;
        case Scheme::QuickCast:
        case Scheme::Iris:
        case Scheme::ParallelTrees:
            return SchedulingPolicy::MaxMinFair;
        default:
            return SchedulingPolicy::Alap;
    }
}

double percentile_of(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    auto n = static_cast<double>(values.size());
    auto idx = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    if (idx == 0) idx = 1;
    if (idx > values.size()) idx = values.size();
    return values[idx - 1];
}

MetricsReport compute_metrics(const std::vector<RequestLog>& logs,
                              const std::vector<double>& completion_times,
                              double total_bandwidth, double percentile) {
    MetricsReport m;
    m.completion_times = completion_times;
    m.percentile = percentile;
    m.total_bandwidth = total_bandwidth;
    if (!completion_times.empty()) {
        m.mean = std::accumulate(completion_times.begin(), completion_times.end(),
                                 0.0) /
                 static_cast<double>(completion_times.size());
        m.median = percentile_of(completion_times, 50.0);
        m.tail = percentile_of(completion_times, percentile);
    }
    m.requests = static_cast<int>(logs.size());
    for (const auto& l : logs) {
        m.volume_total += l.volume;
        if (l.admitted) {
            ++m.admitted;
            m.volume_admitted += l.volume;
        }
    }
    m.admitted_ratio =
        m.requests ? static_cast<double>(m.admitted) / m.requests : 1.0;
    m.admitted_traffic_ratio =
        m.volume_total > 0.0 ? m.volume_admitted / m.volume_total : 1.0;
    return m;
}

namespace {

void apply_background(Timeline& tl, const Topology& topo,
                      const BackgroundReservation& bg) {
    if (bg.period <= 0 || bg.fraction <= 0.0) return;
    for (EdgeId e = 0; e < topo.edge_count(); ++e) tl.set_background(e, bg);
}

// Calendar-based engine for the deadline admission schemes.
RunResult run_calendar(const Topology& topo,
                       const std::vector<TransferRequest>& trace,
                       const ScenarioConfig& cfg) {
    Timeline tl(topo, cfg.omega);
    apply_background(tl, topo, cfg.background);
    std::vector<ActiveRequest> active;
    std::vector<RequestLog> logs;
    std::vector<double> completions;
    std::map<int, std::pair<Slot, int>> pending;  // id -> (arrival, receivers)
    double omega_bw = 0.0;
    std::size_t next = 0;

    auto incomplete = [&]() {
        for (const auto& a : active)
            if (!a.complete) return true;
        return false;
    };

    while (next < trace.size() || incomplete()) {
        if (tl.t_now() > kSlotGuard) throw SimError("calendar run did not terminate");
        while (next < trace.size() && trace[next].arrival <= tl.t_now()) {
            const auto& req = trace[next];
            if (req.deadline <= req.arrival)
                throw SimError("deadline scheme requires deadlines after arrival");
            DeadlineRequest dr{req.id, req.src, req.receivers,
                               req.volume, req.arrival, req.deadline};
            RequestLog log;
            log.id = req.id;
            log.volume = req.volume;
            log.arrival = req.arrival;
            log.deadline = req.deadline;
            log.receiver_count = static_cast<int>(req.receivers.size());
            std::optional<ActiveRequest> adm;
            try {
                switch (cfg.scheme) {
                    case Scheme::DcRoute:
                        adm = dcroute_admit(topo, tl, dr);
                        break;
                    case Scheme::MpDcRoute:
                        adm = mp_dcroute_admit(topo, tl, dr, cfg.k_paths);
                        break;
                    case Scheme::DdcCast:
                        adm = ddccast_admit(topo, tl, dr);
                        break;
                    default:
                        throw SimError("not a calendar scheme");
                }
            } catch (const AdmissionError&) {
                adm.reset();
            }
            if (adm) {
                log.admitted = true;
                log.route_count = static_cast<int>(adm->routes.size());
                pending[req.id] = {req.arrival,
                                   static_cast<int>(req.receivers.size())};
                active.push_back(std::move(*adm));
            }
            logs.push_back(log);
            ++next;
        }
        pull_back(tl, active);
        push_forward(tl, active);
        Slot t = tl.t_now() + 1;
        for (const auto& a : active) {
            if (a.complete) continue;
            for (const auto& route : a.routes) {
                auto it = route.rate.find(t);
                if (it != route.rate.end())
                    omega_bw += it->second * cfg.omega *
                                static_cast<double>(route.edges.size());
            }
        }
        walk(tl, active);
        for (const auto& a : active) {
            if (!a.complete) continue;
            auto it = pending.find(a.id);
            if (it == pending.end()) continue;
            auto [arrival, nrx] = it->second;
            for (int i = 0; i < nrx; ++i)
                completions.push_back(static_cast<double>(a.completion_slot - arrival));
            for (auto& l : logs)
                if (l.id == a.id) l.completion = a.completion_slot;
            pending.erase(it);
        }
    }
    RunResult rr;
    rr.logs = std::move(logs);
    rr.metrics = compute_metrics(rr.logs, completions, omega_bw, cfg.percentile);
    return rr;
}

struct Job {
    int req_id = -1;
    int log_idx = -1;
    Slot arrival = 0;
    double volume = 0.0;
    double residual = 0.0;
    std::vector<std::vector<EdgeId>> routes;  // parallel trees share the volume
    std::vector<SteinerTree> trees;           // empty for unicast jobs
    std::vector<NodeId> receivers;            // complete with this job
    std::vector<PathSchedule> schedules;      // FCFS only
    bool complete = false;
    Slot done = -1;
};

// Rate-based engine: FCFS forward fill or slot-local MAXMIN/SRPT.
RunResult run_rate_based(const Topology& topo,
                         const std::vector<TransferRequest>& trace,
                         const ScenarioConfig& cfg, std::uint64_t seed) {
    Timeline tl(topo, cfg.omega);
    apply_background(tl, topo, cfg.background);
    SchedulingPolicy pol = cfg.sched.value_or(default_sched(cfg.scheme));
    if (pol == SchedulingPolicy::Alap)
        throw SimError("ALAP applies to the deadline schemes only");
    EdgeLoad load(topo.edge_count(), 0.0);
    DetRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Job> jobs;
    std::vector<RequestLog> logs;
    std::vector<double> completions;
    double omega_bw = 0.0;
    std::size_t next = 0;

    auto flow_snapshot = [&]() {
        std::vector<FlowState> flows;
        for (const auto& j : jobs)
            if (!j.complete && j.routes.size() == 1)
                flows.push_back({j.req_id, j.routes[0], j.residual});
        return flows;
    };
    auto utilization = [&]() {
        std::vector<double> u(topo.edge_count(), 0.0);
        Slot t = tl.t_now() + 1;
        for (EdgeId e = 0; e < topo.edge_count(); ++e)
            u[e] = tl.allocated(e, t) / topo.capacity(e);
        return u;
    };
    auto add_job = [&](Job j) {
        j.residual = j.volume;
        if (pol == SchedulingPolicy::Fcfs) {
            double share = j.volume / static_cast<double>(j.routes.size());
            for (const auto& route : j.routes)
                j.schedules.push_back(fcfs_forward_fill(tl, route, share));
        }
        jobs.push_back(std::move(j));
    };

    auto admit = [&](const TransferRequest& req, int log_idx) {
        switch (cfg.scheme) {
            case Scheme::Unicast: {
                auto flows = flow_snapshot();
                auto util = utilization();
                for (NodeId r : req.receivers) {
                    Job j;
                    j.req_id = req.id;
                    j.log_idx = log_idx;
                    j.arrival = req.arrival;
                    j.volume = req.volume;
                    j.receivers = {r};
                    j.routes = {select_path(topo, cfg.route_policy, req.src, r,
                                            flows, util, req.volume, rng.raw())};
                    add_job(std::move(j));
                }
                logs[log_idx].route_count = static_cast<int>(req.receivers.size());
                break;
            }
            case Scheme::DcCast: {
                auto tree = dccast_select_tree(topo, load, req.src, req.receivers,
                                               req.volume);
                Job j;
                j.req_id = req.id;
                j.log_idx = log_idx;
                j.arrival = req.arrival;
                j.volume = req.volume;
                j.receivers = req.receivers;
                j.routes = {tree.edges};
                j.trees = {tree};
                parallel_load_update(load, j.trees, req.volume);
                add_job(std::move(j));
                logs[log_idx].route_count = 1;
                break;
            }
            case Scheme::QuickCast:
            case Scheme::Iris: {
                Partitioning parts;
                if (cfg.scheme == Scheme::QuickCast) {
                    parts = quickcast_partition(topo, load, req.src, req.receivers,
                                                req.volume, cfg.p_f, cfg.n_max);
                } else {
                    std::vector<int> pi = req.pi;
                    if (pi.empty()) pi.assign(req.receivers.size(), 1);
                    parts = iris_partition(topo, tl, load, req.src, req.receivers,
                                           req.volume, pi);
                }
                for (auto& p : parts.partitions) {
                    Job j;
                    j.req_id = req.id;
                    j.log_idx = log_idx;
                    j.arrival = req.arrival;
                    j.volume = req.volume;
                    j.receivers = p.receivers;
                    j.routes = {p.tree.edges};
                    j.trees = {p.tree};
                    parallel_load_update(load, j.trees, req.volume);
                    add_job(std::move(j));
                }
                logs[log_idx].route_count =
                    static_cast<int>(parts.partitions.size());
                break;
            }
            case Scheme::ParallelTrees: {
                auto trees = parallel_trees_select(topo, load, req.src,
                                                   req.receivers, req.volume,
                                                   cfg.k_trees);
                Job j;
                j.req_id = req.id;
                j.log_idx = log_idx;
                j.arrival = req.arrival;
                j.volume = req.volume;
                j.receivers = req.receivers;
                for (const auto& t : trees) j.routes.push_back(t.edges);
                j.trees = trees;
                parallel_load_update(load, trees, req.volume);
                add_job(std::move(j));
                logs[log_idx].route_count = static_cast<int>(trees.size());
                break;
            }
            default:
                throw SimError("not a rate-based scheme");
        }
    };

    auto incomplete = [&]() {
        for (const auto& j : jobs)
            if (!j.complete) return true;
        return false;
    };

    while (next < trace.size() || incomplete()) {
        if (tl.t_now() > kSlotGuard) throw SimError("rate run did not terminate");
        while (next < trace.size() && trace[next].arrival <= tl.t_now()) {
            const auto& req = trace[next];
            RequestLog log;
            log.id = req.id;
            log.volume = req.volume;
            log.arrival = req.arrival;
            log.deadline = req.deadline;
            log.receiver_count = static_cast<int>(req.receivers.size());
            log.admitted = true;  // no admission control in this family
            logs.push_back(log);
            admit(req, static_cast<int>(logs.size()) - 1);
            ++next;
        }
        Slot t = tl.t_now() + 1;
        // Per-route rates for this slot.
        std::vector<std::pair<Job*, std::vector<double>>> slot_rates;
        if (pol == SchedulingPolicy::Fcfs) {
            for (auto& j : jobs) {
                if (j.complete) continue;
                std::vector<double> rs;
                for (const auto& s : j.schedules) {
                    auto it = s.rate.find(t);
                    rs.push_back(it == s.rate.end() ? 0.0 : it->second);
                }
                slot_rates.emplace_back(&j, std::move(rs));
            }
        } else {
            // Flatten all (job, route) pairs.
            std::vector<Job*> owner;
            std::vector<RateRequest> mm;
            std::vector<SrptRequest> sr;
            for (auto& j : jobs) {
                if (j.complete) continue;
                for (const auto& route : j.routes) {
                    owner.push_back(&j);
                    if (pol == SchedulingPolicy::MaxMinFair)
                        mm.push_back({route, j.residual / cfg.omega});
                    else
                        sr.push_back({route, j.residual, j.arrival, j.req_id});
                }
            }
            std::vector<double> flat = pol == SchedulingPolicy::MaxMinFair
                                           ? maxmin_rates(tl, t, mm)
                                           : srpt_slot_rates(tl, t, sr);
            // Trim each job to its residual when several routes share one
            // volume, then commit to the timeline.
            std::size_t idx = 0;
            for (auto& j : jobs) {
                if (j.complete) continue;
                std::vector<double> rs(j.routes.size());
                double total = 0.0;
                for (std::size_t r = 0; r < j.routes.size(); ++r) {
                    rs[r] = flat[idx++];
                    total += rs[r] * cfg.omega;
                }
                if (total > j.residual + kFeasTol && total > 0.0) {
                    double f = j.residual / total;
                    for (double& x : rs) x *= f;
                }
                for (std::size_t r = 0; r < j.routes.size(); ++r)
                    for (EdgeId e : j.routes[r])
                        if (rs[r] > 0.0) tl.add(e, t, rs[r]);
                slot_rates.emplace_back(&j, std::move(rs));
            }
        }
        for (auto& [jp, rs] : slot_rates) {
            double delivered = 0.0;
            for (std::size_t r = 0; r < rs.size(); ++r) {
                delivered += rs[r] * cfg.omega;
                omega_bw += rs[r] * cfg.omega *
                            static_cast<double>(jp->routes[r].size());
            }
            if (delivered <= 0.0) continue;
            jp->residual -= delivered;
            if (!jp->trees.empty())
                parallel_load_update(load, jp->trees, -delivered);
            if (jp->residual <= kFeasTol) {
                jp->residual = 0.0;
                jp->complete = true;
                jp->done = t;
                for (std::size_t i = 0; i < jp->receivers.size(); ++i)
                    completions.push_back(static_cast<double>(t - jp->arrival));
                auto& l = logs[jp->log_idx];
                l.completion = std::max(l.completion, t);
            }
        }
        tl.advance();
    }
    RunResult rr;
    rr.logs = std::move(logs);
    rr.metrics = compute_metrics(rr.logs, completions, omega_bw, cfg.percentile);
    return rr;
}

}  // namespace

RunResult run_scenario(const Topology& topo,
                       const std::vector<TransferRequest>& trace,
                       const ScenarioConfig& cfg, std::uint64_t seed) {
    auto start = std::chrono::steady_clock::now();
    std::vector<TransferRequest> sorted = trace;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TransferRequest& a, const TransferRequest& b) {
                         if (a.arrival != b.arrival) return a.arrival < b.arrival;
                         return a.id < b.id;
                     });
    RunResult rr;
    switch (cfg.scheme) {
        case Scheme::DcRoute:
        case Scheme::MpDcRoute:
        case Scheme::DdcCast:
            rr = run_calendar(topo, sorted, cfg);
            break;
        default:
            rr = run_rate_based(topo, sorted, cfg, seed);
            break;
    }
    rr.metrics.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return rr;
}

GapReport measure_bwr_gap(const Topology& topo, double lambda, double mu,
                          int arrivals, std::uint64_t seed, bool use_fast) {
    if (lambda <= 0.0 || mu <= 0.0 || arrivals <= 0)
        throw SimError("measure_bwr_gap: lambda, mu and arrivals must be > 0");
    DetRng rng(seed);
    struct Arrival {
        Slot slot;
        NodeId src, dst;
        double volume;
    };
    std::vector<Arrival> arr;
    arr.reserve(static_cast<std::size_t>(arrivals));
    double clock = 0.0;
    for (int i = 0; i < arrivals; ++i) {
        clock += rng.exponential(1.0 / lambda);
        NodeId s = static_cast<NodeId>(rng.below(topo.node_count()));
        NodeId d = s;
        while (d == s) d = static_cast<NodeId>(rng.below(topo.node_count()));
        // Whole data units, at least one.
        double v = std::max(1.0, std::round(rng.exponential(mu)));
        arr.push_back({static_cast<Slot>(clock), s, d, v});
    }

    struct Live {
        std::vector<EdgeId> path;
        double remaining;
    };
    std::vector<Live> live;
    Timeline tl(topo, 1.0);
    GapReport rep;
    int equal = 0;
    std::size_t next = 0;
    while (next < arr.size() || !live.empty()) {
        while (next < arr.size() && arr[next].slot <= tl.t_now()) {
            const Arrival& a = arr[next];
            std::vector<FlowState> snap;
            snap.reserve(live.size());
            for (std::size_t i = 0; i < live.size(); ++i)
                snap.push_back({static_cast<int>(i), live[i].path,
                                live[i].remaining});
            auto exact = bwr_exact(topo, a.src, a.dst, snap);
            auto heur = use_fast ? bwrhf(topo, a.src, a.dst, snap)
                                 : bwrh(topo, a.src, a.dst, snap).path;
            double wo = bwr_path_weight(exact, snap);
            double wh = bwr_path_weight(heur, snap);
            double gap = wo > 1e-12 ? (wh - wo) / wo : (wh > 1e-12 ? 1.0 : 0.0);
            rep.mean_gap += gap;
            rep.max_gap = std::max(rep.max_gap, gap);
            if (gap <= 1e-12) ++equal;
            ++rep.measured;
            // The system carries the flows on the paths under evaluation.
            live.push_back({heur, a.volume});
            ++next;
        }
        std::vector<RateRequest> reqs;
        reqs.reserve(live.size());
        for (const Live& f : live) reqs.push_back({f.path, f.remaining});
        auto rates = maxmin_rates(tl, tl.t_now() + 1, reqs);
        for (std::size_t i = 0; i < live.size(); ++i)
            live[i].remaining -= rates[i];
        live.erase(std::remove_if(live.begin(), live.end(),
                                  [](const Live& f) {
                                      return f.remaining <= kFeasTol;
                                  }),
                   live.end());
        tl.advance();
        if (tl.t_now() > 1000000)
            throw SimError("measure_bwr_gap: drain did not terminate");
    }
    if (rep.measured > 0) {
        rep.mean_gap /= rep.measured;
        rep.equal_frac = static_cast<double>(equal) / rep.measured;
    }
    return rep;
}

}  // namespace dcte
