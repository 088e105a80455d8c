// Command-line front end: single runs, sweep grids, and oracle checks.
#include <algorithm>
#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "dcte/sweep.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string topology = "data/gscale.topo";
    std::string scheme = "UNICAST";
    std::string policy = "MIN_HOP";
    std::string sched;
    std::string preset;
    double lambda = 1.0;
    int count = 100;
    int receivers = 1;
    double pf = 1.1;
    int nmax = 8;
    int kpaths = 2;
    int ktrees = 2;
    std::uint64_t seed = 1;
    double percentile = 99.9;
    double omega = 1.0;
    std::string out = "out";
    std::string size_dist = "exp";
    double size_mean = 20.0;
    double size_min = 2.0;
    double size_cap = 2000.0;
    bool deadlines = false;
    double deadline_mean = 10.0;
};

dcte::RoutePolicy parse_policy(const std::string& name) {
    dcte::RoutePolicy p;
    auto metric_of = [](const std::string& m) {
        if (m == "utilization") return dcte::CostMetric::Utilization;
        if (m == "load") return dcte::CostMetric::Load;
        if (m == "load_plus_demand") return dcte::CostMetric::LoadPlusDemand;
        throw dcte::SimError("unknown metric: " + m);
    };
    auto paren = name.find('(');
    std::string base = name.substr(0, paren);
    std::string metric =
        paren == std::string::npos
            ? ""
            : name.substr(paren + 1, name.rfind(')') - paren - 1);
    if (base == "MIN_HOP") p.kind = dcte::RoutePolicy::MinHop;
    else if (base == "RANDOM_UNIFORM_SHORTEST") p.kind = dcte::RoutePolicy::RandomUniformShortest;
    else if (base == "MINMAX") p.kind = dcte::RoutePolicy::MinMax;
    else if (base == "MINSUM") p.kind = dcte::RoutePolicy::MinSum;
    else if (base == "BWR_EXACT") p.kind = dcte::RoutePolicy::BwrExact;
    else if (base == "BWRH") p.kind = dcte::RoutePolicy::Bwrh;
    else if (base == "BWRHF") p.kind = dcte::RoutePolicy::Bwrhf;
    else
        throw dcte::SimError(
            "unknown policy: " + name +
            " (valid: MIN_HOP RANDOM_UNIFORM_SHORTEST MINMAX(m) MINSUM(m) "
            "BWR_EXACT BWRH BWRHF; m in utilization|load|load_plus_demand)");
    if (!metric.empty()) p.metric = metric_of(metric);
    return p;
}

void load_config(Options& o) {
    if (o.config.empty()) return;
    std::ifstream f(o.config);
    if (!f) throw dcte::SimError("cannot open config: " + o.config);
    json j = json::parse(f);
    auto get = [&](const char* k, auto& slot) {
        if (j.contains(k)) slot = j[k].template get<std::decay_t<decltype(slot)>>();
    };
    get("topology", o.topology);
    get("scheme", o.scheme);
    get("policy", o.policy);
    get("sched", o.sched);
    get("preset", o.preset);
    get("lambda", o.lambda);
    get("count", o.count);
    get("receivers", o.receivers);
    get("pf", o.pf);
    get("nmax", o.nmax);
    get("kpaths", o.kpaths);
    get("ktrees", o.ktrees);
    get("seed", o.seed);
    get("percentile", o.percentile);
    get("omega", o.omega);
    get("out", o.out);
    get("size_dist", o.size_dist);
    get("size_mean", o.size_mean);
    get("size_min", o.size_min);
    get("size_cap", o.size_cap);
    get("deadlines", o.deadlines);
    get("deadline_mean", o.deadline_mean);
}

dcte::TraceConfig trace_config(const Options& o) {
    dcte::TraceConfig tc;
    if (!o.preset.empty()) tc = dcte::trace_preset(o.preset);
    tc.lambda = o.lambda;
    tc.count = o.count;
    if (o.preset.empty()) {
        tc.receivers = o.receivers;
        tc.size_dist = o.size_dist;
        tc.size_mean = o.size_mean;
        tc.size_min = o.size_min;
        tc.size_cap = o.size_cap;
        tc.deadlines = o.deadlines;
        tc.deadline_mean = o.deadline_mean;
    } else {
        tc.receivers = o.receivers;
    }
    return tc;
}

dcte::ScenarioConfig scenario_config(const Options& o) {
    dcte::ScenarioConfig sc;
    sc.scheme = dcte::scheme_from_name(o.scheme);
    sc.route_policy = parse_policy(o.policy);
    if (!o.sched.empty()) sc.sched = dcte::sched_from_name(o.sched);
    sc.omega = o.omega;
    sc.p_f = o.pf;
    sc.n_max = o.nmax;
    sc.k_paths = o.kpaths;
    sc.k_trees = o.ktrees;
    sc.percentile = o.percentile;
    return sc;
}

std::string resolved_config(const Options& o) {
    json j{{"topology", o.topology}, {"scheme", o.scheme}, {"policy", o.policy},
           {"sched", o.sched},       {"preset", o.preset}, {"lambda", o.lambda},
           {"count", o.count},       {"receivers", o.receivers},
           {"pf", o.pf},             {"nmax", o.nmax},     {"kpaths", o.kpaths},
           {"ktrees", o.ktrees},     {"seed", o.seed},
           {"percentile", o.percentile},                   {"omega", o.omega},
           {"size_dist", o.size_dist},                     {"size_mean", o.size_mean},
           {"size_min", o.size_min}, {"size_cap", o.size_cap},
           {"deadlines", o.deadlines},                     {"deadline_mean", o.deadline_mean}};
    return j.dump();
}

int cmd_run(const Options& o) {
    auto topo = dcte::Topology::from_file(o.topology);
    auto trace = dcte::generate_trace(topo, trace_config(o), o.seed);
    auto rr = dcte::run_scenario(topo, trace, scenario_config(o), o.seed);
    const auto& m = rr.metrics;

    fs::create_directories(o.out);
    std::ofstream sum(fs::path(o.out) / "summary.csv");
    sum << "# config " << resolved_config(o) << "\n";
    sum << "scheme,seed,requests,admitted,admitted_ratio,admitted_traffic_ratio,"
           "mean_ct,median_ct,tail_ct,percentile,total_bandwidth\n";
    sum << o.scheme << ',' << o.seed << ',' << m.requests << ',' << m.admitted
        << ',' << m.admitted_ratio << ',' << m.admitted_traffic_ratio << ','
        << m.mean << ',' << m.median << ',' << m.tail << ',' << m.percentile
        << ',' << m.total_bandwidth << "\n";

    std::ofstream req(fs::path(o.out) / "requests.csv");
    req << "# config " << resolved_config(o) << "\n";
    req << "id,admitted,routes,receivers,volume,arrival,deadline,completion\n";
    for (const auto& l : rr.logs)
        req << l.id << ',' << (l.admitted ? 1 : 0) << ',' << l.route_count << ','
            << l.receiver_count << ',' << l.volume << ',' << l.arrival << ','
            << l.deadline << ',' << l.completion << "\n";

    std::cout << "scheme=" << o.scheme << " requests=" << m.requests
              << " admitted=" << m.admitted << " mean_ct=" << m.mean
              << " median_ct=" << m.median << " tail_ct=" << m.tail
              << " bandwidth=" << m.total_bandwidth
              << " runtime_sec=" << m.runtime_sec << "\n";
    return 0;
}

int cmd_sweep(const Options& o, const std::vector<std::string>& schemes,
              const std::vector<double>& lambdas, const std::vector<int>& rxs,
              const std::vector<std::uint64_t>& seeds, const std::string& gain) {
    auto topo = dcte::Topology::from_file(o.topology);
    auto grid = dcte::make_grid(schemes, lambdas, rxs, seeds);
#ifdef _OPENMP
    if (const char* w = std::getenv("DCTE_WORKERS"))
        omp_set_num_threads(std::max(1, std::atoi(w)));
    bool parallel = true;
#else
    bool parallel = false;
#endif
    auto rows = dcte::run_sweep(topo, trace_config(o), scenario_config(o), grid,
                                parallel);

    fs::create_directories(o.out);
    std::ofstream raw(fs::path(o.out) / "sweep.csv");
    raw << "# config " << resolved_config(o) << "\n";
    raw << "scheme,lambda,receivers,seed,mean_ct,median_ct,tail_ct,"
           "total_bandwidth,admitted_ratio,admitted_traffic_ratio,error\n";
    for (const auto& r : rows) {
        raw << r.cell.scheme << ',' << r.cell.lambda << ',' << r.cell.receivers
            << ',' << r.cell.seed << ',';
        if (r.failed)
            raw << ",,,,,," << r.error << "\n";
        else
            raw << r.metrics.mean << ',' << r.metrics.median << ','
                << r.metrics.tail << ',' << r.metrics.total_bandwidth << ','
                << r.metrics.admitted_ratio << ','
                << r.metrics.admitted_traffic_ratio << ",\n";
    }

    std::ofstream agg(fs::path(o.out) / "sweep_agg.csv");
    agg << "# config " << resolved_config(o) << "\n";
    agg << "scheme,lambda,receivers,seeds,mean_ct,sd_ct,mean_tail,sd_tail,"
           "mean_bandwidth,sd_bandwidth,mean_admitted_ratio\n";
    for (const auto& a : dcte::aggregate_sweep(rows))
        agg << a.scheme << ',' << a.lambda << ',' << a.receivers << ','
            << a.seeds << ',' << a.mean_ct << ',' << a.sd_ct << ','
            << a.mean_tail << ',' << a.sd_tail << ',' << a.mean_bw << ','
            << a.sd_bw << ',' << a.mean_admitted_ratio << "\n";

    if (!gain.empty()) {
        auto slash = gain.find('/');
        if (slash == std::string::npos)
            throw dcte::SimError("--gain expects A/B scheme names");
        std::string a = gain.substr(0, slash), b = gain.substr(slash + 1);
        std::ofstream gf(fs::path(o.out) / "gain.csv");
        gf << "# config " << resolved_config(o) << "\n";
        gf << "lambda,receivers,seed,ct_gain,bandwidth_ratio\n";
        for (const auto& ra : rows) {
            if (ra.failed || ra.cell.scheme != a) continue;
            for (const auto& rb : rows) {
                if (rb.failed || rb.cell.scheme != b) continue;
                if (rb.cell.lambda != ra.cell.lambda ||
                    rb.cell.receivers != ra.cell.receivers ||
                    rb.cell.seed != ra.cell.seed)
                    continue;
                double ctg = ra.metrics.mean > 0.0
                                 ? rb.metrics.mean / ra.metrics.mean
                                 : 0.0;
                double bwr = rb.metrics.total_bandwidth > 0.0
                                 ? ra.metrics.total_bandwidth /
                                       rb.metrics.total_bandwidth
                                 : 0.0;
                gf << ra.cell.lambda << ',' << ra.cell.receivers << ','
                   << ra.cell.seed << ',' << ctg << ',' << bwr << "\n";
            }
        }
    }
    int failed = 0;
    for (const auto& r : rows)
        if (r.failed) ++failed;
    std::cout << "cells=" << rows.size() << " failed=" << failed << " out=" << o.out
              << "\n";
    return 0;
}

int cmd_oracle(const Options& o, const std::string& check) {
    auto topo = dcte::Topology::from_file(o.topology);
    dcte::DetRng rng(o.seed);
    if (check == "bwrh-gap" || check == "bwrhf-gap") {
        auto rep = dcte::measure_bwr_gap(topo, o.lambda, o.size_mean, o.count,
                                         o.seed, check == "bwrhf-gap");
        std::cout << check << ": arrivals=" << rep.measured
                  << " mean_gap=" << rep.mean_gap << " max_gap=" << rep.max_gap
                  << " equal_frac=" << rep.equal_frac << "\n";
        return 0;
    }
    if (check == "steiner-ratio") {
        double worst = 1.0, sum = 0.0;
        int n = 0;
        for (int i = 0; i < o.count; ++i) {
            // Random small instance inside the loaded topology.
            int terms = 2 + static_cast<int>(rng.below(3));
            dcte::NodeId root = static_cast<int>(rng.below(topo.node_count()));
            std::vector<dcte::NodeId> rx;
            while (static_cast<int>(rx.size()) < terms) {
                dcte::NodeId v = static_cast<int>(rng.below(topo.node_count()));
                if (v != root &&
                    std::find(rx.begin(), rx.end(), v) == rx.end())
                    rx.push_back(v);
            }
            std::vector<double> w(topo.edge_count());
            for (auto& x : w) x = 1.0 + rng.uniform01() * 9.0;
            if (topo.node_count() > 12) {
                std::cout << "steiner-ratio: topology too large for the exact "
                             "oracle (needs <= 12 nodes)\n";
                return 1;
            }
            auto h = dcte::min_weight_steiner(topo, w, root, rx);
            auto e = dcte::exact_steiner_oracle(topo, w, root, rx);
            double r = h.weight(w) / std::max(1e-12, e.weight(w));
            worst = std::max(worst, r);
            sum += r;
            ++n;
        }
        std::cout << "steiner-ratio: mean=" << sum / n << " worst=" << worst
                  << "\n";
        return worst <= 2.0 ? 0 : 1;
    }
    if (check == "iris-theorem1") {
        // Brute force over all receiver partitionings with integer rates.
        int bad = 0, cases = 0;
        for (int n = 2; n <= 6; ++n) {
            std::vector<int> rates(n);
            // Sampled rate vectors rather than the full 5^n grid per n.
            for (int trial = 0; trial < 200; ++trial) {
                double uplink = 1.0 + static_cast<double>(rng.below(10));
                for (auto& r : rates) r = 1 + static_cast<int>(rng.below(5));
                std::sort(rates.rbegin(), rates.rend());
                std::vector<double> dl(rates.begin(), rates.end());
                // Optimum over all set partitions via recursion.
                std::vector<int> assign(n, -1);
                double best = -1.0;
                double best_consec = -1.0;
                auto eval = [&](int groups) {
                    std::vector<double> caps(groups,
                                             std::numeric_limits<double>::max());
                    for (int i = 0; i < n; ++i)
                        caps[assign[i]] = std::min(caps[assign[i]], dl[i]);
                    auto fr = dcte::single_link_maxmin(uplink, caps);
                    double avg = 0.0;
                    for (int i = 0; i < n; ++i) avg += fr[assign[i]];
                    avg /= n;
                    bool consecutive = true;
                    for (int i = 0; i + 1 < n; ++i)
                        for (int j = i + 1; j < n; ++j)
                            if (assign[i] == assign[j])
                                for (int k = i + 1; k < j; ++k)
                                    if (assign[k] != assign[i]) consecutive = false;
                    best = std::max(best, avg);
                    if (consecutive) best_consec = std::max(best_consec, avg);
                };
                auto rec = [&](auto&& self, int i, int used) -> void {
                    if (i == n) {
                        eval(used);
                        return;
                    }
                    for (int g = 0; g <= used && g < n; ++g) {
                        assign[i] = g;
                        self(self, i + 1, std::max(used, g + 1));
                    }
                };
                rec(rec, 0, 0);
                ++cases;
                if (best_consec + 1e-9 < best) ++bad;
            }
        }
        std::cout << "iris-theorem1: cases=" << cases
                  << " counterexamples=" << bad << "\n";
        return bad == 0 ? 0 : 1;
    }
    throw dcte::SimError("unknown oracle check: " + check +
                         " (valid: bwrh-gap bwrhf-gap steiner-ratio "
                         "iris-theorem1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inter-datacenter transfer scheduling testbed"};
    app.require_subcommand(1);
    Options o;
    std::vector<std::string> schemes{"UNICAST"};
    std::vector<double> lambdas{1.0};
    std::vector<int> rxs{1};
    std::vector<std::uint64_t> seeds{1};
    std::string gain, check;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", o.config);
        c->add_option("--topology", o.topology);
        c->add_option("--policy", o.policy);
        c->add_option("--sched", o.sched);
        c->add_option("--preset", o.preset);
        c->add_option("--count", o.count);
        c->add_option("--receivers", o.receivers);
        c->add_option("--pf", o.pf);
        c->add_option("--nmax", o.nmax);
        c->add_option("--kpaths", o.kpaths);
        c->add_option("--ktrees", o.ktrees);
        c->add_option("--seed", o.seed);
        c->add_option("--percentile", o.percentile);
        c->add_option("--omega", o.omega);
        c->add_option("--out", o.out);
        c->add_option("--size-dist", o.size_dist);
        c->add_option("--size-mean", o.size_mean);
        c->add_option("--size-min", o.size_min);
        c->add_option("--size-cap", o.size_cap);
        c->add_flag("--deadlines", o.deadlines);
        c->add_option("--deadline-mean", o.deadline_mean);
    };

    auto* run = app.add_subcommand("run", "run one scenario");
    add_common(run);
    run->add_option("--scheme", o.scheme);
    run->add_option("--lambda", o.lambda);

    auto* sweep = app.add_subcommand("sweep", "run a scheme/lambda/receiver grid");
    add_common(sweep);
    sweep->add_option("--schemes", schemes)->delimiter(',');
    sweep->add_option("--lambdas", lambdas)->delimiter(',');
    sweep->add_option("--receivers-list", rxs)->delimiter(',');
    sweep->add_option("--seeds", seeds)->delimiter(',');
    sweep->add_option("--gain", gain, "A/B: per-seed gain of scheme A over B");

    auto* oracle = app.add_subcommand("oracle", "run an exhaustive-oracle check");
    add_common(oracle);
    oracle->add_option("check", check)->required();
    oracle->add_option("--lambda", o.lambda);

    CLI11_PARSE(app, argc, argv);
    try {
        load_config(o);
        if (run->parsed()) return cmd_run(o);
        if (sweep->parsed()) return cmd_sweep(o, schemes, lambdas, rxs, seeds, gain);
        return cmd_oracle(o, check);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
