#include "dcte/sweep.hpp"

#include <cmath>
#include <tuple>

namespace dcte {

std::vector<SweepCell> make_grid(const std::vector<std::string>& schemes,
                                 const std::vector<double>& lambdas,
                                 const std::vector<int>& receivers,
                                 const std::vector<std::uint64_t>& seeds) {
    std::vector<SweepCell> grid;
    for (const auto& s : schemes)
        for (double l : lambdas)
            for (int r : receivers)
                for (std::uint64_t seed : seeds) grid.push_back({s, l, r, seed});
    return grid;
}

namespace {

SweepRow run_cell(const Topology& topo, const TraceConfig& base_trace,
                  const ScenarioConfig& base_cfg, const SweepCell& cell) {
    SweepRow row;
    row.cell = cell;
    try {
        TraceConfig tc = base_trace;
        tc.lambda = cell.lambda;
        tc.receivers = cell.receivers;
        ScenarioConfig sc = base_cfg;
        sc.scheme = scheme_from_name(cell.scheme);
        auto trace = generate_trace(topo, tc, cell.seed);
        row.metrics = run_scenario(topo, trace, sc, cell.seed).metrics;
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Topology& topo, const TraceConfig& base_trace,
                                const ScenarioConfig& base_cfg,
                                const std::vector<SweepCell>& grid, bool parallel) {
    std::vector<SweepRow> rows(grid.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(grid.size()); ++i)
            rows[i] = run_cell(topo, base_trace, base_cfg, grid[i]);
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows[i] = run_cell(topo, base_trace, base_cfg, grid[i]);
    }
    return rows;
}

std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows) {
    std::vector<SweepAggregate> out;
    auto key_of = [](const SweepRow& r) {
        return std::make_tuple(r.cell.scheme, r.cell.lambda, r.cell.receivers);
    };
    for (const auto& r : rows) {
        if (r.failed) continue;
        SweepAggregate* agg = nullptr;
        for (auto& a : out)
            if (std::make_tuple(a.scheme, a.lambda, a.receivers) == key_of(r))
                agg = &a;
        if (!agg) {
            out.push_back({r.cell.scheme, r.cell.lambda, r.cell.receivers,
                           0, 0, 0, 0, 0, 0, 0, 0});
            agg = &out.back();
        }
        ++agg->seeds;
        agg->mean_ct += r.metrics.mean;
        agg->sd_ct += r.metrics.mean * r.metrics.mean;
        agg->mean_tail += r.metrics.tail;
        agg->sd_tail += r.metrics.tail * r.metrics.tail;
        agg->mean_bw += r.metrics.total_bandwidth;
        agg->sd_bw += r.metrics.total_bandwidth * r.metrics.total_bandwidth;
        agg->mean_admitted_ratio += r.metrics.admitted_ratio;
    }
    for (auto& a : out) {
        double n = a.seeds;
        auto finish = [&](double& mean, double& sq) {
            mean /= n;
            double var = std::max(0.0, sq / n - mean * mean);
            sq = std::sqrt(var);
        };
        finish(a.mean_ct, a.sd_ct);
        finish(a.mean_tail, a.sd_tail);
        finish(a.mean_bw, a.sd_bw);
        a.mean_admitted_ratio /= n;
    }
    return out;
}

}  // namespace dcte
