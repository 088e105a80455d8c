#pragma once

#include "dcte/simkit.hpp"

namespace dcte {

// One grid cell of a sweep: scheme x lambda x receivers x seed.
struct SweepCell {
    std::string scheme;
    double lambda = 1.0;
    int receivers = 1;
    std::uint64_t seed = 1;
};

struct SweepRow {
    SweepCell cell;
    MetricsReport metrics;
    bool failed = false;
    std::string error;
};

std::vector<SweepCell> make_grid(const std::vector<std::string>& schemes,
                                 const std::vector<double>& lambdas,
                                 const std::vector<int>& receivers,
                                 const std::vector<std::uint64_t>& seeds);

// Runs every cell. Cells are independent, so the parallel path fans them
// out across OpenMP workers; parallel=false is the serial reference and
// produces identical rows. A failed cell records its error and the sweep
// continues.
std::vector<SweepRow> run_sweep(const Topology& topo, const TraceConfig& base_trace,
                                const ScenarioConfig& base_cfg,
                                const std::vector<SweepCell>& grid, bool parallel);

// Mean and standard deviation across seeds for each (scheme, lambda,
// receivers) group, in first-seen group order.
struct SweepAggregate {
    std::string scheme;
    double lambda = 1.0;
    int receivers = 1;
    int seeds = 0;
    double mean_ct = 0.0, sd_ct = 0.0;
    double mean_tail = 0.0, sd_tail = 0.0;
    double mean_bw = 0.0, sd_bw = 0.0;
    double mean_admitted_ratio = 0.0;
};
std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows);

}  // namespace dcte
