// Benchmark: OpenMP sweep against the serial reference on the same grid,
// verifying the two produce identical rows.
#include <chrono>
#include <iostream>

#include "dcte/sweep.hpp"

int main(int argc, char** argv) {
    std::string topo_path = argc > 1 ? argv[1] : "data/gscale.topo";
    auto topo = dcte::Topology::from_file(topo_path);

    dcte::TraceConfig tc;
    tc.count = 150;
    tc.size_dist = "exp";
    tc.size_mean = 20.0;
    dcte::ScenarioConfig sc;
    sc.sched = dcte::SchedulingPolicy::MaxMinFair;

    auto grid = dcte::make_grid({"DCCAST", "QUICKCAST", "UNICAST"}, {0.05, 0.1},
                                {4}, {1, 2, 3, 4});

    auto time_it = [&](bool parallel) {
        auto t0 = std::chrono::steady_clock::now();
        auto rows = dcte::run_sweep(topo, tc, sc, grid, parallel);
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return std::make_pair(rows, secs);
    };

    auto [serial_rows, serial_s] = time_it(false);
    auto [par_rows, par_s] = time_it(true);

    bool identical = serial_rows.size() == par_rows.size();
    for (std::size_t i = 0; identical && i < serial_rows.size(); ++i) {
        const auto& a = serial_rows[i].metrics;
        const auto& b = par_rows[i].metrics;
        identical = serial_rows[i].failed == par_rows[i].failed &&
                    a.mean == b.mean && a.tail == b.tail &&
                    a.total_bandwidth == b.total_bandwidth &&
                    a.completion_times == b.completion_times;
    }

    std::cout << "cells=" << grid.size() << "\n"
              << "serial_sec=" << serial_s << "\n"
              << "parallel_sec=" << par_s << "\n"
              << "speedup=" << (par_s > 0 ? serial_s / par_s : 0.0) << "\n"
              << "identical=" << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
