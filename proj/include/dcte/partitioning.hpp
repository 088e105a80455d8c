#pragma once

#include "dcte/multicast.hpp"
#include "dcte/timeline.hpp"

namespace dcte {

// One receiver group with its assigned forwarding tree. The whole volume
// is delivered over each partition's tree.
struct Partition {
    std::vector<NodeId> receivers;
    SteinerTree tree;
};

struct Partitioning {
    std::vector<Partition> partitions;
};

struct PartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run-length weighting of a binary objective vector: within each maximal
// run of zeros, the last position receives the run length; ones unchanged.
std::vector<int> objective_star(const std::vector<int>& pi);

// Average-linkage hierarchy over receiver hop distances; picks the layer
// with the most partitions (at most n_max) whose total tree weight stays
// within p_f times the single-tree weight, else the single tree.
Partitioning quickcast_partition(const Topology& topo, const EdgeLoad& load,
                                 NodeId src, const std::vector<NodeId>& receivers,
                                 double volume, double p_f, int n_max);

// Joint completion-time estimate: the given trees (one per partition, all
// belonging to one transfer) compete max-min against the timeline's
// availability; returns the first slot each partition's residual reaches
// zero. Horizon-capped; an unfinished partition reports the horizon slot.
std::vector<Slot> iris_min_completion_times(const Topology& topo,
                                            const Timeline& tl,
                                            const std::vector<SteinerTree>& trees,
                                            const std::vector<double>& volumes);

// 1-based ranks, fastest receiver first: each receiver served by its own
// capacity-aware singleton tree, all simulated jointly. Ties by receiver
// node id.
std::vector<int> iris_rank_receivers(const Topology& topo, const Timeline& tl,
                                     const EdgeLoad& load, NodeId src,
                                     const std::vector<NodeId>& receivers,
                                     double volume);

// Objective-vector-driven partitioning: base layer groups rank-consecutive
// zero runs of pi and isolates the one-positions, then the two fastest
// partitions merge per layer; the layer minimizing sum(|P| * completion)
// wins, ties toward smaller total tree weight.
Partitioning iris_partition(const Topology& topo, const Timeline& tl,
                            const EdgeLoad& load, NodeId src,
                            const std::vector<NodeId>& receivers, double volume,
                            const std::vector<int>& pi);

// Analytic partitioning on the relaxed single-uplink model. Downlinks must
// be sorted descending. Groups the n-M+1 fastest receivers and leaves M-1
// slow singletons; returns the M maximizing the average receiver rate
// (ties: smaller M) with the per-receiver max-min rates.
struct RelaxedResult {
    int m = 1;
    std::vector<double> receiver_rates;  // matches the downlink order
    double avg_rate = 0.0;
};
RelaxedResult relaxed_partition(double uplink, const std::vector<double>& downlinks);

// Max-min fair split of one shared link among flows with individual caps.
std::vector<double> single_link_maxmin(double capacity,
                                       const std::vector<double>& caps);

// A transfer reduced to the star-aggregate model.
struct AggTransfer {
    NodeId src = -1;
    std::vector<NodeId> receivers;
    double volume = 0.0;
    Slot arrival = 0;
};

// Star relaxation: every node keeps one uplink (sum of outgoing capacity)
// and one downlink (sum of incoming). Each transfer is scheduled alone
// with relaxed_partition + slotted max-min; returns per-receiver
// completion times (slots after arrival), flattened in trace order.
std::vector<double> aggregate_lower_bound(const Topology& topo,
                                          const std::vector<AggTransfer>& trace,
                                          double omega = 1.0);

}  // namespace dcte
