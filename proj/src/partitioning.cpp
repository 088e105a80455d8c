#include "dcte/partitioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "dcte/scheduling.hpp"

namespace dcte {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> scaled_weights(const Topology& topo, const EdgeLoad& load,
                                   double volume) {
    std::vector<double> w(topo.edge_count());
    for (EdgeId e = 0; e < topo.edge_count(); ++e)
        w[e] = (load[e] + volume) / topo.capacity(e);
    return w;
}

}  // namespace

std::vector<int> objective_star(const std::vector<int>& pi) {
    std::vector<int> out(pi.size(), 0);
    std::size_t i = 0;
    while (i < pi.size()) {
        if (pi[i] != 0) {
            out[i] = pi[i];
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < pi.size() && pi[j] == 0) ++j;
        out[j - 1] = static_cast<int>(j - i);  // run length at the last zero
        i = j;
    }
    return out;
}

Partitioning quickcast_partition(const Topology& topo, const EdgeLoad& load,
                                 NodeId src, const std::vector<NodeId>& receivers,
                                 double volume, double p_f, int n_max) {
    if (receivers.empty()) throw PartitionError("no receivers");
    if (p_f <= 0.0 || n_max < 1) throw PartitionError("bad p_f or n_max");
    auto w = scaled_weights(topo, load, volume);

    SteinerTree whole = capacity_aware_select_tree(topo, load, src, receivers, volume);
    double budget = p_f * whole.weight(w);

    int n = static_cast<int>(receivers.size());
    // Average-linkage agglomerative hierarchy over undirected hop
    // distances; layers[k] holds the clustering with n-k clusters.
    std::vector<std::vector<std::vector<NodeId>>> layers;
    std::vector<std::vector<NodeId>> clusters;
    std::vector<NodeId> sorted_rx = receivers;
    std::sort(sorted_rx.begin(), sorted_rx.end());
    for (NodeId r : sorted_rx) clusters.push_back({r});
    layers.push_back(clusters);

    auto hop = [&](NodeId a, NodeId b) {
        auto d = topo.hop_distance_undirected(a, b);
        if (!d) throw PartitionError("disconnected receivers");
        return static_cast<double>(*d);
    };
    while (clusters.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = kInf;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double sum = 0.0;
                for (NodeId a : clusters[i])
                    for (NodeId b : clusters[j]) sum += hop(a, b);
                double d = sum / (clusters[i].size() * clusters[j].size());
                bool better = d < best ||
                              (d == best && std::tie(clusters[i], clusters[j]) <
                                                std::tie(clusters[bi], clusters[bj]));
                if (better) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        auto merged = clusters[bi];
        merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(merged.begin(), merged.end());
        clusters.erase(clusters.begin() + bj);
        clusters[bi] = std::move(merged);
        std::sort(clusters.begin(), clusters.end());
        layers.push_back(clusters);
    }

    for (int l = std::min(n_max, n); l >= 2; --l) {
        const auto& layer = layers[n - l];
        std::vector<Partition> parts;
        double total = 0.0;
        for (const auto& group : layer) {
            Partition p;
            p.receivers = group;
            p.tree = capacity_aware_select_tree(topo, load, src, group, volume);
            total += p.tree.weight(w);
            parts.push_back(std::move(p));
        }
        if (total <= budget + kFeasTol) return {std::move(parts)};
    }
    Partition single;
    single.receivers = receivers;
    single.tree = whole;
    return {{std::move(single)}};
}

std::vector<Slot> iris_min_completion_times(const Topology& topo,
                                            const Timeline& tl,
                                            const std::vector<SteinerTree>& trees,
                                            const std::vector<double>& volumes) {
    std::size_t n = trees.size();
    if (volumes.size() != n) throw PartitionError("trees/volumes size mismatch");
    double omega = tl.slot_width();
    Slot horizon = 1;
    for (std::size_t i = 0; i < n; ++i) {
        double bneck = kInf;
        for (EdgeId e : trees[i].edges) bneck = std::min(bneck, topo.capacity(e));
        if (trees[i].edges.empty()) bneck = 1.0;  // receiver set == {root}
        horizon = std::max<Slot>(
            horizon, static_cast<Slot>(std::ceil(10.0 * volumes[i] / (bneck * omega))));
    }
    std::vector<double> residual = volumes;
    Slot sentinel = tl.t_now() + horizon;
    std::vector<Slot> done(n, sentinel);
    std::vector<bool> finished(n, false);
    std::size_t left = n;
    for (std::size_t i = 0; i < n; ++i)
        if (residual[i] <= kFeasTol) {
            finished[i] = true;
            done[i] = tl.t_now();
            --left;
        }
    for (Slot t = tl.t_now() + 1; t <= sentinel && left > 0; ++t) {
        std::vector<RateRequest> reqs(n);
        for (std::size_t i = 0; i < n; ++i) {
            reqs[i].edges = trees[i].edges;
            reqs[i].cap = finished[i] ? 0.0 : residual[i] / omega;
        }
        auto rates = maxmin_rates(tl, t, reqs);
        for (std::size_t i = 0; i < n; ++i) {
            if (finished[i]) continue;
            residual[i] -= rates[i] * omega;
            if (residual[i] <= kFeasTol) {
                finished[i] = true;
                done[i] = t;
                --left;
            }
        }
    }
    return done;
}

std::vector<int> iris_rank_receivers(const Topology& topo, const Timeline& tl,
                                     const EdgeLoad& load, NodeId src,
                                     const std::vector<NodeId>& receivers,
                                     double volume) {
    std::size_t n = receivers.size();
    std::vector<SteinerTree> trees;
    trees.reserve(n);
    for (NodeId r : receivers)
        trees.push_back(capacity_aware_select_tree(topo, load, src, {r}, volume));
    auto times = iris_min_completion_times(topo, tl, trees,
                                           std::vector<double>(n, volume));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (times[a] != times[b]) return times[a] < times[b];
        return receivers[a] < receivers[b];
    });
    std::vector<int> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<int>(pos) + 1;
    return rank;
}

Partitioning iris_partition(const Topology& topo, const Timeline& tl,
                            const EdgeLoad& load, NodeId src,
                            const std::vector<NodeId>& receivers, double volume,
                            const std::vector<int>& pi) {
    std::size_t n = receivers.size();
    if (pi.size() != n) throw PartitionError("objective vector length mismatch");
    if (n == 0) throw PartitionError("no receivers");

    auto rank = iris_rank_receivers(topo, tl, load, src, receivers, volume);
    std::vector<NodeId> by_rank(n);
    for (std::size_t i = 0; i < n; ++i) by_rank[rank[i] - 1] = receivers[i];

    // Base layer: singletons at one-positions, maximal zero runs grouped.
    std::vector<std::vector<NodeId>> groups;
    std::size_t i = 0;
    while (i < n) {
        if (pi[i] != 0) {
            groups.push_back({by_rank[i]});
            ++i;
            continue;
        }
        std::vector<NodeId> g;
        while (i < n && pi[i] == 0) g.push_back(by_rank[i++]);
        groups.push_back(std::move(g));
    }

    auto w = scaled_weights(topo, load, volume);
    double best_score = kInf, best_weight = kInf;
    Partitioning best;
    auto evaluate = [&](const std::vector<std::vector<NodeId>>& layer) {
        std::vector<Partition> parts;
        std::vector<SteinerTree> trees;
        double wsum = 0.0;
        for (const auto& g : layer) {
            Partition p;
            p.receivers = g;
            p.tree = capacity_aware_select_tree(topo, load, src, g, volume);
            wsum += p.tree.weight(w);
            trees.push_back(p.tree);
            parts.push_back(std::move(p));
        }
        auto kappa = iris_min_completion_times(
            topo, tl, trees, std::vector<double>(layer.size(), volume));
        double score = 0.0;
        for (std::size_t j = 0; j < layer.size(); ++j)
            score += static_cast<double>(layer[j].size()) *
                     static_cast<double>(kappa[j] - tl.t_now());
        if (score < best_score - kFeasTol ||
            (score < best_score + kFeasTol && wsum < best_weight - kFeasTol)) {
            best_score = score;
            best_weight = wsum;
            best.partitions = std::move(parts);
        }
    };
    evaluate(groups);
    while (groups.size() > 1) {
        // Merge the two fastest (leftmost) partitions.
        std::vector<NodeId> merged = groups[0];
        merged.insert(merged.end(), groups[1].begin(), groups[1].end());
        groups.erase(groups.begin());
        groups[0] = std::move(merged);
        evaluate(groups);
    }
    return best;
}

std::vector<double> single_link_maxmin(double capacity,
                                       const std::vector<double>& caps) {
    std::size_t n = caps.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return caps[a] < caps[b]; });
    std::vector<double> rate(n, 0.0);
    double remaining = std::max(0.0, capacity);
    std::size_t left = n;
    for (std::size_t idx : order) {
        double share = remaining / static_cast<double>(left);
        rate[idx] = std::min(std::max(0.0, caps[idx]), share);
        remaining -= rate[idx];
        --left;
    }
    return rate;
}

RelaxedResult relaxed_partition(double uplink, const std::vector<double>& downlinks) {
    int n = static_cast<int>(downlinks.size());
    if (n == 0) throw PartitionError("no receivers");
    for (int i = 1; i < n; ++i)
        if (downlinks[i] > downlinks[i - 1] + kFeasTol)
            throw PartitionError("downlinks must be sorted descending");
    RelaxedResult best;
    best.avg_rate = -1.0;
    for (int m = 1; m <= n; ++m) {
        int g = n - m + 1;  // receivers in the fast group
        std::vector<double> caps;
        caps.push_back(downlinks[g - 1]);  // group limited by its slowest member
        for (int i = g; i < n; ++i) caps.push_back(downlinks[i]);
        auto flow = single_link_maxmin(uplink, caps);
        std::vector<double> rates(n);
        for (int i = 0; i < g; ++i) rates[i] = flow[0];
        for (int i = g; i < n; ++i) rates[i] = flow[i - g + 1];
        double avg = std::accumulate(rates.begin(), rates.end(), 0.0) / n;
        if (avg > best.avg_rate + kFeasTol) {
            best.m = m;
            best.receiver_rates = std::move(rates);
            best.avg_rate = avg;
        }
    }
    return best;
}

std::vector<double> aggregate_lower_bound(const Topology& topo,
                                          const std::vector<AggTransfer>& trace,
                                          double omega) {
    std::vector<double> up(topo.node_count(), 0.0), down(topo.node_count(), 0.0);
    for (const auto& e : topo.edges()) {
        up[e.src] += e.capacity;
        down[e.dst] += e.capacity;
    }
    std::vector<double> out;
    for (const auto& tr : trace) {
        int n = static_cast<int>(tr.receivers.size());
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (down[tr.receivers[a]] != down[tr.receivers[b]])
                return down[tr.receivers[a]] > down[tr.receivers[b]];
            return tr.receivers[a] < tr.receivers[b];
        });
        std::vector<double> dls(n);
        for (int i = 0; i < n; ++i) dls[i] = down[tr.receivers[order[i]]];
        for (double d : dls)
            if (d <= 0.0) throw PartitionError("receiver without incoming capacity");
        auto rr = relaxed_partition(up[tr.src], dls);
        int g = n - rr.m + 1;
        // Partition caps on the relaxed link; index 0 is the fast group.
        std::vector<double> pcap;
        pcap.push_back(dls[g - 1]);
        for (int i = g; i < n; ++i) pcap.push_back(dls[i]);
        std::vector<double> residual(rr.m, tr.volume);
        std::vector<Slot> done(rr.m, 0);
        int left = rr.m;
        Slot t = 0;
        while (left > 0) {
            ++t;
            if (t > 100000000) throw PartitionError("lower bound did not converge");
            std::vector<double> caps(rr.m);
            for (int i = 0; i < rr.m; ++i)
                caps[i] = residual[i] <= kFeasTol
                              ? 0.0
                              : std::min(pcap[i], residual[i] / omega);
            auto rates = single_link_maxmin(up[tr.src], caps);
            for (int i = 0; i < rr.m; ++i) {
                if (residual[i] <= kFeasTol) continue;
                residual[i] -= rates[i] * omega;
                if (residual[i] <= kFeasTol) {
                    done[i] = t;
                    --left;
                }
            }
        }
        // Map partition completions back to the trace's receiver order.
        std::vector<double> per_rx(n);
        for (int pos = 0; pos < n; ++pos) {
            int part = pos < g ? 0 : pos - g + 1;
            per_rx[order[pos]] = static_cast<double>(done[part]);
        }
        for (double v : per_rx) out.push_back(v);
    }
    return out;
}

}  // namespace dcte
