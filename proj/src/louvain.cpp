#include <cmath>
#include <vector>

#include "hsadet/detect.hpp"
#include "hsadet/errors.hpp"
#include "hsadet/objectives.hpp"
#include "hsadet/rng.hpp"
#include "work_graph.hpp"

namespace hsadet {

namespace {

using detail::WorkGraph;

constexpr double kRelativeGainFloor = 1e-9;

// One level of local moving. comm is compacted in order of first appearance
// before returning. Returns the accumulated modularity gain.
double local_moving(const WorkGraph& w, double two_w, double resolution, Rng& rng,
                    std::vector<int>& comm, int& k_out) {
    const int n = w.n;
    comm.assign(n, 0);
    std::vector<double> node_strength(n);
    for (int i = 0; i < n; ++i) {
        comm[i] = i;
        node_strength[i] = w.out_strength[i] + 2.0 * w.loop[i];
    }
    std::vector<double> comm_strength = node_strength;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    // scratch: weight from the current node to each touched community
    std::vector<double> to_comm(n, 0.0);
    std::vector<int> touched;
    touched.reserve(64);

    double total_gain = 0.0;
    while (true) {
        double pass_gain = 0.0;
        for (int idx = 0; idx < n; ++idx) {
            const int i = order[idx];
            const int old_comm = comm[i];
            touched.clear();
            for (std::size_t a = w.offsets[i]; a < w.offsets[i + 1]; ++a) {
                const int c = comm[w.nbr[a]];
                if (to_comm[c] == 0.0) touched.push_back(c);
                to_comm[c] += w.weight[a];
            }
            const double s_i = node_strength[i];
            comm_strength[old_comm] -= s_i;

            // gain(c) = k_{i,c} - resolution * s_i * tot_c / 2w; the terms
            // shared by every candidate (loop, s_i^2) cancel in comparisons.
            double stay_gain =
                to_comm[old_comm] - resolution * s_i * comm_strength[old_comm] / two_w;
            double best_gain = stay_gain;
            int best_comm = old_comm;
            for (int c : touched) {
                if (c == old_comm) continue;
                const double gain = to_comm[c] - resolution * s_i * comm_strength[c] / two_w;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_comm = c;
                }
            }
            comm[i] = best_comm;
            comm_strength[best_comm] += s_i;
            if (best_comm != old_comm) {
                pass_gain += 2.0 * (best_gain - stay_gain) / two_w;
            }
            for (int c : touched) to_comm[c] = 0.0;
        }
        total_gain += pass_gain;
        if (pass_gain < kRelativeGainFloor) break;
    }

    // compact ids
    std::vector<int> relabel(n, -1);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        if (relabel[comm[i]] < 0) relabel[comm[i]] = k++;
        comm[i] = relabel[comm[i]];
    }
    k_out = k;
    return total_gain;
}

Partition louvain_single(const Hpdn& g, double resolution, Rng rng) {
    const int n = g.node_count();
    std::vector<int> flat(n);
    for (int i = 0; i < n; ++i) flat[i] = i;

    WorkGraph w = WorkGraph::from_hpdn(g);
    const double two_w = g.total_modularity_strength();
    if (two_w <= 0.0) return Partition::singletons(n);

    while (true) {
        std::vector<int> comm;
        int k = 0;
        const double gain = local_moving(w, two_w, resolution, rng, comm, k);
        for (int i = 0; i < n; ++i) flat[i] = comm[flat[i]];
        if (k == w.n || gain < kRelativeGainFloor) break;
        w = w.aggregate(comm, k, 1.0);
    }
    return Partition(std::move(flat));
}

} // namespace

Partition louvain(const Hpdn& g, const DetectConfig& config) {
    if (g.node_count() == 0) throw EmptyGraphError("louvain on empty graph");

    Partition best;
    double best_q = 0.0;
    const int restarts = std::max(1, config.restarts);
    for (int r = 0; r < restarts; ++r) {
        Partition p = louvain_single(g, config.louvain_resolution,
                                     Rng::substream(config.seed, r));
        const double q = modularity(g, p, config.louvain_resolution);
        if (r == 0 || q > best_q) {
            best_q = q;
            best = std::move(p);
        }
    }
    // The search accepts only strictly improving moves from the singleton
    // start, so the result can never score below it.
    const double singleton_q = modularity(g, Partition::singletons(g.node_count()),
                                          config.louvain_resolution);
    if (best_q + 1e-9 < singleton_q) {
        throw Error("louvain: objective bookkeeping drifted below the start point");
    }
    return best;
}

} // namespace hsadet
