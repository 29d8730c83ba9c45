#pragma once

// Internal level graph for the local-move/aggregate searches. Louvain and
// the map-equation search keep different self-loop bookkeeping, so
// aggregation takes the factor applied to intra-community pair weights when
// they collapse into a super-node loop.

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsadet/graph.hpp"

namespace hsadet::detail {

struct WorkGraph {
    int n = 0;
    std::vector<std::size_t> offsets;
    std::vector<int> nbr;
    std::vector<double> weight; // pair edges only
    std::vector<double> loop;
    std::vector<double> out_strength; // sum of pair weights per node

    static WorkGraph from_hpdn(const Hpdn& g) {
        WorkGraph w;
        w.n = g.node_count();
        w.offsets.assign(w.n + 1, 0);
        w.loop.assign(w.n, 0.0);
        w.out_strength.assign(w.n, 0.0);
        for (int i = 0; i < w.n; ++i) {
            w.offsets[i + 1] = w.offsets[i] + g.neighbors(i).size();
            w.loop[i] = g.loop_weight(i);
        }
        w.nbr.resize(w.offsets[w.n]);
        w.weight.resize(w.offsets[w.n]);
        std::size_t at = 0;
        for (int i = 0; i < w.n; ++i) {
            double s = 0.0;
            for (const auto& e : g.neighbors(i)) {
                w.nbr[at] = e.neighbor;
                w.weight[at] = e.weight;
                s += e.weight;
                ++at;
            }
            w.out_strength[i] = s;
        }
        return w;
    }

    // Collapses communities (compact ids 0..k-1) into super-nodes.
    WorkGraph aggregate(const std::vector<int>& comm, int k,
                        double intra_loop_factor) const {
        WorkGraph out;
        out.n = k;
        out.loop.assign(k, 0.0);
        std::vector<std::unordered_map<int, double>> rows(k);
        for (int i = 0; i < n; ++i) {
            const int ci = comm[i];
            out.loop[ci] += loop[i];
            for (std::size_t a = offsets[i]; a < offsets[i + 1]; ++a) {
                const int cj = comm[nbr[a]];
                if (cj == ci) {
                    // each intra pair edge is seen from both endpoints, so
                    // half the factor per visit
                    out.loop[ci] += intra_loop_factor * weight[a] / 2.0;
                } else {
                    rows[ci][cj] += weight[a];
                }
            }
        }
        out.offsets.assign(k + 1, 0);
        for (int c = 0; c < k; ++c) out.offsets[c + 1] = out.offsets[c] + rows[c].size();
        out.nbr.resize(out.offsets[k]);
        out.weight.resize(out.offsets[k]);
        out.out_strength.assign(k, 0.0);
        for (int c = 0; c < k; ++c) {
            // deterministic order
            std::vector<std::pair<int, double>> row(rows[c].begin(), rows[c].end());
            std::sort(row.begin(), row.end());
            std::size_t at = out.offsets[c];
            double s = 0.0;
            for (const auto& [d, wgt] : row) {
                out.nbr[at] = d;
                out.weight[at] = wgt;
                s += wgt;
                ++at;
            }
            out.out_strength[c] = s;
        }
        return out;
    }
};

} // namespace hsadet::detail
