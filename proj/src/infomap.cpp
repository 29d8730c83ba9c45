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

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Structural part of the map equation: everything except the constant
// sum_i plogp(p_i) over original nodes.
struct ModuleState {
    std::vector<double> exit;  // q_c
    std::vector<double> visit; // sum of p_i in c
    double q_total = 0.0;
    double exit_term = 0.0; // sum plogp(q_c)
    double stay_term = 0.0; // sum plogp(q_c + visit_c)

    double structural() const { return plogp(q_total) - 2.0 * exit_term + stay_term; }
};

// One level of local moves minimizing the map equation. comm is compacted
// before returning; returns the total structural decrease (positive = gain).
double local_moving(const WorkGraph& w, double total_strength, Rng& rng,
                    std::vector<int>& comm, int& k_out) {
    const int n = w.n;
    comm.assign(n, 0);
    std::vector<double> node_visit(n);   // p_i
    std::vector<double> node_exit(n);    // out_strength_i / S
    for (int i = 0; i < n; ++i) {
        comm[i] = i;
        node_visit[i] = (w.out_strength[i] + w.loop[i]) / total_strength;
        node_exit[i] = w.out_strength[i] / total_strength;
    }

    ModuleState m;
    m.exit = node_exit;
    m.visit = node_visit;
    for (int c = 0; c < n; ++c) {
        m.q_total += m.exit[c];
        m.exit_term += plogp(m.exit[c]);
        m.stay_term += plogp(m.exit[c] + m.visit[c]);
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    std::vector<double> to_comm(n, 0.0); // flow between i and each community
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
                to_comm[c] += w.weight[a] / total_strength;
            }

            // module a loses i whichever candidate wins
            const double qa_new = m.exit[old_comm] - node_exit[i] + 2.0 * to_comm[old_comm];
            const double pa_new = m.visit[old_comm] - node_visit[i];
            const double base_delta =
                -plogp(m.exit[old_comm]) + plogp(qa_new) -
                plogp(m.exit[old_comm] + m.visit[old_comm]) + plogp(qa_new + pa_new);
            const double dq_a = qa_new - m.exit[old_comm];

            double best_delta = 0.0;
            int best_comm = old_comm;
            double best_qb = 0.0;
            for (int c : touched) {
                if (c == old_comm) continue;
                const double qb_new = m.exit[c] + node_exit[i] - 2.0 * to_comm[c];
                const double pb_new = m.visit[c] + node_visit[i];
                const double delta =
                    base_delta - plogp(m.exit[c]) + plogp(qb_new) -
                    plogp(m.exit[c] + m.visit[c]) + plogp(qb_new + pb_new) +
                    plogp(m.q_total + dq_a + (qb_new - m.exit[c])) - plogp(m.q_total);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_comm = c;
                    best_qb = qb_new;
                }
            }

            if (best_comm != old_comm) {
                m.exit_term += -plogp(m.exit[old_comm]) - plogp(m.exit[best_comm]) +
                               plogp(qa_new) + plogp(best_qb);
                m.stay_term += -plogp(m.exit[old_comm] + m.visit[old_comm]) -
                               plogp(m.exit[best_comm] + m.visit[best_comm]) +
                               plogp(qa_new + pa_new) +
                               plogp(best_qb + m.visit[best_comm] + node_visit[i]);
                m.q_total += dq_a + (best_qb - m.exit[best_comm]);
                m.exit[old_comm] = qa_new;
                m.visit[old_comm] = pa_new;
                m.exit[best_comm] = best_qb;
                m.visit[best_comm] += node_visit[i];
                comm[i] = best_comm;
                pass_gain -= best_delta;
            }
            for (int c : touched) to_comm[c] = 0.0;
        }
        total_gain += pass_gain;
        if (pass_gain < kRelativeGainFloor) break;
    }

    std::vector<int> relabel(n, -1);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        if (relabel[comm[i]] < 0) relabel[comm[i]] = k++;
        comm[i] = relabel[comm[i]];
    }
    k_out = k;
    return total_gain;
}

Partition infomap_single(const Hpdn& g, Rng rng) {
    const int n = g.node_count();
    std::vector<int> flat(n);
    for (int i = 0; i < n; ++i) flat[i] = i;

    const double total_strength = g.total_strength();
    if (total_strength <= 0.0) return Partition::singletons(n);

    WorkGraph w = WorkGraph::from_hpdn(g);
    while (true) {
        std::vector<int> comm;
        int k = 0;
        const double gain = local_moving(w, total_strength, rng, comm, k);
        for (int i = 0; i < n; ++i) flat[i] = comm[flat[i]];
        if (k == w.n || gain < kRelativeGainFloor) break;
        // intra pair weights double when they fold into a super-node loop so
        // that visit rates stay those of the original walk
        w = w.aggregate(comm, k, 2.0);
    }
    return Partition(std::move(flat));
}

} // namespace

Partition infomap(const Hpdn& g, const DetectConfig& config) {
    if (g.node_count() == 0) throw EmptyGraphError("infomap on empty graph");

    Partition best;
    double best_l = 0.0;
    const int restarts = std::max(1, config.restarts);
    for (int r = 0; r < restarts; ++r) {
        Partition p = infomap_single(g, Rng::substream(config.seed, r));
        const double l = map_equation(g, p);
        if (r == 0 || l < best_l) {
            best_l = l;
            best = std::move(p);
        }
    }
    const double singleton_l = map_equation(g, Partition::singletons(g.node_count()));
    if (best_l > singleton_l + 1e-9) {
        throw Error("infomap: objective bookkeeping drifted above the start point");
    }
    return best;
}

} // namespace hsadet
