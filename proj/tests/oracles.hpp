#pragma once

// Test-side oracles, kept deliberately independent of the library's
// implementation paths: dense double-loop sums, entropy-form map equation,
// exhaustive set-partition enumeration, Floyd-Warshall hop distances.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hsadet/graph.hpp"
#include "hsadet/ingest.hpp"
#include "hsadet/partition.hpp"
#include "hsadet/rng.hpp"

namespace oracles {

// Dense symmetric matrix view of a graph; diag holds the self-loop weight
// counted ONCE (callers double it where their convention requires).
struct DenseGraph {
    int n = 0;
    std::vector<std::vector<double>> a;

    static DenseGraph from(const hsadet::Hpdn& g) {
        DenseGraph d;
        d.n = g.node_count();
        d.a.assign(d.n, std::vector<double>(d.n, 0.0));
        for (int i = 0; i < d.n; ++i) {
            d.a[i][i] = g.loop_weight(i);
            for (const auto& e : g.neighbors(i)) d.a[i][e.neighbor] = e.weight;
        }
        return d;
    }
};

inline double modularity_bruteforce(const DenseGraph& g, const std::vector<int>& comm,
                                    double resolution = 1.0) {
    const int n = g.n;
    std::vector<double> s(n, 0.0);
    double two_w = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = i == j ? 2.0 * g.a[i][j] : g.a[i][j];
            s[i] += a;
        }
        two_w += s[i];
    }
    if (two_w <= 0.0) return 0.0;
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (comm[i] != comm[j]) continue;
            const double a = i == j ? 2.0 * g.a[i][j] : g.a[i][j];
            q += a - resolution * s[i] * s[j] / two_w;
        }
    }
    return q / two_w;
}

// Entropy-form two-level map equation: L = q H(Q) + sum_c p_c H(P_c).
inline double map_equation_bruteforce(const DenseGraph& g, const std::vector<int>& comm) {
    const int n = g.n;
    int k = 0;
    for (int c : comm) k = std::max(k, c + 1);

    std::vector<double> strength(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) strength[i] += g.a[i][j];
        total += strength[i];
    }
    if (total <= 0.0) return 0.0;

    std::vector<double> q(k, 0.0);
    std::vector<double> visit(k, 0.0);
    for (int i = 0; i < n; ++i) {
        visit[comm[i]] += strength[i] / total;
        for (int j = 0; j < n; ++j) {
            if (j != i && comm[j] != comm[i]) q[comm[i]] += g.a[i][j] / total;
        }
    }
    double q_total = 0.0;
    for (int c = 0; c < k; ++c) q_total += q[c];

    auto entropy_term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };

    double l = 0.0;
    if (q_total > 0.0) {
        double h = 0.0;
        for (int c = 0; c < k; ++c) h += entropy_term(q[c] / q_total);
        l += q_total * h;
    }
    for (int c = 0; c < k; ++c) {
        const double use = q[c] + visit[c];
        if (use <= 0.0) continue;
        double h = entropy_term(q[c] / use);
        for (int i = 0; i < n; ++i) {
            if (comm[i] == c) h += entropy_term(strength[i] / total / use);
        }
        l += use * h;
    }
    return l;
}

inline std::optional<double> conductance_bruteforce(const DenseGraph& g,
                                                    const std::vector<int>& comm,
                                                    int community) {
    double total = 0.0;
    double ext = 0.0;
    for (int i = 0; i < g.n; ++i) {
        if (comm[i] != community) continue;
        total += g.a[i][i];
        for (int j = 0; j < g.n; ++j) {
            if (j == i) continue;
            total += g.a[i][j];
            if (comm[j] != community) ext += g.a[i][j];
        }
    }
    if (total <= 0.0) return std::nullopt;
    return ext / total;
}

// Directed localization index straight from the flow entries.
inline std::optional<double> li_bruteforce(
    const std::vector<std::tuple<std::string, std::string, std::int64_t>>& flows,
    const std::map<std::string, int>& community_of, int community) {
    std::int64_t internal = 0;
    std::int64_t resident = 0;
    for (const auto& [patient, facility, count] : flows) {
        if (community_of.at(patient) != community) continue;
        resident += count;
        if (community_of.at(facility) == community) internal += count;
    }
    if (resident == 0) return std::nullopt;
    return static_cast<double>(internal) / static_cast<double>(resident);
}

// Enumerates every set partition of n elements as restricted growth strings.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> a(n, 0);
    if (n == 0) {
        fn(a);
        return;
    }
    std::function<void(int, int)> rec = [&](int i, int max_used) {
        if (i == n) {
            fn(a);
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            a[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    rec(1, 0); // a[0] = 0 fixed
}

// All-pairs hop distances; -1 when unreachable.
inline std::vector<std::vector<int>> floyd_warshall_hops(const hsadet::Hpdn& g) {
    const int n = g.node_count();
    const int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (const auto& e : g.neighbors(i)) d[i][e.neighbor] = 1;
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    }
    for (auto& row : d) {
        for (int& v : row) {
            if (v >= inf) v = -1;
        }
    }
    return d;
}

// Closed-form ARI from the contingency table.
inline double ari_bruteforce(const std::vector<int>& a, const std::vector<int>& b) {
    const int n = static_cast<int>(a.size());
    std::map<std::pair<int, int>, std::int64_t> cells;
    std::map<int, std::int64_t> ra, rb;
    for (int i = 0; i < n; ++i) {
        ++cells[{a[i], b[i]}];
        ++ra[a[i]];
        ++rb[b[i]];
    }
    auto comb2 = [](std::int64_t x) { return static_cast<double>(x) * (x - 1) / 2.0; };
    double idx = 0.0, sa = 0.0, sb = 0.0;
    for (const auto& [k, v] : cells) idx += comb2(v);
    for (const auto& [k, v] : ra) sa += comb2(v);
    for (const auto& [k, v] : rb) sb += comb2(v);
    const double expected = sa * sb / comb2(n);
    const double maxi = 0.5 * (sa + sb);
    if (maxi == expected) return 1.0;
    return (idx - expected) / (maxi - expected);
}

// -------- randomized fixtures --------

// Random directed flow table over up to n_zctas labels; always yields at
// least one entry. Occasional self-flows exercise self-loops.
inline hsadet::FlowTable random_flow_table(int n_zctas, double density, int max_count,
                                           hsadet::Rng& rng) {
    hsadet::FlowTable flows;
    flows.discharge_type = hsadet::DischargeType::EDOnly;
    flows.year = 2000;
    auto label = [](int i) { return std::to_string(90000 + i); };
    while (flows.entries.empty()) {
        for (int i = 0; i < n_zctas; ++i) {
            for (int j = 0; j < n_zctas; ++j) {
                if (rng.real01() < density) {
                    flows.entries[{label(i), label(j)}] =
                        1 + static_cast<std::int64_t>(rng.below(max_count));
                }
            }
        }
    }
    return flows;
}

inline std::vector<int> random_partition(int n, int max_communities, hsadet::Rng& rng) {
    std::vector<int> comm(n);
    for (int i = 0; i < n; ++i) {
        comm[i] = static_cast<int>(rng.below(std::max(1, max_communities)));
    }
    return comm;
}

} // namespace oracles
