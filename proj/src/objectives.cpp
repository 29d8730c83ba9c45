#include "hsadet/objectives.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "hsadet/errors.hpp"

namespace hsadet {

void require_covers(const Hpdn& g, const Partition& p, const char* where) {
    if (p.node_count() != g.node_count()) {
        throw PartitionMismatchError(std::string(where) + ": partition covers " +
                                     std::to_string(p.node_count()) + " nodes, graph has " +
                                     std::to_string(g.node_count()));
    }
}

double modularity(const Hpdn& g, const Partition& p, double resolution) {
    require_covers(g, p, "modularity");
    const double two_w = g.total_modularity_strength();
    if (two_w <= 0.0) return 0.0;

    const int k = p.community_count();
    std::vector<double> internal(k, 0.0); // sum over ordered pairs + 2*loops
    std::vector<double> strength_sum(k, 0.0);
    for (int i = 0; i < g.node_count(); ++i) {
        const int c = p.community_of(i);
        strength_sum[c] += g.modularity_strength(i);
        internal[c] += 2.0 * g.loop_weight(i);
        for (const auto& e : g.neighbors(i)) {
            if (p.community_of(e.neighbor) == c) internal[c] += e.weight;
        }
    }
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        q += internal[c] / two_w -
             resolution * (strength_sum[c] / two_w) * (strength_sum[c] / two_w);
    }
    return q;
}

namespace {

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

} // namespace

double map_equation(const Hpdn& g, const Partition& p) {
    require_covers(g, p, "map_equation");
    const double total = g.total_strength();
    if (total <= 0.0) return 0.0;

    const int k = p.community_count();
    std::vector<double> exit_rate(k, 0.0);  // q_c
    std::vector<double> visit_sum(k, 0.0);  // sum of p_i within c
    double node_term = 0.0;                 // sum_i plogp(p_i)
    for (int i = 0; i < g.node_count(); ++i) {
        const int c = p.community_of(i);
        const double pi = g.strength(i) / total;
        visit_sum[c] += pi;
        node_term += plogp(pi);
        for (const auto& e : g.neighbors(i)) {
            if (p.community_of(e.neighbor) != c) exit_rate[c] += e.weight / total;
        }
    }
    double q_total = 0.0;
    double exit_term = 0.0;
    double stay_term = 0.0;
    for (int c = 0; c < k; ++c) {
        q_total += exit_rate[c];
        exit_term += plogp(exit_rate[c]);
        stay_term += plogp(exit_rate[c] + visit_sum[c]);
    }
    return plogp(q_total) - 2.0 * exit_term + stay_term - node_term;
}

namespace {

inline double log_factorial(double x) { return std::lgamma(x + 1.0); }

// ln( (2m)!! ) with (2m)!! = 2^m m!, for even inputs stored as 2m.
inline double log_double_factorial_even(double two_m) {
    const double m = two_m / 2.0;
    return m * std::log(2.0) + log_factorial(m);
}

inline double log_binomial(double n, double k) {
    if (k < 0.0 || n < k) return 0.0;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

} // namespace

SbmDescriptionLength sbm_description_length_terms(const Hpdn& g, const Partition& p) {
    require_covers(g, p, "sbm_description_length");
    if (!g.has_integer_weights()) {
        throw NonIntegerWeightsError(
            "block model requires integer weights (edge multiplicities)");
    }

    const int n = g.node_count();
    const int b = p.community_count();

    // Degrees count loops twice; e_rr counts internal edge ends.
    std::vector<double> degree(n, 0.0);
    std::vector<double> block_degree(b, 0.0); // e_r
    std::vector<double> block_size(b, 0.0);   // n_r
    std::vector<std::vector<double>> block_edges(b); // e_rs, r <= s
    for (auto& row : block_edges) row.assign(b, 0.0);

    double edge_total = 0.0; // E, number of multigraph edges
    double log_edge_multiplicities = 0.0;
    for (int i = 0; i < n; ++i) {
        const int r = p.community_of(i);
        block_size[r] += 1.0;
        double k = 2.0 * g.loop_weight(i);
        for (const auto& e : g.neighbors(i)) {
            k += e.weight;
            const int s = p.community_of(e.neighbor);
            block_edges[r][s] += e.weight;
            if (e.neighbor > i) {
                edge_total += e.weight;
                log_edge_multiplicities += log_factorial(e.weight);
            }
        }
        block_edges[r][r] += 2.0 * g.loop_weight(i);
        log_edge_multiplicities += log_double_factorial_even(2.0 * g.loop_weight(i));
        edge_total += g.loop_weight(i);
        degree[i] = k;
        block_degree[r] += k;
    }

    SbmDescriptionLength out;

    // -ln P(A | k, e, b) for the microcanonical degree-corrected multigraph.
    double log_p = 0.0;
    for (int r = 0; r < b; ++r) {
        log_p += log_double_factorial_even(block_edges[r][r]);
        for (int s = r + 1; s < b; ++s) log_p += log_factorial(block_edges[r][s]);
        log_p -= log_factorial(block_degree[r]);
    }
    for (int i = 0; i < n; ++i) log_p += log_factorial(degree[i]);
    log_p -= log_edge_multiplicities;
    out.likelihood = -log_p;

    // Uniform prior over block-pair edge-count matrices with E edges.
    const double cells = static_cast<double>(b) * (b + 1) / 2.0;
    out.edge_matrix = log_binomial(cells + edge_total - 1.0, edge_total);

    // Uniform prior over degree sequences within each block given e_r.
    for (int r = 0; r < b; ++r) {
        out.degrees += log_binomial(block_size[r] + block_degree[r] - 1.0, block_degree[r]);
    }

    // Partition prior: group sizes, then the labeled assignment.
    out.partition = std::log(static_cast<double>(n)) +
                    log_binomial(static_cast<double>(n) - 1.0, static_cast<double>(b) - 1.0) +
                    log_factorial(static_cast<double>(n));
    for (int r = 0; r < b; ++r) out.partition -= log_factorial(block_size[r]);

    return out;
}

double sbm_description_length(const Hpdn& g, const Partition& p) {
    return sbm_description_length_terms(g, p).total();
}

} // namespace hsadet
