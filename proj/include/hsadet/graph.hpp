#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hsadet {

struct WeightedEdge {
    int neighbor = 0;
    double weight = 0.0;
};

// Immutable weighted undirected graph over ZCTA labels. Node indices are
// dense integers ordered by label; labels appear only at the API boundary.
// Self-loops are stored separately from the pair adjacency.
//
// Strength conventions, fixed here so every objective is reproducible:
//   strength(i)            counts a self-loop once  (conductance, visit rates)
//   modularity_strength(i) counts a self-loop twice (modularity degree term)
class Hpdn {
public:
    // edges: (label_a, label_b, weight) with weight > 0; (a, a) is a loop.
    // Duplicate pairs are summed. Node set = all labels that appear.
    static Hpdn from_edges(
        const std::vector<std::tuple<std::string, std::string, double>>& edges);

    int node_count() const { return static_cast<int>(labels_.size()); }
    std::int64_t edge_count() const { return edge_count_; } // loops excluded
    double total_weight() const { return total_weight_; }   // pair + loop weight

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_.at(i); }

    // -1 if the label is unknown.
    int index_of(const std::string& label) const;
    // Throws UnknownNodeError.
    int require_index(const std::string& label) const;

    std::span<const WeightedEdge> neighbors(int i) const;
    int degree(int i) const; // distinct non-loop neighbors
    double loop_weight(int i) const { return loops_[i]; }

    double strength(int i) const { return strength_once_[i]; }
    double modularity_strength(int i) const { return strength_once_[i] + loops_[i]; }

    double total_strength() const { return total_strength_once_; }
    double total_modularity_strength() const { return total_strength_mod_; }

    bool has_integer_weights() const;

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::size_t> offsets_;
    std::vector<WeightedEdge> adjacency_;
    std::vector<double> loops_;
    std::vector<double> strength_once_;
    std::int64_t edge_count_ = 0;
    double total_weight_ = 0.0;
    double total_strength_once_ = 0.0;
    double total_strength_mod_ = 0.0;
};

struct NetworkStats {
    std::int64_t n = 0;     // nodes
    std::int64_t m = 0;     // distinct unordered edges between distinct nodes
    double w = 0.0;         // sum of pair weights + self-loop weights
    double rho = 0.0;       // 2m / (n(n-1))
    double l = 0.0;         // mean hop distance over connected ordered pairs
    double c = 0.0;         // mean local clustering over nodes with degree >= 2
    int components = 1;     // l is restricted to the largest component when > 1
};

struct StatsOptions {
    bool weighted_clustering = false; // Barrat strength-based variant
    int threads = 1;
};

// Throws EmptyGraphError on a graph with no nodes. The path length l uses
// unweighted hops; on a disconnected graph it is computed over the largest
// component and `components` flags that.
NetworkStats stats(const Hpdn& g, const StatsOptions& options = {});

// Label-keyed accessors used by callers that have not resolved indices.
int degree(const Hpdn& g, const std::string& label);
double strength(const Hpdn& g, const std::string& label);
std::vector<std::string> neighbor_labels(const Hpdn& g, const std::string& label);

} // namespace hsadet
