#include "hsadet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <thread>

#include "hsadet/errors.hpp"

namespace hsadet {

Hpdn Hpdn::from_edges(
    const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    Hpdn g;

    std::vector<std::string> labels;
    labels.reserve(edges.size() * 2);
    for (const auto& [a, b, w] : edges) {
        if (w <= 0.0) {
            throw InvalidConfigError("edge weight must be positive: " + a + "-" + b);
        }
        labels.push_back(a);
        labels.push_back(b);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    g.labels_ = std::move(labels);
    g.index_.reserve(g.labels_.size());
    for (int i = 0; i < static_cast<int>(g.labels_.size()); ++i) {
        g.index_.emplace(g.labels_[i], i);
    }

    const int n = g.node_count();
    g.loops_.assign(n, 0.0);
    std::map<std::pair<int, int>, double> pair_weight;
    for (const auto& [a, b, w] : edges) {
        int ia = g.index_.at(a);
        int ib = g.index_.at(b);
        if (ia == ib) {
            g.loops_[ia] += w;
        } else {
            pair_weight[{std::min(ia, ib), std::max(ia, ib)}] += w;
        }
    }

    std::vector<std::vector<WeightedEdge>> adj(n);
    for (const auto& [key, w] : pair_weight) {
        adj[key.first].push_back({key.second, w});
        adj[key.second].push_back({key.first, w});
    }
    g.offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        std::sort(adj[i].begin(), adj[i].end(),
                  [](const WeightedEdge& x, const WeightedEdge& y) {
                      return x.neighbor < y.neighbor;
                  });
        g.offsets_[i + 1] = g.offsets_[i] + adj[i].size();
    }
    g.adjacency_.reserve(g.offsets_[n]);
    for (int i = 0; i < n; ++i) {
        g.adjacency_.insert(g.adjacency_.end(), adj[i].begin(), adj[i].end());
    }

    g.edge_count_ = static_cast<std::int64_t>(pair_weight.size());
    g.strength_once_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = g.loops_[i];
        for (const auto& e : g.neighbors(i)) s += e.weight;
        g.strength_once_[i] = s;
        g.total_strength_once_ += s;
        g.total_strength_mod_ += s + g.loops_[i];
    }
    for (const auto& [key, w] : pair_weight) g.total_weight_ += w;
    for (int i = 0; i < n; ++i) g.total_weight_ += g.loops_[i];
    return g;
}

int Hpdn::index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

int Hpdn::require_index(const std::string& label) const {
    int i = index_of(label);
    if (i < 0) throw UnknownNodeError("unknown node: " + label);
    return i;
}

std::span<const WeightedEdge> Hpdn::neighbors(int i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

int Hpdn::degree(int i) const {
    return static_cast<int>(offsets_[i + 1] - offsets_[i]);
}

bool Hpdn::has_integer_weights() const {
    auto integral = [](double w) { return std::floor(w) == w; };
    for (const auto& e : adjacency_) {
        if (!integral(e.weight)) return false;
    }
    for (double w : loops_) {
        if (!integral(w)) return false;
    }
    return true;
}

int degree(const Hpdn& g, const std::string& label) {
    return g.degree(g.require_index(label));
}

double strength(const Hpdn& g, const std::string& label) {
    return g.strength(g.require_index(label));
}

std::vector<std::string> neighbor_labels(const Hpdn& g, const std::string& label) {
    std::vector<std::string> out;
    for (const auto& e : g.neighbors(g.require_index(label))) {
        out.push_back(g.label(e.neighbor));
    }
    return out;
}

namespace {

// Connected components by BFS; returns component id per node and sizes.
std::pair<std::vector<int>, std::vector<int>> components_of(const Hpdn& g) {
    const int n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<int> sizes;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        int id = static_cast<int>(sizes.size());
        int size = 0;
        std::queue<int> frontier;
        frontier.push(start);
        comp[start] = id;
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            ++size;
            for (const auto& e : g.neighbors(u)) {
                if (comp[e.neighbor] < 0) {
                    comp[e.neighbor] = id;
                    frontier.push(e.neighbor);
                }
            }
        }
        sizes.push_back(size);
    }
    return {std::move(comp), std::move(sizes)};
}

// Sum of hop distances from `source` to every other reachable node.
std::int64_t bfs_distance_sum(const Hpdn& g, int source, std::vector<int>& dist) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[source] = 0;
    std::queue<int> frontier;
    frontier.push(source);
    std::int64_t sum = 0;
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop();
        sum += dist[u];
        for (const auto& e : g.neighbors(u)) {
            if (dist[e.neighbor] < 0) {
                dist[e.neighbor] = dist[u] + 1;
                frontier.push(e.neighbor);
            }
        }
    }
    return sum;
}

double local_clustering(const Hpdn& g, int i, bool weighted) {
    const int d = g.degree(i);
    if (d < 2) return 0.0;
    auto nbrs = g.neighbors(i);
    double numer = 0.0;
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
        auto row = g.neighbors(nbrs[a].neighbor);
        std::size_t b = a + 1;
        // nbrs is sorted, so walk the (also sorted) row once per pair block.
        for (const auto& e : row) {
            while (b < nbrs.size() && nbrs[b].neighbor < e.neighbor) ++b;
            if (b == nbrs.size()) break;
            if (nbrs[b].neighbor == e.neighbor) {
                numer += weighted ? (nbrs[a].weight + nbrs[b].weight) / 2.0 : 1.0;
            }
        }
    }
    if (weighted) {
        // Barrat et al. strength-based coefficient; loops excluded.
        double s = g.strength(i) - g.loop_weight(i);
        if (s <= 0.0) return 0.0;
        return numer / (s * (d - 1));
    }
    return 2.0 * numer / (static_cast<double>(d) * (d - 1));
}

} // namespace

NetworkStats stats(const Hpdn& g, const StatsOptions& options) {
    if (g.node_count() == 0) throw EmptyGraphError("stats on empty graph");

    NetworkStats out;
    const int n = g.node_count();
    out.n = n;
    out.m = g.edge_count();
    out.w = g.total_weight();
    out.rho = n > 1 ? 2.0 * static_cast<double>(out.m) / (static_cast<double>(n) * (n - 1))
                    : 0.0;

    auto [comp, sizes] = components_of(g);
    out.components = static_cast<int>(sizes.size());

    // Largest component; ties resolved toward the lower component id, which
    // is itself determined by node order.
    int big = 0;
    for (int c = 1; c < out.components; ++c) {
        if (sizes[c] > sizes[big]) big = c;
    }
    std::vector<int> members;
    members.reserve(sizes[big]);
    for (int i = 0; i < n; ++i) {
        if (comp[i] == big) members.push_back(i);
    }

    std::int64_t pair_count =
        static_cast<std::int64_t>(members.size()) * (static_cast<std::int64_t>(members.size()) - 1);
    if (pair_count > 0) {
        const int threads = std::max(1, options.threads);
        std::vector<std::int64_t> partial(threads, 0);
        auto worker = [&](int t) {
            std::vector<int> dist(n);
            std::int64_t local = 0;
            for (std::size_t k = t; k < members.size(); k += threads) {
                local += bfs_distance_sum(g, members[k], dist);
            }
            partial[t] = local;
        };
        if (threads == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
            for (auto& th : pool) th.join();
        }
        std::int64_t total = 0;
        for (std::int64_t s : partial) total += s;
        out.l = static_cast<double>(total) / static_cast<double>(pair_count);
    }

    double csum = 0.0;
    int cnodes = 0;
    for (int i = 0; i < n; ++i) {
        if (g.degree(i) < 2) continue;
        csum += local_clustering(g, i, options.weighted_clustering);
        ++cnodes;
    }
    out.c = cnodes > 0 ? csum / cnodes : 0.0;
    return out;
}

} // namespace hsadet
