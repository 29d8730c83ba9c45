#include "hsadet/partition.hpp"

#include <unordered_map>

#include "hsadet/errors.hpp"

namespace hsadet {

Partition::Partition(std::vector<int> raw_assignment)
    : assignment_(std::move(raw_assignment)) {
    std::unordered_map<int, int> relabel;
    relabel.reserve(assignment_.size());
    for (int& c : assignment_) {
        auto [it, inserted] = relabel.emplace(c, static_cast<int>(relabel.size()));
        c = it->second;
    }
    community_count_ = static_cast<int>(relabel.size());
}

Partition Partition::singletons(int node_count) {
    std::vector<int> a(node_count);
    for (int i = 0; i < node_count; ++i) a[i] = i;
    return Partition(std::move(a));
}

Partition Partition::single_community(int node_count) {
    return Partition(std::vector<int>(node_count, 0));
}

Partition Partition::from_contiguous(std::vector<int> assignment, int k) {
    std::vector<char> seen(k, 0);
    for (int c : assignment) {
        if (c < 0 || c >= k) {
            throw PartitionMismatchError("community id out of range: " + std::to_string(c));
        }
        seen[c] = 1;
    }
    for (int c = 0; c < k; ++c) {
        if (!seen[c]) {
            throw PartitionMismatchError("empty community id: " + std::to_string(c));
        }
    }
    Partition p;
    p.assignment_ = std::move(assignment);
    p.community_count_ = k;
    return p;
}

std::vector<int> Partition::community_sizes() const {
    std::vector<int> sizes(community_count_, 0);
    for (int c : assignment_) ++sizes[c];
    return sizes;
}

std::vector<std::vector<int>> Partition::members() const {
    std::vector<std::vector<int>> out(community_count_);
    for (int i = 0; i < node_count(); ++i) out[assignment_[i]].push_back(i);
    return out;
}

double partition_similarity(const Partition& a, const Partition& b) {
    if (a.node_count() != b.node_count()) {
        throw PartitionMismatchError("partition_similarity: node counts differ");
    }
    const int n = a.node_count();
    if (n == 0) throw PartitionMismatchError("partition_similarity: empty partitions");

    auto comb2 = [](std::int64_t x) { return static_cast<double>(x) * (x - 1) / 2.0; };

    std::unordered_map<std::int64_t, std::int64_t> cell;
    for (int i = 0; i < n; ++i) {
        std::int64_t key = static_cast<std::int64_t>(a.community_of(i)) *
                               (b.community_count() + 1) +
                           b.community_of(i);
        ++cell[key];
    }
    double sum_cells = 0.0;
    for (const auto& [key, count] : cell) sum_cells += comb2(count);

    double sum_a = 0.0;
    for (int s : a.community_sizes()) sum_a += comb2(s);
    double sum_b = 0.0;
    for (int s : b.community_sizes()) sum_b += comb2(s);

    const double pairs = comb2(n);
    const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) {
        // Both all-singletons or both one community: identical by convention.
        return 1.0;
    }
    return (sum_cells - expected) / (max_index - expected);
}

} // namespace hsadet
