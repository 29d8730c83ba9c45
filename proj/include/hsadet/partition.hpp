#pragma once

#include <cstdint>
#include <vector>

namespace hsadet {

// Assignment of every node of a graph to exactly one community. Ids are
// dense integers 0..community_count-1 and every id is non-empty.
class Partition {
public:
    Partition() = default;

    // Compacts arbitrary non-negative ids to 0..k-1 in order of first
    // appearance, which keeps construction deterministic.
    explicit Partition(std::vector<int> raw_assignment);

    static Partition singletons(int node_count);
    static Partition single_community(int node_count);

    // For callers that already hold contiguous ids 0..k-1 whose order must
    // survive (e.g. lexicographic town ranks). Validates that every id below
    // k appears.
    static Partition from_contiguous(std::vector<int> assignment, int k);

    int node_count() const { return static_cast<int>(assignment_.size()); }
    int community_count() const { return community_count_; }
    int community_of(int node) const { return assignment_.at(node); }
    const std::vector<int>& assignment() const { return assignment_; }

    std::vector<int> community_sizes() const;
    std::vector<std::vector<int>> members() const;

    bool operator==(const Partition& other) const = default;

private:
    std::vector<int> assignment_;
    int community_count_ = 0;
};

// Adjusted Rand index between two partitions of the same node set; 1 iff
// identical up to label permutation. Throws PartitionMismatchError when the
// node counts differ.
double partition_similarity(const Partition& a, const Partition& b);

} // namespace hsadet
