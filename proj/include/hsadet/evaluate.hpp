#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hsadet/graph.hpp"
#include "hsadet/ingest.hpp"
#include "hsadet/partition.hpp"

namespace hsadet {

struct CommunityMetrics {
    int community_id = 0;
    std::optional<double> li;          // unset when the community has no resident discharges
    std::optional<double> conductance; // unset when the community has zero incident strength
    std::int64_t discharges = 0;
    int size = 0;
};

struct BootstrapSummary {
    double mean = 0.0;
    double std = 0.0;
};

struct DelineationReport {
    int n_communities = 0;
    std::vector<CommunityMetrics> per_community;
    BootstrapSummary li;
    BootstrapSummary conductance;
    BootstrapSummary discharges;
    int undefined_li_count = 0;
    int undefined_conductance_count = 0;
    int bootstrap_b = 0;
    std::uint64_t seed = 0;
};

// Localization index of community c: resident discharges served inside c over
// all resident discharges, computed on the DIRECTED flow table (never on the
// symmetrized graph). Unset when the community has no resident discharges.
std::optional<double> localization_index(const FlowTable& flows, const Hpdn& g,
                                         const Partition& p, int community);

// Conductance of community c: external incident strength over total incident
// strength (internal pair edges counted from both endpoints, self-loops once).
// Unset for a community with zero incident strength.
std::optional<double> conductance(const Hpdn& g, const Partition& p, int community);

// Total discharges from patients residing in community c; 0 is a valid value.
std::int64_t community_discharges(const FlowTable& flows, const Hpdn& g,
                                  const Partition& p, int community);

// Mean and standard deviation of B resample means (sampling with
// replacement, resample size = |values|). Throws EmptyValuesError.
BootstrapSummary bootstrap_summary(const std::vector<double>& values, int b,
                                   std::uint64_t seed);

// Per-community metrics plus bootstrap summaries over the defined values.
// Throws PartitionMismatchError naming the first ZCTA present in the flows
// but absent from the partition's graph.
DelineationReport evaluate_partition(const FlowTable& flows, const Hpdn& g,
                                     const Partition& p, int b, std::uint64_t seed);

} // namespace hsadet
