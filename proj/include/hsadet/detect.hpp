#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hsadet/graph.hpp"
#include "hsadet/partition.hpp"

namespace hsadet {

enum class Algorithm {
    Louvain,
    Infomap,
    BlockModel,
    Slpa,
};

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

struct DetectConfig {
    Algorithm algorithm = Algorithm::Louvain;
    std::uint64_t seed = 0;
    int slpa_iterations = 100;
    double slpa_threshold = 0.5; // post-processing threshold r
    double louvain_resolution = 1.0;
    int sbm_mcmc_sweeps = 100;
    // Number of independent seeded starts for the Louvain/Infomap searches;
    // the best objective wins, ties resolved toward the earliest start.
    int restarts = 5;
};

// Modularity maximization: local moves by delta-Q until a full pass gains
// less than 1e-9 relative, then aggregation, repeated. Isolated nodes end as
// singletons. Deterministic given (graph, config).
Partition louvain(const Hpdn& g, const DetectConfig& config);

// Same search skeleton minimizing the two-level map equation.
Partition infomap(const Hpdn& g, const DetectConfig& config);

// Degree-corrected block model: greedy agglomerative merges from singletons
// minimizing description length, then `sbm_mcmc_sweeps` single-node-move
// Metropolis sweeps at unit temperature; returns the best partition visited.
// Throws NonIntegerWeightsError on non-integral weights.
Partition block_model(const Hpdn& g, const DetectConfig& config);

// Speaker-listener label propagation with per-node memories; the overlapping
// memories are collapsed to one label per node using threshold r.
Partition slpa(const Hpdn& g, const DetectConfig& config);

Partition detect(const Hpdn& g, const DetectConfig& config);

} // namespace hsadet
