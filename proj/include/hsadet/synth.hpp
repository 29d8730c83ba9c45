#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsadet/ingest.hpp"
#include "hsadet/partition.hpp"

namespace hsadet {

// Planted-community discharge generator. Within each community a fraction of
// ZCTAs act as facility hubs; every resident sends Poisson(mean_internal_flow)
// discharges to each hub of its own community and Poisson(mean_external_flow)
// to each hub elsewhere. Flows are directed patient -> hub, so the generator
// exercises the directed-LI / undirected-graph distinction, and a resident
// hub's flow to itself lands as a self-loop.
struct PlantedConfig {
    int n_communities = 0;
    std::vector<int> community_sizes;
    double mean_internal_flow = 0.0;
    double mean_external_flow = 0.0;
    double hub_fraction = 0.25;
    std::uint64_t seed = 0;

    static PlantedConfig uniform(int n_communities, int size, double internal,
                                 double external, std::uint64_t seed,
                                 double hub_fraction = 0.25);
};

struct PlantedInstance {
    FlowTable flows;
    Partition ground_truth;           // over the ZCTAs present in the flows
    std::vector<std::string> zctas;   // same order the partition indexes
};

// Deterministic per seed, bit-exact. Throws InvalidConfigError.
PlantedInstance generate(const PlantedConfig& config);

} // namespace hsadet
