#include "hsadet/synth.hpp"

#include <cmath>
#include <set>

#include "hsadet/errors.hpp"
#include "hsadet/rng.hpp"

namespace hsadet {

PlantedConfig PlantedConfig::uniform(int n_communities, int size, double internal,
                                     double external, std::uint64_t seed,
                                     double hub_fraction) {
    PlantedConfig c;
    c.n_communities = n_communities;
    c.community_sizes.assign(n_communities, size);
    c.mean_internal_flow = internal;
    c.mean_external_flow = external;
    c.hub_fraction = hub_fraction;
    c.seed = seed;
    return c;
}

namespace {

std::string zcta_label(int index) {
    std::string s = std::to_string(10000 + index);
    return s;
}

} // namespace

PlantedInstance generate(const PlantedConfig& config) {
    if (config.n_communities < 1 ||
        static_cast<int>(config.community_sizes.size()) != config.n_communities) {
        throw InvalidConfigError("community_sizes must list one size per community");
    }
    for (int size : config.community_sizes) {
        if (size < 1) throw InvalidConfigError("community sizes must be >= 1");
    }
    if (config.mean_internal_flow <= 0.0) {
        throw InvalidConfigError("mean_internal_flow must be positive");
    }
    if (config.mean_external_flow < 0.0) {
        throw InvalidConfigError("mean_external_flow must be non-negative");
    }
    if (config.hub_fraction <= 0.0 || config.hub_fraction > 1.0) {
        throw InvalidConfigError("hub_fraction must be in (0, 1]");
    }

    // label layout: communities in order, members in order
    std::vector<std::vector<int>> community_nodes(config.n_communities);
    std::vector<int> community_of;
    int next = 0;
    for (int c = 0; c < config.n_communities; ++c) {
        for (int m = 0; m < config.community_sizes[c]; ++m) {
            community_nodes[c].push_back(next++);
            community_of.push_back(c);
        }
    }
    const int total_nodes = next;

    std::vector<std::vector<int>> hubs(config.n_communities);
    for (int c = 0; c < config.n_communities; ++c) {
        const int size = config.community_sizes[c];
        int n_hubs = static_cast<int>(std::ceil(config.hub_fraction * size));
        n_hubs = std::min(std::max(n_hubs, 1), size);
        hubs[c].assign(community_nodes[c].begin(), community_nodes[c].begin() + n_hubs);
    }

    Rng rng(config.seed);
    FlowTable flows;
    flows.discharge_type = DischargeType::EDOnly;
    flows.year = 0;
    for (int i = 0; i < total_nodes; ++i) {
        const int home = community_of[i];
        for (int c = 0; c < config.n_communities; ++c) {
            const double mean =
                c == home ? config.mean_internal_flow : config.mean_external_flow;
            if (mean <= 0.0) continue;
            for (int h : hubs[c]) {
                const std::int64_t count = rng.poisson(mean);
                if (count > 0) flows.entries[{zcta_label(i), zcta_label(h)}] += count;
            }
        }
    }
    if (flows.entries.empty()) {
        throw InvalidConfigError("generated instance produced no flows; raise the means");
    }

    // ground truth over the ZCTAs that actually appear, in label order
    std::set<std::string> present;
    for (const auto& [key, count] : flows.entries) {
        present.insert(key.first);
        present.insert(key.second);
    }
    PlantedInstance out;
    out.flows = std::move(flows);
    std::vector<int> assignment;
    for (const auto& z : present) {
        const int index = std::stoi(z) - 10000;
        out.zctas.push_back(z);
        assignment.push_back(community_of[index]);
    }
    out.ground_truth = Partition(std::move(assignment));
    return out;
}

} // namespace hsadet
