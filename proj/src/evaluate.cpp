#include "hsadet/evaluate.hpp"

#include <cmath>
#include <vector>

#include "hsadet/errors.hpp"
#include "hsadet/objectives.hpp"
#include "hsadet/rng.hpp"

namespace hsadet {

namespace {

struct FlowTallies {
    std::vector<std::int64_t> internal_flows; // patient and facility in c
    std::vector<std::int64_t> resident_flows; // patient in c
};

// One pass over the directed flow entries. Throws PartitionMismatchError
// naming the first ZCTA that is missing from the graph.
FlowTallies tally_flows(const FlowTable& flows, const Hpdn& g, const Partition& p) {
    FlowTallies t;
    t.internal_flows.assign(p.community_count(), 0);
    t.resident_flows.assign(p.community_count(), 0);
    for (const auto& [key, count] : flows.entries) {
        const int pi = g.index_of(key.first);
        if (pi < 0) {
            throw PartitionMismatchError("flow ZCTA not covered by the partition: " +
                                         key.first);
        }
        const int fi = g.index_of(key.second);
        if (fi < 0) {
            throw PartitionMismatchError("flow ZCTA not covered by the partition: " +
                                         key.second);
        }
        const int pc = p.community_of(pi);
        t.resident_flows[pc] += count;
        if (pc == p.community_of(fi)) t.internal_flows[pc] += count;
    }
    return t;
}

struct StrengthTallies {
    std::vector<double> total;    // w_C, self-loops once
    std::vector<double> external; // w_C^ext
};

StrengthTallies tally_strength(const Hpdn& g, const Partition& p) {
    StrengthTallies t;
    t.total.assign(p.community_count(), 0.0);
    t.external.assign(p.community_count(), 0.0);
    for (int i = 0; i < g.node_count(); ++i) {
        const int c = p.community_of(i);
        t.total[c] += g.strength(i);
        for (const auto& e : g.neighbors(i)) {
            if (p.community_of(e.neighbor) != c) t.external[c] += e.weight;
        }
    }
    return t;
}

void require_community(const Partition& p, int community, const char* where) {
    if (community < 0 || community >= p.community_count()) {
        throw PartitionMismatchError(std::string(where) + ": no community " +
                                     std::to_string(community));
    }
}

} // namespace

std::optional<double> localization_index(const FlowTable& flows, const Hpdn& g,
                                         const Partition& p, int community) {
    require_covers(g, p, "localization_index");
    require_community(p, community, "localization_index");
    const FlowTallies t = tally_flows(flows, g, p);
    if (t.resident_flows[community] == 0) return std::nullopt;
    return static_cast<double>(t.internal_flows[community]) /
           static_cast<double>(t.resident_flows[community]);
}

std::optional<double> conductance(const Hpdn& g, const Partition& p, int community) {
    require_covers(g, p, "conductance");
    require_community(p, community, "conductance");
    const StrengthTallies t = tally_strength(g, p);
    if (t.total[community] <= 0.0) return std::nullopt;
    return t.external[community] / t.total[community];
}

std::int64_t community_discharges(const FlowTable& flows, const Hpdn& g,
                                  const Partition& p, int community) {
    require_covers(g, p, "community_discharges");
    require_community(p, community, "community_discharges");
    return tally_flows(flows, g, p).resident_flows[community];
}

BootstrapSummary bootstrap_summary(const std::vector<double>& values, int b,
                                   std::uint64_t seed) {
    if (values.empty()) throw EmptyValuesError("bootstrap over an empty value list");
    if (b < 1) throw InvalidConfigError("bootstrap requires B >= 1");

    const std::size_t n = values.size();
    std::vector<double> means(b);
    for (int rep = 0; rep < b; ++rep) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(rep));
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += values[rng.below(n)];
        means[rep] = sum / static_cast<double>(n);
    }
    BootstrapSummary out;
    for (double m : means) out.mean += m;
    out.mean /= b;
    if (b > 1) {
        double ss = 0.0;
        for (double m : means) ss += (m - out.mean) * (m - out.mean);
        out.std = std::sqrt(ss / (b - 1));
    }
    return out;
}

DelineationReport evaluate_partition(const FlowTable& flows, const Hpdn& g,
                                     const Partition& p, int b, std::uint64_t seed) {
    require_covers(g, p, "evaluate_partition");
    const FlowTallies flow_t = tally_flows(flows, g, p);
    const StrengthTallies strength_t = tally_strength(g, p);
    const std::vector<int> sizes = p.community_sizes();

    DelineationReport report;
    report.n_communities = p.community_count();
    report.bootstrap_b = b;
    report.seed = seed;

    std::vector<double> li_values;
    std::vector<double> conductance_values;
    std::vector<double> discharge_values;
    for (int c = 0; c < p.community_count(); ++c) {
        CommunityMetrics m;
        m.community_id = c;
        m.size = sizes[c];
        m.discharges = flow_t.resident_flows[c];
        if (flow_t.resident_flows[c] > 0) {
            m.li = static_cast<double>(flow_t.internal_flows[c]) /
                   static_cast<double>(flow_t.resident_flows[c]);
            li_values.push_back(*m.li);
        } else {
            ++report.undefined_li_count;
        }
        if (strength_t.total[c] > 0.0) {
            m.conductance = strength_t.external[c] / strength_t.total[c];
            conductance_values.push_back(*m.conductance);
        } else {
            ++report.undefined_conductance_count;
        }
        discharge_values.push_back(static_cast<double>(m.discharges));
        report.per_community.push_back(m);
    }

    if (!li_values.empty()) {
        report.li = bootstrap_summary(li_values, b, splitmix64(seed + 1));
    }
    if (!conductance_values.empty()) {
        report.conductance = bootstrap_summary(conductance_values, b, splitmix64(seed + 2));
    }
    report.discharges = bootstrap_summary(discharge_values, b, splitmix64(seed + 3));
    return report;
}

} // namespace hsadet
