#include "hsadet/baseline.hpp"

#include <algorithm>
#include <map>

#include "hsadet/errors.hpp"
#include "hsadet/objectives.hpp"

namespace hsadet {

FacilityTownMap degenerate_town_map(const FlowTable& flows) {
    FacilityTownMap towns;
    for (const auto& [key, count] : flows.entries) towns[key.second] = key.second;
    return towns;
}

Partition plurality_assign(const FlowTable& flows, const Hpdn& g,
                           const FacilityTownMap& town_map) {
    // town inflow totals, used as the first tie-break
    std::map<std::string, std::int64_t> town_inflow;
    // per patient ZCTA: discharges by town
    std::map<std::string, std::map<std::string, std::int64_t>> patient_tally;
    for (const auto& [key, count] : flows.entries) {
        auto town_it = town_map.find(key.second);
        if (town_it == town_map.end()) {
            throw UnmappedFacilityError("facility ZCTA has no town: " + key.second);
        }
        town_inflow[town_it->second] += count;
        patient_tally[key.first][town_it->second] += count;
    }

    std::vector<std::string> chosen(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) {
        const std::string& zcta = g.label(i);
        auto tally_it = patient_tally.find(zcta);
        if (tally_it == patient_tally.end()) {
            // hosts a facility but has no resident discharges
            auto town_it = town_map.find(zcta);
            if (town_it == town_map.end()) {
                throw UnmappedFacilityError("facility ZCTA has no town: " + zcta);
            }
            chosen[i] = town_it->second;
            continue;
        }
        const std::string* best = nullptr;
        std::int64_t best_count = -1;
        for (const auto& [town, count] : tally_it->second) {
            bool better = count > best_count;
            if (count == best_count) {
                const std::int64_t in_new = town_inflow[town];
                const std::int64_t in_old = town_inflow[*best];
                better = in_new > in_old || (in_new == in_old && town < *best);
            }
            if (better) {
                best = &town;
                best_count = count;
            }
        }
        chosen[i] = *best;
    }

    // community ids in lexicographic town order
    std::map<std::string, int> town_rank;
    for (const auto& town : chosen) town_rank.emplace(town, 0);
    int rank = 0;
    for (auto& [town, id] : town_rank) id = rank++;
    std::vector<int> assignment(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) assignment[i] = town_rank[chosen[i]];
    return Partition::from_contiguous(std::move(assignment), rank);
}

EnclaveFixResult enclave_fix(const Partition& p, const Hpdn& g,
                             const ZctaAdjacency& adjacency) {
    require_covers(g, p, "enclave_fix");

    // resolve adjacency to node indices once
    std::vector<std::vector<int>> geo(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) {
        auto it = adjacency.find(g.label(i));
        if (it == adjacency.end()) {
            throw MissingAdjacencyError("no adjacency entry for ZCTA " + g.label(i));
        }
        for (const auto& nbr : it->second) {
            const int j = g.index_of(nbr);
            if (j >= 0 && j != i) geo[i].push_back(j);
        }
    }

    std::vector<int> assignment = p.assignment();
    EnclaveFixResult result;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < g.node_count(); ++i) {
            if (geo[i].empty()) continue;
            const int target = assignment[geo[i].front()];
            if (target == assignment[i]) continue;
            bool unanimous = true;
            for (int j : geo[i]) {
                if (assignment[j] != target) {
                    unanimous = false;
                    break;
                }
            }
            if (unanimous) {
                assignment[i] = target;
                ++result.moves;
                changed = true;
            }
        }
        if (changed) ++result.passes;
    }

    // moves may have emptied communities; recompact preserving id order
    std::vector<int> remap(p.community_count(), -1);
    int next = 0;
    for (int c : assignment) {
        if (remap[c] < 0) remap[c] = 1;
    }
    for (int c = 0; c < p.community_count(); ++c) {
        if (remap[c] > 0) remap[c] = next++;
    }
    for (int& c : assignment) c = remap[c];
    result.partition = Partition::from_contiguous(std::move(assignment), next);
    return result;
}

} // namespace hsadet
