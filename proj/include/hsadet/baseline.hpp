#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hsadet/graph.hpp"
#include "hsadet/ingest.hpp"
#include "hsadet/partition.hpp"

namespace hsadet {

// facility ZCTA -> town id. Every facility ZCTA present in the flow table
// must be mapped.
using FacilityTownMap = std::map<std::string, std::string>;

// Geographic neighborhood, symmetric by construction of the loader.
using ZctaAdjacency = std::map<std::string, std::set<std::string>>;

// Plurality-of-discharges town assignment over the node set of g: each
// patient ZCTA goes to the town receiving most of its discharges (ties broken
// toward the town with larger total inflow, then lexicographically smaller
// town). ZCTAs that only host facilities take their own facility's town.
// Community ids follow lexicographic town order. Throws UnmappedFacilityError.
Partition plurality_assign(const FlowTable& flows, const Hpdn& g,
                           const FacilityTownMap& town_map);

// Treats each facility ZCTA as its own town, for data-free runs.
FacilityTownMap degenerate_town_map(const FlowTable& flows);

struct EnclaveFixResult {
    Partition partition;
    int passes = 0;   // full passes until fixpoint
    int moves = 0;
};

// Reassigns every ZCTA whose geographic neighbors all belong to one other
// community, repeating until a full pass changes nothing. Moves apply
// immediately in label order, which guarantees termination. Throws
// MissingAdjacencyError if a node of g lacks an adjacency entry.
EnclaveFixResult enclave_fix(const Partition& p, const Hpdn& g,
                             const ZctaAdjacency& adjacency);

} // namespace hsadet
