#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsadet/baseline.hpp"
#include "hsadet/graph.hpp"
#include "hsadet/ingest.hpp"
#include "hsadet/partition.hpp"

namespace hsadet {

// Edge list TSV: zcta_a<TAB>zcta_b<TAB>weight, lexicographically sorted with
// zcta_a <= zcta_b. Integral weights print without a decimal point so golden
// files are bit-exact.
void write_edge_tsv(const Hpdn& g, const std::filesystem::path& path);
Hpdn read_edge_tsv(const std::filesystem::path& path);

// Flow CSV: header patient_zcta,facility_zcta,count; rows sorted.
void write_flow_csv(const FlowTable& flows, const std::filesystem::path& path);
FlowTable read_flow_csv(const std::filesystem::path& path);

// Partition CSV: header zcta,community_id; rows sorted by zcta.
void write_partition_csv(const Hpdn& g, const Partition& p,
                         const std::filesystem::path& path);
// Resolves labels against g; throws PartitionMismatchError naming any node of
// g missing from the file or any file label missing from g.
Partition read_partition_csv(const Hpdn& g, const std::filesystem::path& path);

// Crosswalk CSV: two 5-digit columns zip,zcta; an optional header row is
// detected and skipped. Malformed rows throw IoError.
Crosswalk read_crosswalk_csv(const std::filesystem::path& path);

// Town map CSV: facility_zcta,town.
FacilityTownMap read_town_map_csv(const std::filesystem::path& path);

// Adjacency CSV: zcta_a,zcta_b; symmetric closure applied on load.
ZctaAdjacency read_adjacency_csv(const std::filesystem::path& path);

std::string format_weight(double w);

} // namespace hsadet
