#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsadet/partition.hpp"

namespace hsadet {

struct GeojsonExportOptions {
    // Feature property naming the ZCTA; when empty, common property names
    // (zcta, ZCTA5CE10, ZCTA5CE20, GEOID) are probed.
    std::string zcta_property;
    // Coordinates are snapped to this grid before shared-edge matching.
    double snap_tolerance = 1e-9;
};

struct GeojsonExportStats {
    int communities_written = 0;
    std::vector<std::string> missing_zctas; // in the partition, not in the boundary file
};

// Dissolves member ZCTA polygons of each community into one feature by
// cancelling shared boundary segments. Throws BoundaryFileError on a
// malformed file or when no partition ZCTA has a boundary.
GeojsonExportStats export_geojson(
    const std::vector<std::pair<std::string, int>>& zcta_to_community,
    const std::filesystem::path& boundaries_path,
    const std::filesystem::path& out_path,
    const GeojsonExportOptions& options = {});

} // namespace hsadet
