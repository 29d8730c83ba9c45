#include "hsadet/geojson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "hsadet/errors.hpp"

namespace hsadet {

namespace {

using nlohmann::json;

using Coord = std::pair<std::int64_t, std::int64_t>;
using Ring = std::vector<Coord>;

struct Dissolver {
    double tol;

    Coord snap(double x, double y) const {
        return {static_cast<std::int64_t>(std::llround(x / tol)),
                static_cast<std::int64_t>(std::llround(y / tol))};
    }

    double unsnap(std::int64_t v) const { return static_cast<double>(v) * tol; }

    // net directed segment counts; a shared boundary traversed from both
    // sides cancels exactly
    std::map<std::pair<Coord, Coord>, int> segments;

    void add_ring(const json& ring_json) {
        Ring ring;
        for (const auto& pt : ring_json) {
            if (!pt.is_array() || pt.size() < 2) {
                throw BoundaryFileError("ring vertex is not an [x, y] pair");
            }
            ring.push_back(snap(pt[0].get<double>(), pt[1].get<double>()));
        }
        if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
        if (ring.size() < 3) throw BoundaryFileError("ring has fewer than 3 vertices");
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Coord a = ring[i];
            const Coord b = ring[(i + 1) % ring.size()];
            if (a == b) continue;
            auto rev = segments.find({b, a});
            if (rev != segments.end() && rev->second > 0) {
                if (--rev->second == 0) segments.erase(rev);
            } else {
                ++segments[{a, b}];
            }
        }
    }

    // stitch surviving segments into closed rings
    std::vector<Ring> rings() {
        std::multimap<Coord, Coord> next;
        for (const auto& [seg, count] : segments) {
            for (int k = 0; k < count; ++k) next.emplace(seg.first, seg.second);
        }
        std::vector<Ring> out;
        while (!next.empty()) {
            Ring ring;
            const Coord start = next.begin()->first;
            Coord at = start;
            do {
                auto it = next.find(at);
                if (it == next.end()) {
                    throw BoundaryFileError(
                        "boundary segments do not close into rings; check the snap "
                        "tolerance");
                }
                ring.push_back(at);
                const Coord to = it->second;
                next.erase(it);
                at = to;
            } while (at != start);
            out.push_back(std::move(ring));
        }
        return out;
    }
};

double signed_area(const Ring& ring, const Dissolver& d) {
    double area = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto& a = ring[i];
        const auto& b = ring[(i + 1) % ring.size()];
        area += d.unsnap(a.first) * d.unsnap(b.second) -
                d.unsnap(b.first) * d.unsnap(a.second);
    }
    return area / 2.0;
}

bool point_in_ring(const Coord& p, const Ring& ring) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const auto& a = ring[i];
        const auto& b = ring[j];
        if ((a.second > p.second) != (b.second > p.second)) {
            const double x = static_cast<double>(b.first - a.first) *
                                 static_cast<double>(p.second - a.second) /
                                 static_cast<double>(b.second - a.second) +
                             static_cast<double>(a.first);
            if (static_cast<double>(p.first) < x) inside = !inside;
        }
    }
    return inside;
}

json ring_to_json(const Ring& ring, const Dissolver& d, bool reverse) {
    json out = json::array();
    auto push = [&](const Coord& c) {
        out.push_back(json::array({d.unsnap(c.first), d.unsnap(c.second)}));
    };
    if (reverse) {
        for (auto it = ring.rbegin(); it != ring.rend(); ++it) push(*it);
        push(ring.back());
    } else {
        for (const auto& c : ring) push(c);
        push(ring.front());
    }
    return out;
}

const json* find_geometry(const json& feature) {
    auto it = feature.find("geometry");
    if (it == feature.end() || !it->is_object()) return nullptr;
    return &*it;
}

std::string zcta_of_feature(const json& feature, const std::string& configured) {
    auto props = feature.find("properties");
    if (props == feature.end() || !props->is_object()) return "";
    auto get = [&](const std::string& name) -> std::string {
        auto it = props->find(name);
        if (it == props->end()) return "";
        if (it->is_string()) return it->get<std::string>();
        if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
        return "";
    };
    if (!configured.empty()) return get(configured);
    for (const char* name : {"zcta", "ZCTA5CE10", "ZCTA5CE20", "GEOID10", "GEOID"}) {
        std::string v = get(name);
        if (!v.empty()) return v;
    }
    return "";
}

} // namespace

GeojsonExportStats export_geojson(
    const std::vector<std::pair<std::string, int>>& zcta_to_community,
    const std::filesystem::path& boundaries_path, const std::filesystem::path& out_path,
    const GeojsonExportOptions& options) {
    std::ifstream in(boundaries_path);
    if (!in) throw BoundaryFileError("cannot open " + boundaries_path.string());
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw BoundaryFileError(boundaries_path.string() + ": " + e.what());
    }
    if (!root.is_object() || root.value("type", "") != "FeatureCollection" ||
        !root.contains("features") || !root["features"].is_array()) {
        throw BoundaryFileError(boundaries_path.string() +
                                ": expected a GeoJSON FeatureCollection");
    }

    std::map<std::string, const json*> boundary_of;
    for (const auto& feature : root["features"]) {
        const std::string z = zcta_of_feature(feature, options.zcta_property);
        if (!z.empty()) boundary_of[z] = &feature;
    }

    std::map<int, std::vector<std::string>> members;
    GeojsonExportStats stats;
    for (const auto& [zcta, community] : zcta_to_community) {
        if (boundary_of.count(zcta)) {
            members[community].push_back(zcta);
        } else {
            stats.missing_zctas.push_back(zcta);
        }
    }
    std::sort(stats.missing_zctas.begin(), stats.missing_zctas.end());
    if (members.empty()) {
        throw BoundaryFileError("no partition ZCTA has a boundary in " +
                                boundaries_path.string());
    }

    json features = json::array();
    for (auto& [community, zctas] : members) {
        std::sort(zctas.begin(), zctas.end());
        Dissolver d{options.snap_tolerance <= 0.0 ? 1e-9 : options.snap_tolerance, {}};
        for (const auto& zcta : zctas) {
            const json* geom = find_geometry(*boundary_of[zcta]);
            if (!geom) throw BoundaryFileError("feature for " + zcta + " has no geometry");
            const std::string type = geom->value("type", "");
            const auto coords = geom->find("coordinates");
            if (coords == geom->end()) {
                throw BoundaryFileError("feature for " + zcta + " has no coordinates");
            }
            if (type == "Polygon") {
                for (const auto& ring : *coords) d.add_ring(ring);
            } else if (type == "MultiPolygon") {
                for (const auto& poly : *coords) {
                    for (const auto& ring : poly) d.add_ring(ring);
                }
            } else {
                throw BoundaryFileError("feature for " + zcta +
                                        " has unsupported geometry type '" + type + "'");
            }
        }

        std::vector<Ring> rings = d.rings();
        std::vector<std::size_t> outers;
        std::vector<std::size_t> holes;
        for (std::size_t i = 0; i < rings.size(); ++i) {
            (signed_area(rings[i], d) >= 0.0 ? outers : holes).push_back(i);
        }
        // MultiPolygon: one polygon per outer ring, holes nested inside it
        json polygons = json::array();
        std::vector<json> polys(outers.size());
        for (std::size_t k = 0; k < outers.size(); ++k) {
            polys[k] = json::array({ring_to_json(rings[outers[k]], d, false)});
        }
        for (std::size_t h : holes) {
            for (std::size_t k = 0; k < outers.size(); ++k) {
                if (point_in_ring(rings[h].front(), rings[outers[k]])) {
                    polys[k].push_back(ring_to_json(rings[h], d, false));
                    break;
                }
            }
        }
        for (auto& p : polys) polygons.push_back(std::move(p));

        json feature;
        feature["type"] = "Feature";
        feature["properties"] = {{"community_id", community},
                                 {"n_zctas", zctas.size()},
                                 {"members", zctas}};
        feature["geometry"] = {{"type", "MultiPolygon"}, {"coordinates", polygons}};
        features.push_back(std::move(feature));
        ++stats.communities_written;
    }

    json out;
    out["type"] = "FeatureCollection";
    out["features"] = std::move(features);
    if (out_path.has_parent_path()) {
        std::filesystem::create_directories(out_path.parent_path());
    }
    std::ofstream os(out_path);
    if (!os) throw IoError("cannot write " + out_path.string());
    os << out.dump(2) << '\n';
    return stats;
}

} // namespace hsadet
