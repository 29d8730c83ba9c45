#include "hsadet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hsadet/csv.hpp"
#include "hsadet/errors.hpp"

namespace hsadet {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

double parse_weight(const std::string& s, const std::filesystem::path& path) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(path.string() + ": bad weight '" + s + "'");
    }
    return value;
}

std::int64_t parse_count(const std::string& s, const std::filesystem::path& path) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(path.string() + ": bad count '" + s + "'");
    }
    return value;
}

} // namespace

std::string format_weight(double w) {
    if (std::floor(w) == w && std::abs(w) < 9.0e15) {
        return std::to_string(static_cast<std::int64_t>(w));
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    return std::string(buf, ptr);
}

void write_edge_tsv(const Hpdn& g, const std::filesystem::path& path) {
    auto out = open_output(path);
    // labels are sorted, so walking nodes in index order and keeping
    // neighbor >= self emits rows in lexicographic order
    for (int i = 0; i < g.node_count(); ++i) {
        if (g.loop_weight(i) > 0.0) {
            out << g.label(i) << '\t' << g.label(i) << '\t'
                << format_weight(g.loop_weight(i)) << '\n';
        }
        for (const auto& e : g.neighbors(i)) {
            if (e.neighbor > i) {
                out << g.label(i) << '\t' << g.label(e.neighbor) << '\t'
                    << format_weight(e.weight) << '\n';
            }
        }
    }
}

Hpdn read_edge_tsv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<std::tuple<std::string, std::string, double>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, w;
        if (!std::getline(row, a, '\t') || !std::getline(row, b, '\t') ||
            !std::getline(row, w, '\t')) {
            throw IoError(path.string() + ":" + std::to_string(line_no) +
                          ": expected zcta_a<TAB>zcta_b<TAB>weight");
        }
        edges.emplace_back(a, b, parse_weight(w, path));
    }
    if (edges.empty()) throw IoError(path.string() + ": no edges");
    return Hpdn::from_edges(edges);
}

void write_flow_csv(const FlowTable& flows, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "patient_zcta,facility_zcta,count\n";
    for (const auto& [key, count] : flows.entries) {
        out << key.first << ',' << key.second << ',' << count << '\n';
    }
}

FlowTable read_flow_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    FlowTable flows;
    std::vector<std::string> row;
    std::size_t row_no = 0;
    while (read_csv_row(in, row)) {
        ++row_no;
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row_no == 1 && !row.empty() && trim(row[0]) == "patient_zcta") continue;
        if (row.size() != 3) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": expected patient_zcta,facility_zcta,count");
        }
        const std::int64_t count = parse_count(trim(row[2]), path);
        if (count <= 0) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": counts must be positive");
        }
        flows.entries[{trim(row[0]), trim(row[1])}] += count;
    }
    if (flows.entries.empty()) throw IoError(path.string() + ": no flow entries");
    return flows;
}

void write_partition_csv(const Hpdn& g, const Partition& p,
                         const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "zcta,community_id\n";
    for (int i = 0; i < g.node_count(); ++i) {
        out << g.label(i) << ',' << p.community_of(i) << '\n';
    }
}

Partition read_partition_csv(const Hpdn& g, const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<int> raw(g.node_count(), -1);
    std::vector<std::string> row;
    std::size_t row_no = 0;
    while (read_csv_row(in, row)) {
        ++row_no;
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row_no == 1 && !row.empty() && trim(row[0]) == "zcta") continue;
        if (row.size() != 2) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": expected zcta,community_id");
        }
        const std::string zcta = trim(row[0]);
        const int i = g.index_of(zcta);
        if (i < 0) {
            throw PartitionMismatchError("partition lists ZCTA absent from the graph: " +
                                         zcta);
        }
        raw[i] = static_cast<int>(parse_count(trim(row[1]), path));
    }
    for (int i = 0; i < g.node_count(); ++i) {
        if (raw[i] < 0) {
            throw PartitionMismatchError("partition is missing ZCTA " + g.label(i));
        }
    }
    return Partition(std::move(raw));
}

Crosswalk read_crosswalk_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    Crosswalk cw;
    std::vector<std::string> row;
    std::size_t row_no = 0;
    while (read_csv_row(in, row)) {
        ++row_no;
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != 2) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": expected zip,zcta");
        }
        const std::string zip = trim(row[0]);
        const std::string zcta = trim(row[1]);
        if (row_no == 1 && !is_five_digits(zip)) continue; // header
        if (!is_five_digits(zip) || !is_five_digits(zcta)) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": entries must be 5-digit codes");
        }
        cw.add(zip, zcta);
    }
    return cw;
}

FacilityTownMap read_town_map_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    FacilityTownMap towns;
    std::vector<std::string> row;
    std::size_t row_no = 0;
    while (read_csv_row(in, row)) {
        ++row_no;
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != 2) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": expected facility_zcta,town");
        }
        const std::string zcta = trim(row[0]);
        if (row_no == 1 && !is_five_digits(zcta)) continue; // header
        towns[zcta] = trim(row[1]);
    }
    return towns;
}

ZctaAdjacency read_adjacency_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    ZctaAdjacency adj;
    std::vector<std::string> row;
    std::size_t row_no = 0;
    while (read_csv_row(in, row)) {
        ++row_no;
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != 2) {
            throw IoError(path.string() + ":" + std::to_string(row_no) +
                          ": expected zcta_a,zcta_b");
        }
        const std::string a = trim(row[0]);
        const std::string b = trim(row[1]);
        if (row_no == 1 && !is_five_digits(a)) continue; // header
        adj[a].insert(b);
        adj[b].insert(a);
    }
    return adj;
}

} // namespace hsadet
