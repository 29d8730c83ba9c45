#include "hsadet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "hsadet/csv.hpp"
#include "hsadet/errors.hpp"

namespace hsadet {

std::string to_string(DischargeType t) {
    switch (t) {
    case DischargeType::InpatientFromED: return "Inpatient from ED";
    case DischargeType::Inpatient: return "Inpatient";
    case DischargeType::AmbulatorySurgery: return "Ambulatory Surgery";
    case DischargeType::EDOnly: return "ED Only";
    }
    return "?";
}

namespace {

std::string canon(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

std::optional<std::int64_t> parse_int(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

} // namespace

std::optional<DischargeType> parse_discharge_type(const std::string& raw) {
    const std::string c = canon(raw);
    if (c == "inpatientfromed") return DischargeType::InpatientFromED;
    if (c == "inpatient") return DischargeType::Inpatient;
    if (c == "ambulatorysurgery") return DischargeType::AmbulatorySurgery;
    if (c == "edonly") return DischargeType::EDOnly;
    return std::nullopt;
}

ParseResult parse_discharges(std::istream& csv_stream, const ColumnMap& columns) {
    std::vector<std::string> header;
    if (!read_csv_row(csv_stream, header)) {
        throw MissingColumnError("discharge CSV is empty; expected a header row");
    }

    auto find_column = [&](const std::string& name, bool required) -> int {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return static_cast<int>(i);
        }
        if (required) {
            throw MissingColumnError("discharge CSV header has no column named '" + name + "'");
        }
        return -1;
    };

    const int col_type = find_column(columns.type, true);
    const int col_year = find_column(columns.year, true);
    const int col_facility =
        columns.facility_name.empty() ? -1 : find_column(columns.facility_name, false);
    const int col_facility_zip = find_column(columns.facility_zip, true);
    const int col_patient_zip = find_column(columns.patient_zip, true);
    const int col_count = find_column(columns.count, true);

    ParseResult result;
    std::vector<std::string> row;
    std::size_t row_number = 1;
    while (read_csv_row(csv_stream, row)) {
        ++row_number;
        if (row.size() == 1 && trim(row[0]).empty()) continue;

        auto cell = [&](int col) -> std::string {
            return col >= 0 && col < static_cast<int>(row.size()) ? trim(row[col]) : "";
        };
        auto reject = [&](const std::string& reason) {
            std::ostringstream raw;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) raw << ',';
                raw << row[i];
            }
            result.rejected.push_back({row_number, reason, raw.str()});
        };

        const auto type = parse_discharge_type(cell(col_type));
        if (!type) {
            reject("unrecognized discharge type '" + cell(col_type) + "'");
            continue;
        }
        const auto year = parse_int(cell(col_year));
        if (!year) {
            reject("bad year '" + cell(col_year) + "'");
            continue;
        }
        const auto count = parse_int(cell(col_count));
        if (!count || *count < 0) {
            reject("bad count '" + cell(col_count) + "'");
            continue;
        }
        const std::string facility_zip = cell(col_facility_zip);
        const std::string patient_zip = cell(col_patient_zip);
        if (facility_zip.empty() || patient_zip.empty()) {
            reject("empty ZIP field");
            continue;
        }

        DischargeRecord rec;
        rec.discharge_type = *type;
        rec.year = static_cast<int>(*year);
        rec.facility_name = cell(col_facility);
        rec.facility_zip = facility_zip;
        rec.patient_zip = patient_zip;
        rec.count = *count;
        result.records.push_back(std::move(rec));
    }
    return result;
}

FilterResult filter_records(const std::vector<DischargeRecord>& records) {
    FilterResult result;
    for (const auto& rec : records) {
        if (!is_five_digits(rec.patient_zip)) {
            result.excluded.push_back({rec, rec.patient_zip, false});
            result.excluded_patient_side += rec.count;
        } else if (!is_five_digits(rec.facility_zip)) {
            result.excluded.push_back({rec, rec.facility_zip, true});
            result.excluded_facility_side += rec.count;
        } else {
            result.kept.push_back(rec);
        }
    }
    return result;
}

void Crosswalk::add(const std::string& zip, const std::string& zcta) {
    if (!is_five_digits(zip) || !is_five_digits(zcta)) {
        throw InvalidConfigError("crosswalk entries must be 5-digit: " + zip + "," + zcta);
    }
    map_[zip] = zcta;
}

std::optional<std::string> Crosswalk::lookup(const std::string& zip) const {
    auto it = map_.find(zip);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

CrosswalkResult apply_crosswalk(const std::vector<DischargeRecord>& records,
                                const Crosswalk& crosswalk, UnmappedPolicy policy) {
    CrosswalkResult result;
    std::set<std::string> missing;
    for (const auto& rec : records) {
        const auto patient = crosswalk.lookup(rec.patient_zip);
        const auto facility = crosswalk.lookup(rec.facility_zip);
        if (!patient) missing.insert(rec.patient_zip);
        if (!facility) missing.insert(rec.facility_zip);
        if (policy == UnmappedPolicy::Drop && (!patient || !facility)) {
            ++result.dropped_records;
            result.dropped_discharges += rec.count;
            result.dropped.push_back(
                {rec, !patient ? rec.patient_zip : rec.facility_zip, !facility});
            continue;
        }
        DischargeRecord mapped = rec;
        mapped.patient_zip = patient.value_or(rec.patient_zip);
        mapped.facility_zip = facility.value_or(rec.facility_zip);
        result.records.push_back(std::move(mapped));
    }
    result.unmapped_zips.assign(missing.begin(), missing.end());
    return result;
}

std::int64_t FlowTable::total() const {
    std::int64_t sum = 0;
    for (const auto& [key, count] : entries) sum += count;
    return sum;
}

FlowTable aggregate_flows(const std::vector<DischargeRecord>& records,
                          DischargeType discharge_type, int year,
                          const std::vector<ExcludedRecord>& excluded) {
    FlowTable table;
    table.discharge_type = discharge_type;
    table.year = year;
    bool matched = false;
    for (const auto& rec : records) {
        if (rec.discharge_type != discharge_type || rec.year != year) continue;
        matched = true;
        if (rec.count == 0) continue;
        table.entries[{rec.patient_zip, rec.facility_zip}] += rec.count;
    }
    if (!matched || table.entries.empty()) {
        throw EmptySelectionError("no discharges for type '" + to_string(discharge_type) +
                                  "' in year " + std::to_string(year));
    }
    for (const auto& ex : excluded) {
        if (ex.record.discharge_type == discharge_type && ex.record.year == year) {
            table.excluded_count += ex.record.count;
        }
    }
    table.excluded_fraction =
        static_cast<double>(table.excluded_count) /
        static_cast<double>(table.excluded_count + table.total());
    return table;
}

Hpdn build_hpdn(const FlowTable& flows) {
    std::vector<std::tuple<std::string, std::string, double>> edges;
    edges.reserve(flows.entries.size());
    for (const auto& [key, count] : flows.entries) {
        edges.emplace_back(key.first, key.second, static_cast<double>(count));
    }
    return Hpdn::from_edges(edges);
}

} // namespace hsadet
