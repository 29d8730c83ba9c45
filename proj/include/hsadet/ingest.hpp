#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsadet/graph.hpp"

namespace hsadet {

enum class DischargeType {
    InpatientFromED,
    Inpatient,
    AmbulatorySurgery,
    EDOnly,
};

std::string to_string(DischargeType t);

// Parses user-facing spellings such as "ED Only" or "inpatient-from-ed";
// matching ignores case and non-alphanumeric characters.
std::optional<DischargeType> parse_discharge_type(const std::string& raw);

struct DischargeRecord {
    DischargeType discharge_type{};
    int year = 0;
    std::string facility_name;
    std::string facility_zip;
    std::string patient_zip; // raw, may be a non-ZIP token such as HOMELESS
    std::int64_t count = 0;
};

// Names of the discharge CSV columns. facility_name may be left empty; the
// other five are required. CHHS releases rename columns between years, so
// this is configuration rather than a fixed header.
struct ColumnMap {
    std::string type = "type";
    std::string year = "year";
    std::string facility_name = "facility_name";
    std::string facility_zip = "facility_zip";
    std::string patient_zip = "patient_zip";
    std::string count = "count";
};

struct RejectedRow {
    std::size_t row_number = 0; // 1-based, header is row 1
    std::string reason;
    std::string raw;
};

struct ParseResult {
    std::vector<DischargeRecord> records;
    std::vector<RejectedRow> rejected;
};

// Reads a header row then one DischargeRecord per data row. Rows with an
// unparsable count/year/type or an empty required field are collected in
// `rejected` with their row numbers. Throws MissingColumnError if the header
// lacks a required mapped column.
ParseResult parse_discharges(std::istream& csv_stream, const ColumnMap& columns);

struct ExcludedRecord {
    DischargeRecord record;
    std::string reason; // the raw token that failed, e.g. "HOMELESS"
    bool facility_side = false;
};

struct FilterResult {
    std::vector<DischargeRecord> kept;
    std::vector<ExcludedRecord> excluded;
    std::int64_t excluded_patient_side = 0; // discharge counts, not rows
    std::int64_t excluded_facility_side = 0;
};

// Keeps only records whose patient ZIP is exactly 5 ASCII digits. The same
// rule is applied to facility ZIPs, with both exclusion tallies reported.
FilterResult filter_records(const std::vector<DischargeRecord>& records);

// ZIP -> ZCTA, both exactly 5 digits. Lookup of an absent ZIP is an explicit
// miss, never a silent pass-through.
class Crosswalk {
public:
    void add(const std::string& zip, const std::string& zcta);
    std::optional<std::string> lookup(const std::string& zip) const;
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::string, std::string> map_;
};

enum class UnmappedPolicy {
    Drop,     // remove the record and log it
    Identity, // keep the ZIP as its own ZCTA
};

struct CrosswalkResult {
    std::vector<DischargeRecord> records; // ZIP fields now hold ZCTAs
    std::vector<ExcludedRecord> dropped;  // only under the drop policy
    std::int64_t dropped_records = 0;
    std::int64_t dropped_discharges = 0;
    std::vector<std::string> unmapped_zips; // distinct, sorted
};

CrosswalkResult apply_crosswalk(const std::vector<DischargeRecord>& records,
                                const Crosswalk& crosswalk, UnmappedPolicy policy);

// Directed aggregated discharge counts keyed by (patient ZCTA, facility ZCTA).
struct FlowTable {
    DischargeType discharge_type{};
    int year = 0;
    std::map<std::pair<std::string, std::string>, std::int64_t> entries;
    std::int64_t excluded_count = 0;
    double excluded_fraction = 0.0;

    std::int64_t total() const;
};

// Sums counts over records matching (type, year); zero-count entries are not
// stored. `excluded` supplies the records dropped upstream (filtering or
// crosswalk policy) so the table can report its exclusion fraction; only
// entries matching (type, year) are counted. Throws EmptySelectionError if
// the selection produces no entries.
FlowTable aggregate_flows(const std::vector<DischargeRecord>& records,
                          DischargeType discharge_type, int year,
                          const std::vector<ExcludedRecord>& excluded = {});

// Symmetrizes a flow table into a weighted undirected graph: W_ij =
// entries[(i,j)] + entries[(j,i)], within-ZCTA flows become self-loops.
Hpdn build_hpdn(const FlowTable& flows);

} // namespace hsadet
