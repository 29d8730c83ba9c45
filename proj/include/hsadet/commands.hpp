#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hsadet/detect.hpp"
#include "hsadet/geojson.hpp"
#include "hsadet/ingest.hpp"

namespace hsadet {

inline constexpr const char* kToolVersion = "0.1.0";

// Each subcommand is a library function over a parsed option struct, so the
// CLI and the test harness drive the exact same code paths. Outputs are
// deterministic byte-for-byte for fixed inputs and seeds; wall-clock timings
// are only written when `timings` is set.

struct BuildOptions {
    std::filesystem::path discharges;
    std::filesystem::path crosswalk;
    DischargeType discharge_type{};
    int year = 0;
    UnmappedPolicy unmapped_policy = UnmappedPolicy::Identity;
    ColumnMap columns;
    std::filesystem::path out_dir;
    int threads = 1;
};

struct DetectOptions {
    std::filesystem::path edges;
    std::vector<Algorithm> algorithms; // empty means all four
    DetectConfig config;
    std::filesystem::path out_dir;
    int threads = 1;
    bool timings = false;
};

struct EvaluateOptions {
    std::filesystem::path flows;
    std::filesystem::path edges;
    std::filesystem::path partition;
    int bootstrap_b = 1000;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    // Optional metadata echoed into the report for downstream comparison.
    std::optional<std::string> algorithm;
    std::optional<int> year;
    std::optional<std::string> discharge_type;
};

struct CompareOptions {
    std::vector<std::filesystem::path> reports;
    std::filesystem::path out_csv;
    std::filesystem::path out_text; // empty -> stdout
};

struct ExportGeojsonOptions {
    std::filesystem::path partition;
    std::filesystem::path boundaries;
    std::filesystem::path out;
    GeojsonExportOptions geometry;
};

struct SynthOptions {
    int communities = 4;
    std::vector<int> sizes; // empty -> uniform `size`
    int size = 16;
    double internal_mean = 50.0;
    double external_mean = 1.0;
    double hub_fraction = 0.25;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
};

struct StatsOptions2 {
    std::filesystem::path edges;
    bool weighted_clustering = false;
    std::filesystem::path out; // empty -> stdout
    int threads = 1;
};

void run_build(const BuildOptions& options);
void run_stats(const StatsOptions2& options);
void run_detect(const DetectOptions& options);
void run_evaluate(const EvaluateOptions& options);
void run_compare(const CompareOptions& options);
void run_export_geojson(const ExportGeojsonOptions& options);
void run_synth(const SynthOptions& options);

} // namespace hsadet
