#include "hsadet/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "hsadet/baseline.hpp"
#include "hsadet/errors.hpp"
#include "hsadet/evaluate.hpp"
#include "hsadet/io.hpp"
#include "hsadet/objectives.hpp"
#include "hsadet/rng.hpp"
#include "hsadet/synth.hpp"

namespace hsadet {

namespace {

using nlohmann::ordered_json;

void write_json(const ordered_json& j, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    ordered_json options) {
    ordered_json manifest;
    manifest["tool"] = "hsadet";
    manifest["version"] = kToolVersion;
    manifest["command"] = command;
    manifest["options"] = std::move(options);
    write_json(manifest, out_dir / "manifest.json");
}

ordered_json stats_json(const NetworkStats& s) {
    ordered_json j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["w"] = s.w;
    j["rho"] = s.rho;
    j["l"] = s.l;
    j["c"] = s.c;
    j["components"] = s.components;
    return j;
}

void write_partition_labels(const std::vector<std::string>& labels, const Partition& p,
                            const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "zcta,community_id\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << labels[i] << ',' << p.community_of(static_cast<int>(i)) << '\n';
    }
}

} // namespace

void run_build(const BuildOptions& options) {
    std::ifstream in(options.discharges);
    if (!in) throw IoError("cannot open " + options.discharges.string());
    ParseResult parsed = parse_discharges(in, options.columns);
    for (const auto& r : parsed.rejected) {
        std::cerr << "build: rejected row " << r.row_number << ": " << r.reason << '\n';
    }

    FilterResult filtered = filter_records(parsed.records);
    Crosswalk crosswalk = read_crosswalk_csv(options.crosswalk);
    CrosswalkResult mapped =
        apply_crosswalk(filtered.kept, crosswalk, options.unmapped_policy);
    if (!mapped.unmapped_zips.empty()) {
        std::cerr << "build: " << mapped.unmapped_zips.size()
                  << " distinct ZIPs missing from the crosswalk";
        if (options.unmapped_policy == UnmappedPolicy::Drop) {
            std::cerr << "; dropped " << mapped.dropped_records << " records ("
                      << mapped.dropped_discharges << " discharges)";
        }
        std::cerr << '\n';
    }

    std::vector<ExcludedRecord> excluded = filtered.excluded;
    for (const auto& d : mapped.dropped) excluded.push_back(d);

    FlowTable flows =
        aggregate_flows(mapped.records, options.discharge_type, options.year, excluded);
    Hpdn g = build_hpdn(flows);
    NetworkStats s = stats(g, {.weighted_clustering = false, .threads = options.threads});

    write_flow_csv(flows, options.out_dir / "flows.csv");
    write_edge_tsv(g, options.out_dir / "edges.tsv");
    ordered_json sj = stats_json(s);
    sj["excluded_count"] = flows.excluded_count;
    sj["excluded_fraction"] = flows.excluded_fraction;
    write_json(sj, options.out_dir / "stats.json");

    ordered_json opt;
    opt["discharges"] = options.discharges.string();
    opt["crosswalk"] = options.crosswalk.string();
    opt["discharge_type"] = to_string(options.discharge_type);
    opt["year"] = options.year;
    opt["unmapped_policy"] =
        options.unmapped_policy == UnmappedPolicy::Drop ? "drop" : "identity";
    opt["columns"] = {{"type", options.columns.type},
                      {"year", options.columns.year},
                      {"facility_name", options.columns.facility_name},
                      {"facility_zip", options.columns.facility_zip},
                      {"patient_zip", options.columns.patient_zip},
                      {"count", options.columns.count}};
    write_manifest(options.out_dir, "build", std::move(opt));
}

void run_stats(const StatsOptions2& options) {
    Hpdn g = read_edge_tsv(options.edges);
    NetworkStats s = stats(
        g, {.weighted_clustering = options.weighted_clustering, .threads = options.threads});
    ordered_json j = stats_json(s);
    if (options.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        write_json(j, options.out);
    }
}

namespace {

struct DetectRun {
    Algorithm algorithm{};
    Partition partition;
    double seconds = 0.0;
};

DetectRun run_one_algorithm(const Hpdn& g, Algorithm algo, const DetectConfig& base) {
    DetectConfig config = base;
    config.algorithm = algo;
    // distinct stream per algorithm so batch runs stay independent
    config.seed = splitmix64(base.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<int>(algo) + 1)));
    const auto start = std::chrono::steady_clock::now();
    DetectRun run;
    run.algorithm = algo;
    run.partition = detect(g, config);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

} // namespace

void run_detect(const DetectOptions& options) {
    Hpdn g = read_edge_tsv(options.edges);
    std::vector<Algorithm> algos = options.algorithms;
    if (algos.empty()) {
        algos = {Algorithm::Louvain, Algorithm::Infomap, Algorithm::BlockModel,
                 Algorithm::Slpa};
    }

    std::vector<DetectRun> runs(algos.size());
    if (options.threads > 1 && algos.size() > 1) {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < algos.size(); ++k) {
            pool.emplace_back([&, k] { runs[k] = run_one_algorithm(g, algos[k], options.config); });
        }
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t k = 0; k < algos.size(); ++k) {
            runs[k] = run_one_algorithm(g, algos[k], options.config);
        }
    }

    for (const auto& run : runs) {
        const std::string name = to_string(run.algorithm);
        write_partition_csv(g, run.partition,
                            options.out_dir / ("partition_" + name + ".csv"));
        ordered_json j;
        j["algorithm"] = name;
        j["seed"] = options.config.seed;
        j["n_communities"] = run.partition.community_count();
        switch (run.algorithm) {
        case Algorithm::Louvain:
            j["objective_name"] = "modularity";
            j["objective"] = modularity(g, run.partition, options.config.louvain_resolution);
            break;
        case Algorithm::Infomap:
            j["objective_name"] = "map_equation_bits";
            j["objective"] = map_equation(g, run.partition);
            break;
        case Algorithm::BlockModel:
            j["objective_name"] = "description_length_nats";
            j["objective"] = sbm_description_length(g, run.partition);
            break;
        case Algorithm::Slpa:
            j["objective_name"] = nullptr;
            j["objective"] = nullptr;
            break;
        }
        if (options.timings) j["runtime_seconds"] = run.seconds;
        write_json(j, options.out_dir / ("objective_" + name + ".json"));
    }

    ordered_json opt;
    opt["edges"] = options.edges.string();
    ordered_json names = ordered_json::array();
    for (const auto& a : algos) names.push_back(to_string(a));
    opt["algorithms"] = names;
    opt["seed"] = options.config.seed;
    opt["slpa_iterations"] = options.config.slpa_iterations;
    opt["slpa_threshold"] = options.config.slpa_threshold;
    opt["louvain_resolution"] = options.config.louvain_resolution;
    opt["sbm_mcmc_sweeps"] = options.config.sbm_mcmc_sweeps;
    opt["restarts"] = options.config.restarts;
    write_manifest(options.out_dir, "detect", std::move(opt));
}

void run_evaluate(const EvaluateOptions& options) {
    FlowTable flows = read_flow_csv(options.flows);
    Hpdn g = read_edge_tsv(options.edges);
    Partition p = read_partition_csv(g, options.partition);
    DelineationReport report =
        evaluate_partition(flows, g, p, options.bootstrap_b, options.seed);

    ordered_json j;
    j["n_communities"] = report.n_communities;
    ordered_json per = ordered_json::array();
    for (const auto& m : report.per_community) {
        ordered_json cm;
        cm["community_id"] = m.community_id;
        cm["size"] = m.size;
        cm["discharges"] = m.discharges;
        if (m.li) cm["li"] = *m.li; else cm["li"] = nullptr;
        if (m.conductance) cm["conductance"] = *m.conductance; else cm["conductance"] = nullptr;
        per.push_back(std::move(cm));
    }
    j["per_community"] = std::move(per);
    j["li_mean"] = report.li.mean;
    j["li_std"] = report.li.std;
    j["conductance_mean"] = report.conductance.mean;
    j["conductance_std"] = report.conductance.std;
    j["discharges_mean"] = report.discharges.mean;
    j["discharges_std"] = report.discharges.std;
    j["undefined_li_count"] = report.undefined_li_count;
    j["undefined_conductance_count"] = report.undefined_conductance_count;
    j["seed"] = report.seed;
    j["B"] = report.bootstrap_b;
    if (options.algorithm) j["algorithm"] = *options.algorithm; else j["algorithm"] = nullptr;
    if (options.year) j["year"] = *options.year; else j["year"] = nullptr;
    if (options.discharge_type) j["discharge_type"] = *options.discharge_type;
    else j["discharge_type"] = nullptr;
    write_json(j, options.out);
}

namespace {

struct ReportRow {
    std::string discharge_type;
    std::string year;
    std::string algorithm;
    int n_c = 0;
    double li = 0.0;
    double c = 0.0;
    double d = 0.0;
};

ReportRow read_report_row(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const ordered_json::exception& e) {
        throw SchemaMismatchError(path.string() + ": " + e.what());
    }
    for (const char* key :
         {"n_communities", "li_mean", "conductance_mean", "discharges_mean"}) {
        if (!j.contains(key) || !j[key].is_number()) {
            throw SchemaMismatchError(path.string() + ": missing numeric field '" +
                                      key + "'");
        }
    }
    ReportRow row;
    row.n_c = j["n_communities"].get<int>();
    row.li = j["li_mean"].get<double>();
    row.c = j["conductance_mean"].get<double>();
    row.d = j["discharges_mean"].get<double>();
    if (j.contains("algorithm") && j["algorithm"].is_string()) {
        row.algorithm = j["algorithm"].get<std::string>();
    }
    if (j.contains("year") && j["year"].is_number_integer()) {
        row.year = std::to_string(j["year"].get<int>());
    }
    if (j.contains("discharge_type") && j["discharge_type"].is_string()) {
        row.discharge_type = j["discharge_type"].get<std::string>();
    }
    return row;
}

} // namespace

void run_compare(const CompareOptions& options) {
    if (options.reports.size() < 2) {
        throw InvalidConfigError("compare needs at least two report files");
    }
    std::vector<ReportRow> rows;
    for (const auto& path : options.reports) rows.push_back(read_report_row(path));

    if (!options.out_csv.empty()) {
        if (options.out_csv.has_parent_path()) {
            std::filesystem::create_directories(options.out_csv.parent_path());
        }
        std::ofstream csv(options.out_csv);
        if (!csv) throw IoError("cannot write " + options.out_csv.string());
        csv << "discharge_type,year,algorithm,n_c,li,c,d\n";
        for (const auto& r : rows) {
            csv << r.discharge_type << ',' << r.year << ',' << r.algorithm << ','
                << r.n_c << ',' << format_weight(r.li) << ',' << format_weight(r.c)
                << ',' << format_weight(r.d) << '\n';
        }
    }

    std::ostream* text = &std::cout;
    std::ofstream text_file;
    if (!options.out_text.empty()) {
        text_file.open(options.out_text);
        if (!text_file) throw IoError("cannot write " + options.out_text.string());
        text = &text_file;
    }
    char line[256];
    std::snprintf(line, sizeof(line), "%-18s %-6s %-12s %6s %8s %8s %12s", "type",
                  "year", "algorithm", "n_c", "<li>", "<c>", "<d>");
    *text << line << '\n';
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-18s %-6s %-12s %6d %8.2f %8.2f %12.0f",
                      r.discharge_type.c_str(), r.year.c_str(), r.algorithm.c_str(),
                      r.n_c, r.li, r.c, r.d);
        *text << line << '\n';
    }
}

void run_export_geojson(const ExportGeojsonOptions& options) {
    // partition CSV re-read without a graph: labels straight from the file
    std::ifstream in(options.partition);
    if (!in) throw IoError("cannot open " + options.partition.string());
    std::vector<std::pair<std::string, int>> assignment;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError(options.partition.string() + ":" + std::to_string(line_no) +
                          ": expected zcta,community_id");
        }
        const std::string zcta = line.substr(0, comma);
        if (line_no == 1 && zcta == "zcta") continue;
        assignment.emplace_back(zcta, std::stoi(line.substr(comma + 1)));
    }

    GeojsonExportStats stats =
        export_geojson(assignment, options.boundaries, options.out, options.geometry);
    for (const auto& z : stats.missing_zctas) {
        std::cerr << "export-geojson: no boundary for ZCTA " << z << '\n';
    }
}

void run_synth(const SynthOptions& options) {
    PlantedConfig config;
    config.n_communities = options.communities;
    config.community_sizes = options.sizes.empty()
                                 ? std::vector<int>(options.communities, options.size)
                                 : options.sizes;
    config.mean_internal_flow = options.internal_mean;
    config.mean_external_flow = options.external_mean;
    config.hub_fraction = options.hub_fraction;
    config.seed = options.seed;

    PlantedInstance instance = generate(config);
    write_flow_csv(instance.flows, options.out_dir / "flows.csv");
    write_partition_labels(instance.zctas, instance.ground_truth,
                           options.out_dir / "ground_truth.csv");

    ordered_json opt;
    opt["communities"] = config.n_communities;
    opt["sizes"] = config.community_sizes;
    opt["internal_mean"] = config.mean_internal_flow;
    opt["external_mean"] = config.mean_external_flow;
    opt["hub_fraction"] = config.hub_fraction;
    opt["seed"] = config.seed;
    write_manifest(options.out_dir, "synth", std::move(opt));
}

} // namespace hsadet
