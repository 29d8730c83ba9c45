// hsadet CLI: build discharge networks, delineate health service areas with
// four community-detection algorithms, and score the delineations.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hsadet/commands.hpp"
#include "hsadet/errors.hpp"

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HSADET_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

hsadet::DischargeType parse_type_or_throw(const std::string& raw) {
    auto t = hsadet::parse_discharge_type(raw);
    if (!t) {
        throw CLI::ValidationError(
            "--type", "unknown discharge type '" + raw +
                          "' (expected: 'Inpatient from ED', 'Inpatient', "
                          "'Ambulatory Surgery', or 'ED Only')");
    }
    return *t;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Health service area delineation from hospital discharge networks"};
    app.require_subcommand(1);

    hsadet::BuildOptions build;
    std::string build_type;
    auto* cmd_build = app.add_subcommand(
        "build", "Aggregate discharge records into a flow table and an HPDN edge list");
    cmd_build->add_option("--discharges", build.discharges, "discharge CSV")->required();
    cmd_build->add_option("--crosswalk", build.crosswalk, "ZIP->ZCTA crosswalk CSV")
        ->required();
    cmd_build->add_option("--type", build_type, "discharge type")->required();
    cmd_build->add_option("--year", build.year, "year")->required();
    std::string policy = "identity";
    cmd_build->add_option("--unmapped-policy", policy, "drop|identity (default identity)")
        ->check(CLI::IsMember({"drop", "identity"}));
    cmd_build->add_option("--col-type", build.columns.type, "type column name");
    cmd_build->add_option("--col-year", build.columns.year, "year column name");
    cmd_build->add_option("--col-facility", build.columns.facility_name,
                          "facility name column (may be absent)");
    cmd_build->add_option("--col-facility-zip", build.columns.facility_zip,
                          "facility ZIP column name");
    cmd_build->add_option("--col-patient-zip", build.columns.patient_zip,
                          "patient ZIP column name");
    cmd_build->add_option("--col-count", build.columns.count, "count column name");
    cmd_build->add_option("--out-dir", build.out_dir, "output directory")->required();
    cmd_build->add_option("--threads", build.threads, "worker threads for statistics");

    hsadet::StatsOptions2 stats;
    auto* cmd_stats =
        app.add_subcommand("stats", "Network statistics of an edge list (JSON)");
    cmd_stats->add_option("--edges", stats.edges, "edge TSV")->required();
    cmd_stats->add_flag("--weighted-clustering", stats.weighted_clustering,
                        "strength-based clustering coefficient");
    cmd_stats->add_option("--out", stats.out, "output path (default stdout)");
    cmd_stats->add_option("--threads", stats.threads, "worker threads");

    hsadet::DetectOptions detect;
    detect.config.seed = default_seed();
    std::string algo = "all";
    auto* cmd_detect = app.add_subcommand("detect", "Delineate HSAs on an edge list");
    cmd_detect->add_option("--edges", detect.edges, "edge TSV")->required();
    cmd_detect->add_option("--algo", algo, "louvain|infomap|sbm|slpa|all");
    cmd_detect->add_option("--seed", detect.config.seed, "random seed");
    cmd_detect->add_option("--slpa-r", detect.config.slpa_threshold,
                           "SLPA post-processing threshold (default 0.5)");
    cmd_detect->add_option("--slpa-iters", detect.config.slpa_iterations,
                           "SLPA iterations (default 100)");
    cmd_detect->add_option("--resolution", detect.config.louvain_resolution,
                           "Louvain resolution (default 1.0)");
    cmd_detect->add_option("--sweeps", detect.config.sbm_mcmc_sweeps,
                           "block model MCMC sweeps (default 100)");
    cmd_detect->add_option("--restarts", detect.config.restarts,
                           "Louvain/Infomap restarts (default 5)");
    cmd_detect->add_option("--threads", detect.threads,
                           "run algorithms in parallel when more than one");
    cmd_detect->add_flag("--timings", detect.timings,
                         "record wall-clock runtimes in the sidecars");
    cmd_detect->add_option("--out-dir", detect.out_dir, "output directory")->required();

    hsadet::EvaluateOptions evaluate;
    evaluate.seed = default_seed();
    std::string eval_algorithm;
    int eval_year = 0;
    std::string eval_type;
    auto* cmd_evaluate =
        app.add_subcommand("evaluate", "Score a delineation (report JSON)");
    cmd_evaluate->add_option("--flows", evaluate.flows, "flow CSV")->required();
    cmd_evaluate->add_option("--edges", evaluate.edges, "edge TSV")->required();
    cmd_evaluate->add_option("--partition", evaluate.partition, "partition CSV")
        ->required();
    cmd_evaluate->add_option("--B", evaluate.bootstrap_b, "bootstrap samples (default 1000)");
    cmd_evaluate->add_option("--seed", evaluate.seed, "random seed");
    cmd_evaluate->add_option("--algorithm", eval_algorithm, "algorithm label for the report");
    auto* year_opt = cmd_evaluate->add_option("--year", eval_year, "year label for the report");
    cmd_evaluate->add_option("--discharge-type", eval_type, "type label for the report");
    cmd_evaluate->add_option("--out", evaluate.out, "report JSON path")->required();

    hsadet::CompareOptions compare;
    auto* cmd_compare =
        app.add_subcommand("compare", "Tabulate delineation reports side by side");
    cmd_compare->add_option("reports", compare.reports, "report JSON files")->required();
    cmd_compare->add_option("--out-csv", compare.out_csv, "CSV output path");
    cmd_compare->add_option("--out-text", compare.out_text,
                            "aligned text output path (default stdout)");

    hsadet::ExportGeojsonOptions geo;
    auto* cmd_geo = app.add_subcommand(
        "export-geojson", "Dissolve ZCTA boundaries into one feature per HSA");
    cmd_geo->add_option("--partition", geo.partition, "partition CSV")->required();
    cmd_geo->add_option("--boundaries", geo.boundaries, "ZCTA boundary GeoJSON")
        ->required();
    cmd_geo->add_option("--zcta-property", geo.geometry.zcta_property,
                        "feature property holding the ZCTA code");
    cmd_geo->add_option("--snap-tolerance", geo.geometry.snap_tolerance,
                        "coordinate snap tolerance in degrees (default 1e-9)");
    cmd_geo->add_option("--out", geo.out, "output GeoJSON path")->required();

    hsadet::SynthOptions synth;
    synth.seed = default_seed();
    auto* cmd_synth = app.add_subcommand(
        "synth", "Generate a planted-community discharge instance");
    cmd_synth->add_option("--communities", synth.communities, "number of communities");
    cmd_synth->add_option("--size", synth.size, "uniform community size");
    cmd_synth->add_option("--sizes", synth.sizes, "per-community sizes");
    cmd_synth->add_option("--internal", synth.internal_mean, "mean internal flow");
    cmd_synth->add_option("--external", synth.external_mean, "mean external flow");
    cmd_synth->add_option("--hub-fraction", synth.hub_fraction,
                          "fraction of ZCTAs acting as hubs (default 0.25)");
    cmd_synth->add_option("--seed", synth.seed, "random seed");
    cmd_synth->add_option("--out-dir", synth.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << '\n';
        return 1;
    }

    try {
        if (*cmd_build) {
            build.discharge_type = parse_type_or_throw(build_type);
            build.unmapped_policy = policy == "drop" ? hsadet::UnmappedPolicy::Drop
                                                     : hsadet::UnmappedPolicy::Identity;
            hsadet::run_build(build);
        } else if (*cmd_stats) {
            hsadet::run_stats(stats);
        } else if (*cmd_detect) {
            if (algo != "all") {
                auto parsed = hsadet::parse_algorithm(algo);
                if (!parsed) {
                    std::cerr << "unknown algorithm '" << algo
                              << "' (expected louvain|infomap|sbm|slpa|all)\n\n"
                              << app.help() << '\n';
                    return 1;
                }
                detect.algorithms = {*parsed};
            }
            hsadet::run_detect(detect);
        } else if (*cmd_evaluate) {
            if (!eval_algorithm.empty()) evaluate.algorithm = eval_algorithm;
            if (year_opt->count() > 0) evaluate.year = eval_year;
            if (!eval_type.empty()) evaluate.discharge_type = eval_type;
            hsadet::run_evaluate(evaluate);
        } else if (*cmd_compare) {
            hsadet::run_compare(compare);
        } else if (*cmd_geo) {
            hsadet::run_export_geojson(geo);
        } else if (*cmd_synth) {
            hsadet::run_synth(synth);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << '\n';
        return 1;
    } catch (const hsadet::EmptySelectionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hsadet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
