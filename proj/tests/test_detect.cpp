#include <doctest.h>

#include <algorithm>
#include <set>

#include "hsadet/detect.hpp"
#include "hsadet/errors.hpp"
#include "hsadet/evaluate.hpp"
#include "hsadet/objectives.hpp"
#include "hsadet/synth.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace hsadet;

namespace {

bool valid_partition(const Hpdn& g, const Partition& p) {
    if (p.node_count() != g.node_count()) return false;
    std::vector<int> sizes(p.community_count(), 0);
    for (int i = 0; i < p.node_count(); ++i) {
        const int c = p.community_of(i);
        if (c < 0 || c >= p.community_count()) return false;
        ++sizes[c];
    }
    return std::all_of(sizes.begin(), sizes.end(), [](int s) { return s > 0; });
}

Partition component_truth(const Hpdn& g) {
    std::vector<int> comm(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) comm[i] = g.label(i)[0] == 't' ? 0 : 1;
    return Partition(std::move(comm));
}

} // namespace

TEST_CASE("louvain finds the two triangles exactly") {
    const Hpdn g = testing::two_triangles();
    DetectConfig config;
    config.seed = 3;
    const Partition p = louvain(g, config);
    CHECK(p.community_count() == 2);
    CHECK(partition_similarity(p, component_truth(g)) == 1.0);
    CHECK(modularity(g, p) == 0.5);
}

TEST_CASE("infomap finds the two triangles") {
    const Hpdn g = testing::two_triangles();
    DetectConfig config;
    config.seed = 3;
    const Partition p = infomap(g, config);
    CHECK(p.community_count() == 2);
    CHECK(partition_similarity(p, component_truth(g)) == 1.0);
}

TEST_CASE("slpa labels never cross components and each triangle collapses") {
    const Hpdn g = testing::two_triangles();
    DetectConfig config;
    config.seed = 3;
    const Partition p = slpa(g, config);
    CHECK(p.community_count() == 2);
    CHECK(partition_similarity(p, component_truth(g)) == 1.0);
}

TEST_CASE("block model on a single node returns one community") {
    const Hpdn g = testing::graph_of({{"a", "a", 4}});
    DetectConfig config;
    const Partition p = block_model(g, config);
    CHECK(p.node_count() == 1);
    CHECK(p.community_count() == 1);
}

TEST_CASE("block model rejects fractional weights") {
    const Hpdn g = testing::graph_of({{"a", "b", 0.5}});
    CHECK_THROWS_AS(block_model(g, DetectConfig{}), NonIntegerWeightsError);
}

TEST_CASE("all four algorithms return valid partitions on awkward graphs") {
    // self-loops, an isolated-ish loop-only node, and a pendant
    const Hpdn g = testing::graph_of({{"a", "b", 3}, {"b", "c", 1}, {"c", "a", 2},
                                      {"d", "d", 7}, {"e", "a", 1}, {"f", "f", 1},
                                      {"g", "h", 2}});
    for (Algorithm algo : {Algorithm::Louvain, Algorithm::Infomap, Algorithm::BlockModel,
                           Algorithm::Slpa}) {
        DetectConfig config;
        config.algorithm = algo;
        config.seed = 11;
        const Partition p = detect(g, config);
        CHECK(valid_partition(g, p));
    }
}

TEST_CASE("louvain and infomap leave loop-only nodes as singletons") {
    const Hpdn g = testing::graph_of({{"a", "b", 3}, {"d", "d", 7}});
    DetectConfig config;
    config.seed = 5;
    const int d = g.require_index("d");
    for (Algorithm algo : {Algorithm::Louvain, Algorithm::Infomap, Algorithm::Slpa}) {
        config.algorithm = algo;
        const Partition p = detect(g, config);
        int size = 0;
        for (int i = 0; i < p.node_count(); ++i) {
            if (p.community_of(i) == p.community_of(d)) ++size;
        }
        CHECK(size == 1);
    }
}

TEST_CASE("detection is deterministic for a fixed seed") {
    Rng rng(314);
    const FlowTable flows = oracles::random_flow_table(12, 0.3, 9, rng);
    const Hpdn g = build_hpdn(flows);
    for (Algorithm algo : {Algorithm::Louvain, Algorithm::Infomap, Algorithm::BlockModel,
                           Algorithm::Slpa}) {
        DetectConfig config;
        config.algorithm = algo;
        config.seed = 42;
        const Partition p1 = detect(g, config);
        const Partition p2 = detect(g, config);
        CHECK(p1 == p2);
    }
}

TEST_CASE("louvain never scores below the all-singletons partition") {
    Rng rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        const FlowTable flows = oracles::random_flow_table(10, 0.25, 9, rng);
        const Hpdn g = build_hpdn(flows);
        DetectConfig config;
        config.seed = trial;
        const Partition p = louvain(g, config);
        CHECK(modularity(g, p) >=
              modularity(g, Partition::singletons(g.node_count())) - 1e-12);
    }
}

TEST_CASE("infomap never scores above the all-singletons partition") {
    Rng rng(1618);
    for (int trial = 0; trial < 10; ++trial) {
        const FlowTable flows = oracles::random_flow_table(10, 0.25, 9, rng);
        const Hpdn g = build_hpdn(flows);
        DetectConfig config;
        config.seed = trial;
        const Partition p = infomap(g, config);
        CHECK(map_equation(g, p) <=
              map_equation(g, Partition::singletons(g.node_count())) + 1e-12);
    }
}

TEST_CASE("planted partitions with strong contrast are recovered exactly") {
    const PlantedConfig config =
        PlantedConfig::uniform(4, 16, 50.0, 1.0, /*seed=*/9, /*hub_fraction=*/1.0);
    const PlantedInstance instance = generate(config);
    const Hpdn g = build_hpdn(instance.flows);
    REQUIRE(g.node_count() == instance.ground_truth.node_count());

    DetectConfig dc;
    dc.seed = 1;
    SUBCASE("louvain") {
        CHECK(partition_similarity(louvain(g, dc), instance.ground_truth) == 1.0);
    }
    SUBCASE("infomap") {
        CHECK(partition_similarity(infomap(g, dc), instance.ground_truth) == 1.0);
    }
    SUBCASE("block model") {
        CHECK(partition_similarity(block_model(g, dc), instance.ground_truth) == 1.0);
    }
    SUBCASE("slpa") {
        CHECK(partition_similarity(slpa(g, dc), instance.ground_truth) >= 0.9);
    }
}

TEST_CASE("block model recovers a planted 2-block structure") {
    const PlantedConfig config =
        PlantedConfig::uniform(2, 12, 40.0, 1.0, /*seed=*/4, /*hub_fraction=*/1.0);
    const PlantedInstance instance = generate(config);
    const Hpdn g = build_hpdn(instance.flows);
    DetectConfig dc;
    dc.seed = 7;
    const Partition p = block_model(g, dc);
    CHECK(partition_similarity(p, instance.ground_truth) == 1.0);
}

TEST_CASE("adjusted Rand index basics") {
    const Partition a(std::vector<int>{0, 0, 1, 1, 2, 2});
    const Partition b(std::vector<int>{2, 2, 0, 0, 1, 1}); // relabeled copy
    CHECK(partition_similarity(a, a) == 1.0);
    CHECK(partition_similarity(a, b) == 1.0);

    const Partition singles = Partition::singletons(6);
    const Partition one = Partition::single_community(6);
    const double got = partition_similarity(singles, one);
    const double want = oracles::ari_bruteforce(singles.assignment(), one.assignment());
    CHECK(got == doctest::Approx(want).epsilon(1e-15));
    CHECK(got == 0.0); // frozen from the contingency computation

    CHECK_THROWS_AS(partition_similarity(a, Partition::singletons(5)),
                    PartitionMismatchError);
}

TEST_CASE("ARI agrees with the contingency oracle on random pairs") {
    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(20));
        const std::vector<int> a = oracles::random_partition(n, 4, rng);
        const std::vector<int> b = oracles::random_partition(n, 3, rng);
        const double got = partition_similarity(Partition(a), Partition(b));
        const double want = oracles::ari_bruteforce(a, b);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("micro-scale optimality against exhaustive enumeration (spot check)") {
    Rng rng(12);
    int louvain_hits = 0;
    int infomap_hits = 0;
    const int trials = 5;
    for (int trial = 0; trial < trials; ++trial) {
        const FlowTable flows = oracles::random_flow_table(6, 0.4, 20, rng);
        const Hpdn g = build_hpdn(flows);

        double best_q = -2.0;
        double best_l = 1e100;
        oracles::for_each_partition(g.node_count(), [&](const std::vector<int>& comm) {
            const Partition p(comm);
            best_q = std::max(best_q, modularity(g, p));
            best_l = std::min(best_l, map_equation(g, p));
        });

        DetectConfig dc;
        dc.seed = 100 + trial;
        if (modularity(g, louvain(g, dc)) >= best_q - 1e-9) ++louvain_hits;
        if (map_equation(g, infomap(g, dc)) <= best_l + 1e-9) ++infomap_hits;
    }
    CHECK(louvain_hits >= trials - 1);
    CHECK(infomap_hits >= trials - 1);
}
