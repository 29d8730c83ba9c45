#include <doctest.h>

#include <algorithm>

#include "hsadet/errors.hpp"
#include "hsadet/graph.hpp"
#include "hsadet/rng.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace hsadet;

TEST_CASE("unit triangle statistics") {
    const Hpdn g = testing::graph_of({{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}});
    const NetworkStats s = stats(g);
    CHECK(s.n == 3);
    CHECK(s.m == 3);
    CHECK(s.w == 3.0);
    CHECK(s.rho == 1.0);
    CHECK(s.l == 1.0);
    CHECK(s.c == 1.0);
    CHECK(s.components == 1);
}

TEST_CASE("four-node path: mean hop distance is 5/3") {
    const Hpdn g = testing::graph_of({{"a", "b", 1}, {"b", "c", 1}, {"c", "d", 1}});
    const NetworkStats s = stats(g);
    // sum over ordered connected pairs: (1*3 + 2*2 + 3*1) * 2 = 20, pairs = 12
    CHECK(s.l == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(s.c == 0.0);
}

TEST_CASE("BFS path lengths agree with Floyd-Warshall on random graphs") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(40));
        const FlowTable flows = oracles::random_flow_table(n, 2.2 / n, 9, rng);
        const Hpdn g = build_hpdn(flows);
        const auto fw = oracles::floyd_warshall_hops(g);

        // restrict to the largest component the same way stats does
        std::vector<int> comp(g.node_count(), -1);
        int n_comp = 0;
        for (int i = 0; i < g.node_count(); ++i) {
            if (comp[i] >= 0) continue;
            std::vector<int> stack{i};
            comp[i] = n_comp;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int v = 0; v < g.node_count(); ++v) {
                    if (comp[v] < 0 && fw[u][v] == 1) {
                        comp[v] = n_comp;
                        stack.push_back(v);
                    }
                }
            }
            ++n_comp;
        }
        std::vector<int> size(n_comp, 0);
        for (int c : comp) ++size[c];
        const int big = static_cast<int>(std::max_element(size.begin(), size.end()) -
                                         size.begin());

        double sum = 0.0;
        std::int64_t pairs = 0;
        for (int i = 0; i < g.node_count(); ++i) {
            for (int j = 0; j < g.node_count(); ++j) {
                if (i != j && comp[i] == big && comp[j] == big) {
                    REQUIRE(fw[i][j] > 0);
                    sum += fw[i][j];
                    ++pairs;
                }
            }
        }
        const NetworkStats s = stats(g);
        if (pairs > 0) {
            CHECK(s.l == doctest::Approx(sum / pairs).epsilon(1e-12));
        }
        CHECK(s.components == n_comp);
    }
}

TEST_CASE("degree and strength accessors") {
    const Hpdn g = testing::graph_of(
        {{"hub", "s1", 1}, {"hub", "s2", 1}, {"hub", "s3", 1}, {"x", "x", 10}, {"x", "hub", 5}});
    CHECK(degree(g, "hub") == 4);
    CHECK(strength(g, "hub") == 8.0);
    CHECK(degree(g, "x") == 1);
    CHECK(strength(g, "x") == 15.0); // self-loop counted once
    CHECK(neighbor_labels(g, "s1") == std::vector<std::string>{"hub"});
    CHECK_THROWS_AS(degree(g, "nope"), UnknownNodeError);
}

TEST_CASE("strength conventions against hand sums on a 5-node graph") {
    const Hpdn g = testing::graph_of(
        {{"a", "b", 2}, {"b", "c", 3}, {"c", "d", 4}, {"d", "a", 1}, {"e", "e", 6}, {"a", "e", 5}});
    // pair weights total 15, loops total 6
    double once = 0.0;
    double mod = 0.0;
    for (int i = 0; i < g.node_count(); ++i) {
        once += g.strength(i);
        mod += g.modularity_strength(i);
    }
    CHECK(once == 2.0 * 15.0 + 6.0);
    CHECK(mod == 2.0 * 15.0 + 2.0 * 6.0);
    CHECK(g.total_strength() == once);
    CHECK(g.total_modularity_strength() == mod);
    CHECK(g.total_weight() == 15.0 + 6.0);
}

TEST_CASE("stats is invariant under node input order") {
    std::vector<testing::Edge> edges = {{"a", "b", 2}, {"b", "c", 3}, {"c", "a", 1},
                                        {"d", "d", 4}, {"c", "d", 2}};
    const NetworkStats s1 = stats(testing::graph_of(edges));
    std::reverse(edges.begin(), edges.end());
    const NetworkStats s2 = stats(testing::graph_of(edges));
    CHECK(s1.n == s2.n);
    CHECK(s1.m == s2.m);
    CHECK(s1.w == s2.w);
    CHECK(s1.l == s2.l);
    CHECK(s1.c == s2.c);
}

TEST_CASE("stats results do not depend on the thread count") {
    Rng rng(5);
    const FlowTable flows = oracles::random_flow_table(30, 0.1, 9, rng);
    const Hpdn g = build_hpdn(flows);
    const NetworkStats s1 = stats(g, {.weighted_clustering = false, .threads = 1});
    const NetworkStats s8 = stats(g, {.weighted_clustering = false, .threads = 8});
    CHECK(s1.l == s8.l);
    CHECK(s1.c == s8.c);
}

TEST_CASE("empty graph is rejected") {
    CHECK_THROWS_AS(stats(Hpdn::from_edges({})), EmptyGraphError);
}

TEST_CASE("disconnected graphs flag the component count") {
    const Hpdn g = testing::graph_of({{"a", "b", 1}, {"c", "d", 1}, {"c", "e", 1}});
    const NetworkStats s = stats(g);
    CHECK(s.components == 2);
    // largest component is the 3-node path c-d, c-e
    CHECK(s.l == doctest::Approx((1.0 * 4 + 2.0 * 2) / 6.0));
}

TEST_CASE("weighted clustering variant is selectable and differs") {
    const Hpdn g = testing::graph_of(
        {{"a", "b", 10}, {"b", "c", 1}, {"a", "c", 1}, {"a", "d", 1}, {"b", "d", 1}});
    const NetworkStats plain = stats(g);
    const NetworkStats weighted = stats(g, {.weighted_clustering = true, .threads = 1});
    CHECK(plain.c > 0.0);
    CHECK(weighted.c > 0.0);
    CHECK(plain.c != weighted.c);
}
