#include <doctest.h>

#include "hsadet/baseline.hpp"
#include "hsadet/errors.hpp"
#include "hsadet/evaluate.hpp"
#include "test_helpers.hpp"

using namespace hsadet;

TEST_CASE("plurality assignment follows the largest flow") {
    // A sends 10 to F1 (town T1) and 3 to F2 (town T2)
    const FlowTable flows = testing::flow_table({{"A", "F1", 10}, {"A", "F2", 3}});
    const Hpdn g = build_hpdn(flows);
    const FacilityTownMap towns = {{"F1", "T1"}, {"F2", "T2"}};
    const Partition p = plurality_assign(flows, g, towns);
    // A joins T1; the facility-only ZCTAs take their own towns
    CHECK(p.community_of(g.require_index("A")) == p.community_of(g.require_index("F1")));
    CHECK(p.community_of(g.require_index("A")) != p.community_of(g.require_index("F2")));
}

TEST_CASE("plurality ties break toward the town with larger total inflow") {
    const FlowTable flows = testing::flow_table(
        {{"A", "F1", 5}, {"A", "F2", 5}, {"B", "F2", 95}, {"B", "F1", 45}});
    const Hpdn g = build_hpdn(flows);
    const FacilityTownMap towns = {{"F1", "T1"}, {"F2", "T2"}};
    // inflow: T1 = 50, T2 = 100 -> A's 5/5 tie goes to T2
    const Partition p = plurality_assign(flows, g, towns);
    CHECK(p.community_of(g.require_index("A")) == p.community_of(g.require_index("F2")));
}

TEST_CASE("single-town patients get that town") {
    const FlowTable flows = testing::flow_table({{"A", "F1", 2}});
    const Hpdn g = build_hpdn(flows);
    const Partition p = plurality_assign(flows, g, {{"F1", "T1"}});
    CHECK(p.community_count() == 1);
}

TEST_CASE("a facility missing from the town map is an error") {
    const FlowTable flows = testing::flow_table({{"A", "F1", 2}});
    const Hpdn g = build_hpdn(flows);
    CHECK_THROWS_AS(plurality_assign(flows, g, {}), UnmappedFacilityError);
}

TEST_CASE("the degenerate town map makes every facility its own town") {
    const FlowTable flows = testing::flow_table({{"A", "F1", 2}, {"A", "F2", 9}});
    const FacilityTownMap towns = degenerate_town_map(flows);
    CHECK(towns.size() == 2);
    CHECK(towns.at("F1") == "F1");
}

TEST_CASE("plurality assignment is independent of record order") {
    const FlowTable f1 = testing::flow_table(
        {{"A", "F1", 6}, {"A", "F2", 3}, {"B", "F2", 8}, {"C", "F1", 1}});
    const FlowTable f2 = testing::flow_table(
        {{"C", "F1", 1}, {"B", "F2", 8}, {"A", "F2", 3}, {"A", "F1", 6}});
    const Hpdn g = build_hpdn(f1);
    const FacilityTownMap towns = {{"F1", "T1"}, {"F2", "T2"}};
    CHECK(plurality_assign(f1, g, towns) == plurality_assign(f2, g, towns));
}

namespace {

// 1x6 strip of ZCTAs g0..g5 with straight-line adjacency.
ZctaAdjacency strip_adjacency() {
    ZctaAdjacency adj;
    const std::vector<std::string> ids = {"g0", "g1", "g2", "g3", "g4", "g5"};
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
        adj[ids[i]].insert(ids[i + 1]);
        adj[ids[i + 1]].insert(ids[i]);
    }
    return adj;
}

Hpdn strip_graph() {
    return testing::graph_of({{"g0", "g1", 1}, {"g1", "g2", 1}, {"g2", "g3", 1},
                              {"g3", "g4", 1}, {"g4", "g5", 1}});
}

} // namespace

TEST_CASE("an enclave surrounded by one community moves there") {
    const Hpdn g = strip_graph();
    // g2 alone in community 1, everything else community 0
    std::vector<int> comm(6, 0);
    comm[g.require_index("g2")] = 1;
    const auto fixed = enclave_fix(Partition(comm), g, strip_adjacency());
    CHECK(fixed.partition.community_count() == 1);
    CHECK(fixed.moves == 1);
}

TEST_CASE("nodes with split neighborhoods stay put") {
    const Hpdn g = strip_graph();
    // boundary g0,g1,g2 = 0; g3,g4,g5 = 1; nobody is unanimous-other
    std::vector<int> comm = {0, 0, 0, 1, 1, 1};
    const auto fixed = enclave_fix(Partition(comm), g, strip_adjacency());
    CHECK(fixed.partition == Partition(comm));
    CHECK(fixed.moves == 0);
}

TEST_CASE("an enclave chain resolves over two fixpoint passes") {
    const Hpdn g = strip_graph();
    // g1 can only become unanimous after g0 moves; label order visits g0 first
    // in pass 1, so force the dependency the other way round: g5 then g4.
    // communities: g0..g3 = 0, g4 = 1, g5 = 2 with adjacency g4-g5.
    // pass 1: g4's neighbors are {g3:0, g5:2} (split) but g5's neighbor is {g4:1},
    // so g5 joins 1; pass 2: g4 sees {g3:0, g5:1}... still split. Use a tail:
    // communities: g0=1, g1=2, rest 0; g0's only neighbor g1 is in 2 -> g0 joins 2
    // in pass 1 (before g1 is visited g1 sees {g0:1,g2:0} split); after g0 moved,
    // g1 sees {g0:2, g2:0} still split. Need unanimity; use the other end:
    // g5=2 alone, g4=2, g3=0...: g4 sees {g3:0,g5:2}.
    // Simplest chain: g0=1, g1=1, rest 0. g0 sees {g1:1} same -> no move.
    // g1 sees {g0:1, g2:0} split. Nothing moves? Then use: g0=1, g1=2:
    // pass 1 in label order: g0 sees {g1:2} -> joins 2; g1 now sees {g0:2, g2:0} split.
    // Dead end again -- build the chain so resolution cascades backward:
    // g4=1, g5=2. pass 1: g4 sees {g3:0, g5:2} split; g5 sees {g4:1} -> joins 1.
    // pass 2: g4 sees {g3:0, g5:1} split. Still stuck. The working cascade:
    // g4=2, g5=1: pass 1: g4 split {g3:0,g5:1}; g5 sees {g4:2} -> joins 2.
    // pass 2: g4 sees {g3:0, g5:2}: split. Hmm -- a strip cannot cascade from
    // the right. Cascade left-to-right off the g0 end instead:
    // g0=1, g1=2, and give g0 no other neighbor: pass 1 visits g0 first:
    // g0 -> 2 (unanimous {g1:2}); g1 then sees {g0:2, g2:0}: split. So a
    // two-pass chain needs g1's far side to already be 2: set g2=2 as well.
    std::vector<int> comm(6, 0);
    comm[g.require_index("g0")] = 1; // enclave level 1
    comm[g.require_index("g1")] = 0; // becomes an enclave once g0 joins 2? no...
    // Final working fixture, verified by hand below: communities
    // g0=1, g1=2, g2=2, g3=0, g4=0, g5=0 and adjacency restricted to the strip.
    comm = {1, 2, 2, 0, 0, 0};
    // pass 1 (label order g0..g5): g0 sees {g1:2} -> joins 2. g1 sees {g0:2,g2:2}
    // -> already 2, stays. g2 sees {g1:2, g3:0} split. g3 sees {g2:2, g4:0} split...
    // one pass suffices here; extend so a second pass is needed:
    // make g3 an enclave of 0 surrounded by 2 only after g2 stays 2 and g4 flips.
    // g4=2, g5=2: comm = {1,2,2,0,2,2}: pass 1: g0->2; g3 sees {g2:2,g4:2} -> joins 2
    // (already unanimous in pass 1). To force pass 2, break g3's unanimity until
    // g0 has moved: impossible on a strip without wrapping; instead hang g5 off g0:
    ZctaAdjacency adj = strip_adjacency();
    adj["g5"].clear();
    adj["g5"].insert("g0");
    adj["g0"].insert("g5");
    adj["g4"].erase("g5");
    adj["g0"].erase("g1");
    // ring-ish: g5 adjacent to g0 only; g0 adjacent to g1 and g5.
    adj["g0"].insert("g1");
    // communities: g5=1 (enclave of g0), g0=2 (enclave once g5 agrees with g1..g4=0)
    comm = {2, 0, 0, 0, 0, 1};
    // pass 1 (g0 first): g0 sees {g1:0, g5:1}: split, stays. g5 sees {g0:2} -> joins 2.
    // pass 2: g0 sees {g1:0, g5:2}: split. Still no cascade...
    // Make g5 join 0 instead by seeding it next to g1: the dependable two-pass
    // chain is a pendant pair: p1 - p0 - core, comm(p1)=a, comm(p0)=b, core=c:
    // pass 1: p0 sees {core:c, p1:a} split; p1 sees {p0:b} -> joins b. no cascade.
    // pass 1 visiting order matters: labels sort p0 before p1. If comm(p1)=c:
    // p0 sees {core:c, p1:c} -> joins c in pass 1; done in one pass.
    // The cascade that genuinely needs two passes: pendant chain q2-q1-q0-core
    // with q0 visited before q1 before q2 and communities q0=c (already core),
    // q1=x, q2=x ... q1 sees {q0:c, q2:x} split; q2 sees {q1:x} same. Stuck.
    // q2=y: q1 split; q2 sees {q1:x} -> joins x. pass 2: q1 still split. Stuck.
    // => With immediate in-pass updates and ascending label order, a genuine
    // 2-pass cascade needs the LATER label to unlock the EARLIER one:
    // q1 unlocks only after q2 moved (q2 > q1 in order, so next pass).
    // communities: core c0 = {q0}; q1 = 1; q2 = 0 with edges q0-q1, q1-q2, q2-q0? no.
    // Pendant chain: q0 - q1 - q2 (q2 pendant): q1=1, q2=1, q0=0 core of size 1?
    // q0 sees {q1:1} -> q0 joins 1! that merges everything. Give q0 a friend:
    // nodes: a0, a1 (community 0, adjacent), then chain a1 - b0 - b1 with b0=1, b1=2.
    // order: a0, a1, b0, b1. pass 1: a0 {a1:0} same. a1 {a0:0, b0:1} split.
    // b0 {a1:0, b1:2} split. b1 {b0:1} -> joins 1. pass 2: b0 {a1:0, b1:1} split. Stuck!
    // Lesson: unanimity cascades need the mover to JOIN the community that
    // unblocks its neighbor. b1 joining 1 keeps b0 split because a1 is 0.
    // So let b1's move make b0 unanimous toward 0: b0=1, b1=0 already unanimous? no:
    // b0 sees {a1:0, b1:0} -> unanimous 0, one pass. For two passes the first
    // mover must CREATE that unanimity: b1=5 alone, surrounded by {b0}; b0=1.
    // b1 joins 1 (pass 1, after b0 was visited: b0 saw {a1:0, b1:5} split).
    // pass 2: b0 sees {a1:0, b1:1}: split. Argh -- joining b0's own community
    // never unblocks b0 either. The only two-pass pattern: b1 joins community 0
    // via a THIRD neighbor in 0. Grid, not strip:
    //      c0 c1
    //      e1 e2   with e1 below c0, e2 below c1, e1-e2 adjacent.
    // communities: c0=c1=0; e1=1, e2=2. order: c0,c1,e1,e2.
    // pass1: e1 sees {c0:0, e2:2} split; e2 sees {c1:0, e1:1} split. Nothing. Bad.
    // e2=1 (same as e1): e1 sees {c0:0, e2:1} split; e2 sees {c1:0, e1:1} split. Bad.
    // The chain that works: e2's ONLY neighbor is e1 (pendant below the grid):
    // e1 adjacent to c0, c1(?), e2. communities: e1=1, e2=1.
    // e1 sees {c0:0, c1:0, e2:1}: split. e2 sees {e1:1}: same. Stable. Bad.
    // e2=2: e1 split; e2 {e1:1} -> joins 1; pass2: e1 {c0:0,c1:0,e2:1} split. Bad.
    // CONCLUSION: with unanimity, a cascade happens when the first move REMOVES
    // the lone dissenting neighbor of the second node by pulling it into the
    // surrounding community:
    // nodes: x (enclave candidate, community 1), y (x's neighbor, community 2),
    // core z0, z1 (community 0) with y adjacent ONLY to x... then y joins 1 -- no.
    // y must join 0: y's neighbors: {x:1}? can't reach 0.
    // y adjacent to x and z1: y sees {x:1, z1:0}: split... until x moves to 0!
    // x's neighbors: z0 and y: x sees {z0:0, y:2}: split. Deadlock again --
    // UNLESS x has only z0: x pendant on z0: x sees {z0:0} -> joins 0 (pass 1,
    // x visited first or not, immediate). Then y sees {x:0, z1:0} -> joins 0.
    // If y's label sorts BEFORE x, pass 1 visits y (split: x still 1), then x
    // (joins 0). pass 2 visits y: now unanimous -> joins 0. TWO PASSES.
    ZctaAdjacency adj2;
    adj2["a_y"] = {"b_x", "z1"};
    adj2["b_x"] = {"z0", "a_y"};
    adj2["z0"] = {"b_x", "z1"};
    adj2["z1"] = {"z0", "a_y"};
    const Hpdn g2 = testing::graph_of(
        {{"a_y", "b_x", 1}, {"b_x", "z0", 1}, {"z0", "z1", 1}, {"z1", "a_y", 1}});
    // label order: a_y, b_x, z0, z1. communities: a_y=2, b_x=1, z0=z1=0.
    // b_x's geographic neighbors: {z0} only -- drop a_y from b_x's adjacency:
    adj2["b_x"] = {"z0"};
    adj2["a_y"] = {"b_x", "z1"};
    std::vector<int> comm2(4);
    comm2[g2.require_index("a_y")] = 2;
    comm2[g2.require_index("b_x")] = 1;
    comm2[g2.require_index("z0")] = 0;
    comm2[g2.require_index("z1")] = 0;
    const auto fixed = enclave_fix(Partition(comm2), g2, adj2);
    CHECK(fixed.partition.community_count() == 1);
    CHECK(fixed.moves == 2);
    CHECK(fixed.passes == 2);
}

TEST_CASE("missing adjacency entries are an error") {
    const Hpdn g = strip_graph();
    ZctaAdjacency adj = strip_adjacency();
    adj.erase("g3");
    CHECK_THROWS_AS(enclave_fix(Partition(std::vector<int>(6, 0)), g, adj),
                    MissingAdjacencyError);
}

TEST_CASE("the baseline plugs into the same evaluation pipeline") {
    const FlowTable flows = testing::flow_table(
        {{"A", "F1", 10}, {"A", "F2", 3}, {"B", "F2", 8}, {"B", "F1", 1}, {"F1", "F1", 2}});
    const Hpdn g = build_hpdn(flows);
    const Partition p = plurality_assign(flows, g, degenerate_town_map(flows));
    const DelineationReport report = evaluate_partition(flows, g, p, 100, 3);
    for (const auto& m : report.per_community) {
        if (m.li) {
            CHECK(*m.li >= 0.0);
            CHECK(*m.li <= 1.0);
        }
        if (m.conductance) {
            CHECK(*m.conductance >= 0.0);
            CHECK(*m.conductance <= 1.0);
        }
    }
}
