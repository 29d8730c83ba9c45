#pragma once

#include "hsadet/graph.hpp"
#include "hsadet/partition.hpp"

namespace hsadet {

// Weighted Newman modularity,
//   Q = (1/2w') sum_ij (A_ij - s_i s_j / 2w') delta(c_i, c_j)
// with A_ii = 2 * loop weight and s_i the modularity strength, so
// 2w' = sum_i s_i. A graph with zero total strength scores 0. An optional
// resolution factor scales the null term.
double modularity(const Hpdn& g, const Partition& p, double resolution = 1.0);

// Two-level map equation in bits for the undirected walk with stationary
// visit rates p_i = strength(i) / total strength (self-loops once) and module
// exit rates q_c = boundary weight of c / total strength:
//   L = plogp(sum_c q_c) - 2 sum_c plogp(q_c)
//     + sum_c plogp(q_c + p_c) - sum_i plogp(p_i)
// where plogp(x) = x log2 x. A graph with zero total strength scores 0.
double map_equation(const Hpdn& g, const Partition& p);

// Description length components for the degree-corrected block model; see
// docs/block_model_objective.md for the exact formulas. All values in nats.
struct SbmDescriptionLength {
    double likelihood = 0.0; // -log P(A | degrees, block edge counts, blocks)
    double edge_matrix = 0.0;
    double degrees = 0.0;
    double partition = 0.0;

    double model() const { return edge_matrix + degrees + partition; }
    double total() const { return likelihood + model(); }
};

// Weights are treated as integer edge multiplicities; throws
// NonIntegerWeightsError otherwise. Lower is better.
SbmDescriptionLength sbm_description_length_terms(const Hpdn& g, const Partition& p);
double sbm_description_length(const Hpdn& g, const Partition& p);

// Shared validation: p must cover exactly g's node set.
void require_covers(const Hpdn& g, const Partition& p, const char* where);

} // namespace hsadet
