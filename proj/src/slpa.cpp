#include <vector>

#include "hsadet/detect.hpp"
#include "hsadet/errors.hpp"
#include "hsadet/rng.hpp"

namespace hsadet {

// Speaker-listener label propagation. Every node keeps a memory of adopted
// labels (its own unique label to start). Each round, in seeded random
// order, a listener hears one label from every neighbor -- the neighbor
// speaks a uniform sample of its memory -- tallies them weighted by edge
// weight, adopts the heaviest (lowest label id on ties) and appends it to
// memory. The memories are then collapsed to one label per node: labels
// below the frequency threshold r are dropped and the most frequent
// survivor wins.
Partition slpa(const Hpdn& g, const DetectConfig& config) {
    const int n = g.node_count();
    if (n == 0) throw EmptyGraphError("slpa on empty graph");

    Rng rng(config.seed);
    const int iterations = std::max(1, config.slpa_iterations);

    std::vector<std::vector<int>> memory(n);
    for (int i = 0; i < n; ++i) memory[i] = {i};

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;

    std::vector<double> heard(n, 0.0);
    std::vector<int> touched;
    touched.reserve(64);

    for (int round = 0; round < iterations; ++round) {
        rng.shuffle(order);
        for (int idx = 0; idx < n; ++idx) {
            const int i = order[idx];
            auto nbrs = g.neighbors(i);
            if (nbrs.empty()) {
                // isolated node: nothing to hear, keep its own label alive
                memory[i].push_back(memory[i].front());
                continue;
            }
            touched.clear();
            for (const auto& e : nbrs) {
                const auto& mem = memory[e.neighbor];
                const int spoken = mem[rng.below(mem.size())];
                if (heard[spoken] == 0.0) touched.push_back(spoken);
                heard[spoken] += e.weight;
            }
            int best = touched.front();
            for (int label : touched) {
                if (heard[label] > heard[best] ||
                    (heard[label] == heard[best] && label < best)) {
                    best = label;
                }
            }
            memory[i].push_back(best);
            for (int label : touched) heard[label] = 0.0;
        }
    }

    // post-processing: threshold, then the max-frequency surviving label
    const double r = config.slpa_threshold;
    std::vector<int> counts(n, 0);
    std::vector<int> assignment(n);
    for (int i = 0; i < n; ++i) {
        touched.clear();
        for (int label : memory[i]) {
            if (counts[label] == 0) touched.push_back(label);
            ++counts[label];
        }
        const double mem_size = static_cast<double>(memory[i].size());
        int best = -1;
        int best_all = touched.front();
        for (int label : touched) {
            if (counts[label] > counts[best_all] ||
                (counts[label] == counts[best_all] && label < best_all)) {
                best_all = label;
            }
            if (static_cast<double>(counts[label]) < r * mem_size) continue;
            if (best < 0 || counts[label] > counts[best] ||
                (counts[label] == counts[best] && label < best)) {
                best = label;
            }
        }
        assignment[i] = best >= 0 ? best : best_all;
        for (int label : touched) counts[label] = 0;
    }
    return Partition(std::move(assignment));
}

} // namespace hsadet
