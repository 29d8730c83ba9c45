#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace hsadet {

// splitmix64, used to turn (seed, stream) pairs into well-mixed engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random source. The engine (mt19937_64) has fully specified
// output, and the derived draws below avoid std:: distributions, whose
// results are implementation-defined. Same seed, same platform or not,
// same sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Derive an independent substream, e.g. one per bootstrap replicate.
    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
    }

    std::uint64_t u64() { return engine_(); }

    // Unbiased integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
        std::uint64_t x;
        do {
            x = u64();
        } while (x > limit);
        return x % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Poisson draw by Knuth's product method; means above 60 are split into
    // additive chunks to keep exp(-mean) away from underflow.
    std::int64_t poisson(double mean) {
        std::int64_t total = 0;
        while (mean > 60.0) {
            total += poisson_knuth(60.0);
            mean -= 60.0;
        }
        if (mean > 0.0) total += poisson_knuth(mean);
        return total;
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[below(i)]);
        }
    }

private:
    std::int64_t poisson_knuth(double mean) {
        const double threshold = std::exp(-mean);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= real01();
        } while (p > threshold);
        return k - 1;
    }

    std::mt19937_64 engine_;
};

} // namespace hsadet
