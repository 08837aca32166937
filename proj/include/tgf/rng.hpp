// Counter-based random number generation.
//
// Every draw is a pure function of (seed, stream tag, counters), so ensembles
// parallelize without any sequence coordination and replays are exact.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace tgf {

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d = 0) {
    std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    h = splitmix64(h ^ d);
    return h;
}

// uniform in (0,1), never exactly 0 or 1
inline double to_u01(std::uint64_t h) { return (h >> 11) * 0x1.0p-53 + 0x1.0p-54; }

// standard normal via Box-Muller on two hashed uniforms
inline double standard_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d = 0) {
    const double u1 = to_u01(hash_key(seed, a, b, c, 2 * d));
    const double u2 = to_u01(hash_key(seed, a, b, c, 2 * d + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// stream tags; keep disjoint so independent uses never collide
enum Tag : std::uint64_t {
    kWienerBase = 0x10,
    kWienerBridge = 0x20,
    kPathSeed = 0x30,
    kStateSample = 0x40,
    kInitialCondition = 0x50,
    kConstants = 0x60,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag) {
    return hash_key(master, tag, index, 0x9E3779B97F4A7C15ULL);
}

}  // namespace rng

// Wiener increments on dyadic refinements of a base step.
//
// Level 0 increments over [s*dt0, (s+1)*dt0] are raw N(0, dt0) draws keyed by
// (seed, step, channel). Finer levels split a parent increment by a Brownian
// bridge: the two children are parent/2 +- xi with xi ~ N(0, h/4), so they
// sum to the parent exactly and are independent N(0, h/2). Any coarse path is
// therefore the pairwise sum of the next finer one.
class BrownianTree {
  public:
    BrownianTree(std::uint64_t seed, int channels, double dt0)
        : seed_(seed), channels_(channels), dt0_(dt0) {}

    int channels() const { return channels_; }
    double dt(int level) const { return dt0_ / static_cast<double>(std::int64_t{1} << level); }

    double increment(int level, std::int64_t step, int channel) const {
        if (level == 0)
            return rng::standard_normal(seed_, rng::kWienerBase, static_cast<std::uint64_t>(step), channel) *
                   std::sqrt(dt0_);
        const double parent = increment(level - 1, step >> 1, channel);
        const double h = dt(level - 1);
        const double xi = rng::standard_normal(seed_, rng::kWienerBridge + static_cast<std::uint64_t>(level),
                                               static_cast<std::uint64_t>(step >> 1), channel) *
                          std::sqrt(h / 4.0);
        // odd child is the exact floating-point complement of the even one
        const double even_child = parent / 2.0 + xi;
        return ((step & 1) == 0) ? even_child : parent - even_child;
    }

    std::vector<double> increments(int level, std::int64_t step) const {
        std::vector<double> out(channels_);
        for (int k = 0; k < channels_; ++k)
            out[k] = increment(level, step, k);
        return out;
    }

  private:
    std::uint64_t seed_;
    int channels_;
    double dt0_;
};

// Base-level increments: m i.i.d. N(0, dt) draws, pure in (seed, step, channel).
inline std::vector<double> wiener_increments(std::uint64_t seed, std::int64_t step, int m, double dt) {
    if (dt <= 0.0)
        throw std::invalid_argument("wiener_increments: dt must be positive");
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k)
        out[k] = rng::standard_normal(seed, rng::kWienerBase, static_cast<std::uint64_t>(step), k) * std::sqrt(dt);
    return out;
}

}  // namespace tgf
