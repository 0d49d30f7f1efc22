#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stepfit/types.hpp"

namespace stepfit {

// SplitMix64: tiny, portable, deterministic across platforms.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t state_;
};

struct GenSpec {
    std::size_t n = 100;
    std::size_t k = 3;
    std::uint64_t seed = 1;
    std::string weights = "uniform";  // uniform | heavy
    std::string profile = "random";   // random | staircase | adversarial
};

// Deterministic instance generation: same spec -> same points, bit for bit.
std::vector<WeightedPoint> generate_points(const GenSpec& spec);

}  // namespace stepfit
