#include "stepfit/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace stepfit {

namespace {

double draw_weight(SplitMix64& rng, const std::string& mode) {
    if (mode == "uniform") return rng.uniform(0.5, 2.0);
    if (mode == "heavy") {
        // Mostly moderate weights with a heavy-tailed minority.
        if (rng.uniform() < 0.85) return rng.uniform(0.5, 2.0);
        return rng.uniform(20.0, 200.0);
    }
    throw std::runtime_error("unknown weight mode '" + mode + "'");
}

void gen_random(const GenSpec& spec, SplitMix64& rng,
                std::vector<WeightedPoint>& pts) {
    for (std::size_t i = 0; i < spec.n; ++i) {
        WeightedPoint p;
        p.x = rng.uniform(0.0, 100.0);
        p.y = rng.uniform(0.0, 100.0);
        p.w = draw_weight(rng, spec.weights);
        pts.push_back(p);
    }
}

void gen_staircase(const GenSpec& spec, SplitMix64& rng,
                   std::vector<WeightedPoint>& pts) {
    // k plateaus of roughly equal width with mild vertical noise.
    std::size_t k = spec.k == 0 ? 1 : spec.k;
    std::vector<double> levels(k);
    for (std::size_t j = 0; j < k; ++j) levels[j] = rng.uniform(0.0, 100.0);
    for (std::size_t i = 0; i < spec.n; ++i) {
        WeightedPoint p;
        p.x = rng.uniform(0.0, 100.0);
        std::size_t j = static_cast<std::size_t>(p.x / (100.0 / k));
        if (j >= k) j = k - 1;
        p.y = levels[j] + rng.uniform(-2.0, 2.0);
        p.w = draw_weight(rng, spec.weights);
        pts.push_back(p);
    }
}

void gen_adversarial(const GenSpec& spec, SplitMix64& rng,
                     std::vector<WeightedPoint>& pts) {
    // Ties everywhere: x collapsed onto a coarse grid so many points share a
    // column, y values drawn from a small palette so duplicates are common,
    // weights spanning several orders of magnitude.
    std::size_t cols = spec.n / 4 + 1;
    std::size_t palette = spec.k + 3;
    std::vector<double> ys(palette);
    for (std::size_t j = 0; j < palette; ++j) ys[j] = rng.uniform(-50.0, 50.0);
    for (std::size_t i = 0; i < spec.n; ++i) {
        WeightedPoint p;
        p.x = static_cast<double>(rng.below(cols));
        p.y = ys[rng.below(palette)];
        if (rng.uniform() < 0.2) p.y += rng.uniform(-1.0, 1.0);
        double e = rng.uniform(-3.0, 3.0);
        p.w = std::pow(10.0, e);
        if (spec.weights == "uniform") p.w = rng.uniform(0.5, 2.0);
        pts.push_back(p);
    }
}

}  // namespace

std::vector<WeightedPoint> generate_points(const GenSpec& spec) {
    if (spec.n == 0) throw std::runtime_error("generator: n must be positive");
    SplitMix64 rng(spec.seed);
    std::vector<WeightedPoint> pts;
    pts.reserve(spec.n);
    if (spec.profile == "random") {
        gen_random(spec, rng, pts);
    } else if (spec.profile == "staircase") {
        gen_staircase(spec, rng, pts);
    } else if (spec.profile == "adversarial") {
        gen_adversarial(spec, rng, pts);
    } else {
        throw std::runtime_error("unknown profile '" + spec.profile + "'");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].id = static_cast<int>(i);
    return pts;
}

}  // namespace stepfit
