#include "stepfit/cost.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace stepfit {

void validate_points(std::span<const WeightedPoint> pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.w))
            throw std::invalid_argument("point " + std::to_string(i) +
                                        ": nonfinite coordinate or weight");
        if (p.w <= 0.0)
            throw std::invalid_argument("point " + std::to_string(i) + ": weight " +
                                        std::to_string(p.w) + " must be positive");
    }
    // ids must be unique; they are the deterministic tie-breaker of last resort
    std::vector<int> ids;
    ids.reserve(pts.size());
    for (const auto& p : pts) ids.push_back(p.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (ids[i] == ids[i - 1])
            throw std::invalid_argument("duplicate point id " + std::to_string(ids[i]));
}

double point_cost(const WeightedPoint& p, double y, CostModel model) {
    double d = std::abs(p.y - y);
    return model == CostModel::Linear ? d * p.w : d * d * p.w;
}

double set_cost(std::span<const WeightedPoint> q, const StepFunction& f, CostModel model) {
    double worst = 0.0;
    for (const auto& p : q)
        worst = std::max(worst, point_cost(p, f.value(p.x), model));
    return worst;
}

std::vector<WeightedPoint> critical_points(std::span<const WeightedPoint> q,
                                           const StepFunction& f, CostModel model,
                                           double tol) {
    double worst = set_cost(q, f, model);
    std::vector<WeightedPoint> out;
    for (const auto& p : q)
        if (point_cost(p, f.value(p.x), model) >= worst - tol * (1.0 + worst))
            out.push_back(p);
    return out;
}

BisectorPair bisectors(const WeightedPoint& p, const WeightedPoint& q, CostModel model) {
    // Squared costs order heights exactly as linear costs with weight sqrt(w),
    // so the crossing heights coincide with the transformed linear ones.
    double wp = p.w, wq = q.w;
    if (model == CostModel::Squared) {
        wp = std::sqrt(wp);
        wq = std::sqrt(wq);
    }
    if (p.y == q.y && wp == wq)
        throw std::invalid_argument("bisectors: identical cost rays (equal y and w); "
                                    "drop one of the points instead");

    // The two V-shaped cost graphs wp*|y-p.y| and wq*|y-q.y| cross once between
    // the ordinates and, when weights differ, once more on the heavier point's
    // far side.
    double between = (wp * p.y + wq * q.y) / (wp + wq);
    if (wp == wq) return {between, between};
    double outside = (wp * p.y - wq * q.y) / (wp - wq);
    return {std::min(between, outside), std::max(between, outside)};
}

}  // namespace stepfit
