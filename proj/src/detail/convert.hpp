#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "detail/engine.hpp"
#include "stepfit/types.hpp"

namespace stepfit::detail {

// Internal working form: +0.0-normalized coordinates; the squared model maps
// onto the linear engine via w -> sqrt(w) (same minimizers, squared report).
inline std::vector<Pt> to_pts(std::span<const WeightedPoint> pts, CostModel model) {
    std::vector<Pt> out;
    out.reserve(pts.size());
    for (const WeightedPoint& p : pts) {
        double w = (model == CostModel::Squared) ? std::sqrt(p.w) : p.w;
        out.push_back({p.x + 0.0, p.y + 0.0, w, p.id});
    }
    return out;
}

inline double report_cost(double linear_cost, CostModel model) {
    return (model == CostModel::Squared) ? linear_cost * linear_cost : linear_cost;
}

}  // namespace stepfit::detail
