#pragma once

#include <optional>
#include <span>
#include <utility>

#include "stepfit/types.hpp"

namespace stepfit {

// Which extreme segment heights are fixed, and at what values.
struct AnchorSpec {
    enum class Side { Left, Right, Both };
    Side side = Side::Left;
    std::optional<double> left_value;
    std::optional<double> right_value;

    static AnchorSpec left(double a) { return {Side::Left, a, std::nullopt}; }
    static AnchorSpec right(double b) { return {Side::Right, std::nullopt, b}; }
    static AnchorSpec both(double a, double b) { return {Side::Both, a, b}; }
};

// Optimal split of a doubly anchored 2-step fit.
struct SplitSolution {
    std::size_t boundary = 0;  // points in the left part (prefix count in x-order)
    double x_bar = 0.0;        // split abscissa (midpoint; +/-inf at the extremes)
    double cost = 0.0;
    double left_cost = 0.0;    // max cost of the left part against a
    double right_cost = 0.0;   // max cost of the right part against b
};

// Prefix/suffix costs of the split at x: g = max cost of {p.x <= x} against a,
// h = max cost of {p.x > x} against b; empty side costs 0. Single pass.
std::pair<double, double> eval_g_h(std::span<const WeightedPoint> pts, double x,
                                   double a, double b,
                                   CostModel model = CostModel::Linear);

// Minimizes max(g, h) over all n+1 contiguous splits. With maximal_left the
// returned split is the minimizing one with the largest left part (it is the
// canonical answer either way).
SplitSolution doubly_anchored_two_step(std::span<const WeightedPoint> pts, double a,
                                       double b, CostModel model = CostModel::Linear,
                                       bool maximal_left = true);

struct AnchoredFit {
    StepFunction fit;
    double cost = 0.0;
};

// Optimal 2-step fit whose first segment height is fixed at a.
AnchoredFit left_anchored_two_step(std::span<const WeightedPoint> pts, double a,
                                   CostModel model = CostModel::Linear);

// Mirror image of left_anchored_two_step under x-reflection.
AnchoredFit right_anchored_two_step(std::span<const WeightedPoint> pts, double b,
                                    CostModel model = CostModel::Linear);

// Optimal j-step fit with one extreme segment height fixed. The anchor must be
// single-sided; use doubly_anchored_two_step for two fixed heights.
AnchoredFit anchored_j_step(std::span<const WeightedPoint> pts,
                            const AnchorSpec& anchor, int j,
                            CostModel model = CostModel::Linear);

}  // namespace stepfit
