#include "stepfit/anchored.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "detail/convert.hpp"
#include "detail/engine.hpp"
#include "stepfit/cost.hpp"

namespace stepfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared engine-to-public path: solve, then refit the resulting level on the
// full original set so the reported plan is always achieved by the fit.
AnchoredFit solve_anchored(std::span<const WeightedPoint> pts, int steps,
                           const detail::Anchors& anc, CostModel model) {
    validate_points(pts);
    if (pts.empty())
        throw std::invalid_argument("anchored solve: empty point set");
    if (steps < 1) throw std::invalid_argument("anchored solve: steps must be >= 1");
    std::vector<detail::Pt> work = detail::to_pts(pts, model);
    detail::Plan plan = detail::solve_steps(work, steps, anc, nullptr, false);
    detail::Plan refit = detail::finalize_at(work, plan.cost, steps, anc);
    AnchoredFit out;
    out.fit = detail::plan_to_stepfunction(work, refit,
                                           static_cast<std::size_t>(steps));
    out.cost = detail::report_cost(refit.cost, model);
    return out;
}

}  // namespace

std::pair<double, double> eval_g_h(std::span<const WeightedPoint> pts, double x,
                                   double a, double b, CostModel model) {
    double g = 0.0, h = 0.0;
    for (const WeightedPoint& p : pts) {
        if (p.x <= x)
            g = std::max(g, point_cost(p, a, model));
        else
            h = std::max(h, point_cost(p, b, model));
    }
    return {g, h};
}

SplitSolution doubly_anchored_two_step(std::span<const WeightedPoint> pts, double a,
                                       double b, CostModel model,
                                       bool maximal_left) {
    validate_points(pts);
    if (pts.empty())
        throw std::invalid_argument("doubly_anchored_two_step: empty point set");
    (void)maximal_left;  // the canonical split is already the maximal one
    std::vector<detail::Pt> work = detail::to_pts(pts, model);
    detail::Split2 s2 = detail::doubly2(work, a, b);
    SplitSolution out;
    out.boundary = s2.left_count;
    out.left_cost = detail::report_cost(s2.left_cost, model);
    out.right_cost = detail::report_cost(s2.right_cost, model);
    out.cost = detail::report_cost(s2.cost, model);
    if (s2.left_count == 0) {
        out.x_bar = -kInf;
    } else if (s2.left_count == work.size()) {
        out.x_bar = kInf;
    } else {
        double pred = -kInf;
        for (const detail::Pt& p : work)
            if (p.x < s2.cut) pred = std::max(pred, p.x);
        out.x_bar = 0.5 * (pred + s2.cut);
    }
    return out;
}

AnchoredFit left_anchored_two_step(std::span<const WeightedPoint> pts, double a,
                                   CostModel model) {
    return solve_anchored(pts, 2, {a, std::nullopt}, model);
}

AnchoredFit right_anchored_two_step(std::span<const WeightedPoint> pts, double b,
                                    CostModel model) {
    return solve_anchored(pts, 2, {std::nullopt, b}, model);
}

AnchoredFit anchored_j_step(std::span<const WeightedPoint> pts,
                            const AnchorSpec& anchor, int j, CostModel model) {
    if (anchor.side == AnchorSpec::Side::Both)
        throw std::invalid_argument(
            "anchored_j_step: anchor must be single-sided");
    detail::Anchors anc;
    if (anchor.side == AnchorSpec::Side::Left) {
        if (!anchor.left_value)
            throw std::invalid_argument("anchored_j_step: missing left value");
        anc.left = *anchor.left_value;
    } else {
        if (!anchor.right_value)
            throw std::invalid_argument("anchored_j_step: missing right value");
        anc.right = *anchor.right_value;
    }
    return solve_anchored(pts, j, anc, model);
}

}  // namespace stepfit
