#include "stepfit/one_center.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "detail/convert.hpp"
#include "detail/engine.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/selection.hpp"

namespace stepfit {

PairClassification classify_pairs(std::span<const WeightedPoint> pts) {
    validate_points(pts);
    PairClassification cl;
    std::vector<WeightedPoint> sorted(pts.begin(), pts.end());
    std::sort(sorted.begin(), sorted.end(), xy_less);

    // Duplicate-ordinate reduction: of two points sharing y, the lighter one
    // is dominated at every height (ids break exact weight ties).
    std::unordered_map<double, std::size_t> by_y;
    by_y.reserve(sorted.size() * 2);
    for (const WeightedPoint& p : sorted) {
        auto it = by_y.find(p.y + 0.0);
        if (it == by_y.end()) {
            by_y.emplace(p.y + 0.0, cl.kept.size());
            cl.kept.push_back(p);
            continue;
        }
        WeightedPoint& q = cl.kept[it->second];
        if (p.w > q.w || (p.w == q.w && p.id < q.id)) {
            cl.duplicate_drops.push_back(q);
            q = p;
        } else {
            cl.duplicate_drops.push_back(p);
        }
    }
    if (cl.kept.size() < 2)
        throw std::invalid_argument(
            "classify_pairs: need at least 2 points after duplicate reduction");
    // Replacement can leave a survivor at its duplicate's earlier slot.
    std::sort(cl.kept.begin(), cl.kept.end(), xy_less);

    std::size_t np = cl.kept.size() / 2;
    std::vector<double> uppers(np), lowers(np);
    cl.pairs.reserve(np);
    for (std::size_t i = 0; i < np; ++i) {
        const WeightedPoint& a = cl.kept[2 * i];
        const WeightedPoint& b = cl.kept[2 * i + 1];
        BisectorPair bp = bisectors(a, b, CostModel::Linear);
        cl.pairs.push_back({a, b, bp.lower, bp.upper, false, false, false, false});
        lowers[i] = bp.lower;
        uppers[i] = bp.upper;
    }
    std::size_t r = (np + 2) / 3;  // ceil(np / 3)
    nth_smallest(uppers.begin(), uppers.end(), r - 1);
    cl.u = uppers[r - 1];
    nth_smallest(lowers.begin(), lowers.end(), np - r);
    cl.l = lowers[np - r];
    for (ClassifiedPair& pr : cl.pairs) {
        pr.upper_low_third = pr.upper <= cl.u;
        pr.upper_high_two_thirds = pr.upper >= cl.u;
        pr.lower_high_third = pr.lower >= cl.l;
        pr.lower_low_two_thirds = pr.lower <= cl.l;
    }
    return cl;
}

SideReport side_of_critical(std::span<const WeightedPoint> pts, double y,
                            CostModel model) {
    double c = 0.0;
    for (const WeightedPoint& p : pts) c = std::max(c, point_cost(p, y, model));
    double band = kDefaultTol * (1.0 + c);
    bool above = false, below = false;
    for (const WeightedPoint& p : pts) {
        if (point_cost(p, y, model) < c - band) continue;
        if (p.y > y) above = true;
        else if (p.y < y) below = true;
        else return SideReport::Both;  // critical point sitting on the height
    }
    if (above && below) return SideReport::Both;
    return above ? SideReport::Above : SideReport::Below;
}

std::vector<WeightedPoint> prune_one_sixth(std::span<const WeightedPoint> pts,
                                           const PairClassification& cl,
                                           SideReport side_u, SideReport side_l) {
    if (side_u == SideReport::Both || side_l == SideReport::Both)
        throw std::invalid_argument(
            "prune_one_sixth: a Both report already identifies the optimum");

    std::unordered_set<int> dead;
    for (const WeightedPoint& p : cl.duplicate_drops) dead.insert(p.id);

    auto drop_lighter = [&](const ClassifiedPair& pr, bool higher_on_tie) {
        if (pr.a.w < pr.b.w) dead.insert(pr.a.id);
        else if (pr.b.w < pr.a.w) dead.insert(pr.b.id);
        else if ((pr.a.y > pr.b.y) == higher_on_tie) dead.insert(pr.a.id);
        else dead.insert(pr.b.id);
    };

    if (side_u == SideReport::Above) {
        // Optimum above U: in pairs whose crossings end at or below U the
        // heavier ray dominates from there up.
        for (const ClassifiedPair& pr : cl.pairs)
            if (pr.upper_low_third) drop_lighter(pr, true);
    } else if (side_l == SideReport::Below) {
        for (const ClassifiedPair& pr : cl.pairs)
            if (pr.lower_high_third) drop_lighter(pr, false);
    } else {
        // Optimum between L and U: pairs whose crossing interval covers the
        // midpoint keep a fixed dominance order there.
        double hbar = 0.5 * (cl.l + cl.u);
        for (const ClassifiedPair& pr : cl.pairs) {
            if (!(pr.upper_high_two_thirds && pr.lower_low_two_thirds)) continue;
            if (!(pr.lower < hbar && hbar < pr.upper)) continue;
            double ca = point_cost(pr.a, hbar);
            double cb = point_cost(pr.b, hbar);
            if (ca < cb) dead.insert(pr.a.id);
            else if (cb < ca) dead.insert(pr.b.id);
            else dead.insert(std::min(pr.a.id, pr.b.id));
        }
    }

    std::vector<WeightedPoint> out;
    out.reserve(pts.size() - dead.size());
    for (const WeightedPoint& p : pts)
        if (!dead.count(p.id)) out.push_back(p);
    return out;
}

OneCenterResult weighted_one_center(std::span<const WeightedPoint> pts,
                                    CostModel model,
                                    std::vector<PruneEvent>* events) {
    validate_points(pts);
    if (pts.empty())
        throw std::invalid_argument("weighted_one_center: empty point set");
    detail::Diag diag;
    detail::OcResult r =
        detail::oc_solve(detail::to_pts(pts, model), events ? &diag : nullptr);
    if (events)
        events->insert(events->end(), diag.events.begin(), diag.events.end());
    return {r.height, detail::report_cost(r.cost, model)};
}

}  // namespace stepfit
