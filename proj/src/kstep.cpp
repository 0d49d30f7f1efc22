#include "stepfit/kstep.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_set>

#include "detail/convert.hpp"
#include "detail/engine.hpp"

namespace stepfit {

PartitionScheme equal_size_partition(std::span<const WeightedPoint> pts,
                                     std::size_t k) {
    validate_points(pts);
    std::size_t n = pts.size();
    if (k < 1) throw std::invalid_argument("equal_size_partition: k must be >= 1");
    k = std::min(k, std::max<std::size_t>(n, 1));
    PartitionScheme sc;
    sc.boundaries.reserve(k + 1);
    sc.boundaries.push_back(0);
    std::size_t base = n / k, extra = n % k;
    std::size_t pos = 0;
    for (std::size_t h = 0; h < k; ++h) {
        pos += base + (h < extra ? 1 : 0);
        sc.boundaries.push_back(pos);
    }
    return sc;
}

FeasibilityWitness feasibility_test(std::span<const WeightedPoint> pts, double d,
                                    std::size_t k) {
    validate_points(pts);
    if (k < 1) throw std::invalid_argument("feasibility_test: k must be >= 1");
    FeasibilityWitness out;
    std::vector<detail::Pt> work = detail::to_pts(pts, CostModel::Linear);
    // A few ulps of outward padding so a level that is exactly achievable
    // (e.g. the reported optimum itself) never reads infeasible through the
    // inward rounding of the per-point height intervals.
    detail::FeasResult fr = detail::feas_test(work, d * (1.0 + 6e-16),
                                              static_cast<int>(k), detail::Anchors{});
    out.feasible = fr.feasible;
    if (fr.feasible && !work.empty())
        out.steps = detail::plan_to_stepfunction(work, fr.plan, k);
    return out;
}

std::size_t find_big_partition(std::span<const WeightedPoint> pts,
                               const PartitionScheme& scheme, std::size_t k,
                               CostModel model) {
    validate_points(pts);
    if (pts.empty())
        throw std::invalid_argument("find_big_partition: empty point set");
    if (scheme.bucket_count() != k || k < 1)
        throw std::invalid_argument("find_big_partition: scheme does not match k");
    if (k == 1) return 1;

    std::vector<detail::Pt> work = detail::to_pts(pts, model);
    std::sort(work.begin(), work.end(), [](const detail::Pt& a, const detail::Pt& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.id < b.id;
    });
    // Step segments cannot split a run of equal x, so every probe prefix is
    // closed upward to the end of the run containing its last point; the
    // spanned bucket is certified together with those run extensions.
    std::vector<std::size_t> closed(scheme.boundaries);
    for (std::size_t j = 1; j < closed.size(); ++j)
        while (closed[j] < work.size() &&
               work[closed[j]].x == work[closed[j] - 1].x)
            ++closed[j];
    auto prefix = [&](std::size_t j) {
        return std::vector<detail::Pt>(
            work.begin(), work.begin() + static_cast<std::ptrdiff_t>(closed[j]));
    };
    detail::Anchors none;
    int ki = static_cast<int>(k);

    // When the probe ties, the optimum is hit exactly; some bucket is then
    // contained in one greedy-maximal segment of a witness at that level.
    auto spanned_scan = [&](double level) -> std::size_t {
        detail::FeasResult fr =
            detail::feas_test(work, level * (1.0 + 1e-12), ki, none);
        if (!fr.feasible) return 1;
        for (std::size_t j = 1; j <= k; ++j) {
            std::size_t lo = scheme.boundaries[j - 1], hi = scheme.boundaries[j];
            if (hi == lo) continue;
            double xa = work[lo].x, xb = work[hi - 1].x;
            std::size_t sa = static_cast<std::size_t>(
                std::upper_bound(fr.plan.cuts.begin(), fr.plan.cuts.end(), xa) -
                fr.plan.cuts.begin());
            std::size_t sb = static_cast<std::size_t>(
                std::upper_bound(fr.plan.cuts.begin(), fr.plan.cuts.end(), xb) -
                fr.plan.cuts.begin());
            if (sa == sb) return j;
        }
        return 1;
    };

    double d1 = detail::oc_solve(prefix(1), nullptr).cost;
    detail::ProbeOutcome p1 = detail::probe(work, d1, ki, none);
    if (p1 == detail::ProbeOutcome::Infeasible) return 1;
    if (p1 == detail::ProbeOutcome::Tie) return spanned_scan(d1);
    if (k == 2) return 2;

    double dp = detail::solve_steps(prefix(k - 1), ki - 1, none, nullptr, true).cost;
    detail::ProbeOutcome pp = detail::probe(work, dp, ki, none);
    if (pp == detail::ProbeOutcome::Tie) return spanned_scan(dp);
    if (pp == detail::ProbeOutcome::Feasible) return k;

    std::size_t flo = 1, fhi = k - 1;
    while (fhi - flo > 1) {
        std::size_t md = (flo + fhi) / 2;
        double dm =
            detail::solve_steps(prefix(md), static_cast<int>(md), none, nullptr, true)
                .cost;
        detail::ProbeOutcome pm = detail::probe(work, dm, ki, none);
        if (pm == detail::ProbeOutcome::Tie) return spanned_scan(dm);
        if (pm == detail::ProbeOutcome::Feasible)
            flo = md;
        else
            fhi = md;
    }
    return fhi;
}

std::vector<WeightedPoint> prune_big(std::span<const WeightedPoint> pts,
                                     const PartitionScheme& scheme, std::size_t j,
                                     std::size_t k, CostModel model) {
    validate_points(pts);
    if (pts.empty()) throw std::invalid_argument("prune_big: empty point set");
    if (j < 1 || j > scheme.bucket_count() || scheme.bucket_count() != k)
        throw std::invalid_argument("prune_big: bucket index out of range");

    std::vector<WeightedPoint> unchanged(pts.begin(), pts.end());
    std::vector<detail::Pt> work = detail::to_pts(pts, model);
    std::unordered_set<int> alive;

    if (k == 1) {
        // Degenerate case: one elimination round of the 1-center solver.
        if (work.size() <= 32) return unchanged;
        detail::Classified cl = detail::classify_set(std::move(work));
        if (!cl.ok) return unchanged;
        std::vector<std::size_t> drops;
        detail::Side su = detail::side_exact(cl.kept, cl.rank_upper);
        if (su == detail::Side::Optimal) return unchanged;
        if (su == detail::Side::Above) {
            drops = detail::drops_above(cl, cl.rank_upper);
        } else {
            detail::Side sl = detail::side_exact(cl.kept, cl.rank_lower);
            if (sl == detail::Side::Optimal) return unchanged;
            drops = (sl == detail::Side::Below)
                        ? detail::drops_below(cl, cl.rank_lower)
                        : detail::drops_between(cl, cl.rank_lower, cl.rank_upper);
        }
        if (cl.dup_removed + drops.size() == 0) return unchanged;
        std::vector<char> dead(cl.kept.size(), 0);
        for (std::size_t d : drops) dead[d] = 1;
        for (std::size_t i = 0; i < cl.kept.size(); ++i)
            if (!dead[i]) alive.insert(cl.kept[i].id);
    } else {
        // The engine recomputes the certified bucket on its run-closed version
        // of the equal partition; j is taken as the caller's certificate that
        // a prunable bucket exists.
        detail::RoundResult rr =
            detail::prune_round(work, static_cast<int>(k), detail::Anchors{}, nullptr);
        if (rr.terminal || rr.removed == 0) return unchanged;
        for (const detail::Pt& p : work) alive.insert(p.id);
    }

    std::vector<WeightedPoint> out;
    out.reserve(alive.size());
    for (const WeightedPoint& p : pts)
        if (alive.count(p.id)) out.push_back(p);
    return out;
}

FitReport k_step(std::span<const WeightedPoint> pts, std::size_t k,
                 CostModel model) {
    validate_points(pts);
    if (pts.empty()) throw std::invalid_argument("k_step: empty point set");
    if (k < 1) throw std::invalid_argument("k_step: k must be >= 1");
    auto t0 = std::chrono::steady_clock::now();

    std::vector<detail::Pt> work = detail::to_pts(pts, model);
    std::size_t kr = std::min(k, work.size());  // reported segment count
    std::size_t ks = std::min(kr, detail::run_count(work));

    detail::Diag diag;
    detail::Plan plan =
        detail::solve_steps(work, static_cast<int>(ks), detail::Anchors{}, &diag,
                            false);
    // Refit the level on the full original set: internal plans may describe a
    // pruned subset, and the greedy witness also yields midpoint heights.
    detail::Plan refit =
        detail::finalize_at(work, plan.cost, static_cast<int>(ks), detail::Anchors{});

    FitReport rep;
    rep.cost = detail::report_cost(refit.cost, model);
    rep.fit = detail::plan_to_stepfunction(work, refit, kr);
    rep.diagnostics.rounds = diag.rounds;
    rep.diagnostics.pruned_per_round = std::move(diag.pruned_per_round);
    rep.diagnostics.big_partition_indices = std::move(diag.big_indices);
    rep.diagnostics.prune_log = std::move(diag.events);
    rep.diagnostics.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  t0)
            .count();
    return rep;
}

}  // namespace stepfit
