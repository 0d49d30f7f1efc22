#include "detail/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stepfit/selection.hpp"

namespace stepfit::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool xless(const Pt& a, const Pt& b) { return a.x < b.x; }

bool pt_xy_less(const Pt& a, const Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.id < b.id;
}

}  // namespace

double pt_cost(const Pt& p, double h) { return p.w * std::abs(p.y - h); }

double cost_at(const std::vector<Pt>& pts, std::size_t lo, std::size_t hi, double h) {
    double c = 0.0;
    for (std::size_t i = lo; i < hi; ++i) c = std::max(c, pt_cost(pts[i], h));
    return c;
}

std::size_t run_count(const std::vector<Pt>& pts) {
    std::unordered_set<double> xs;
    xs.reserve(pts.size() * 2);
    for (const Pt& p : pts) xs.insert(p.x + 0.0);
    return xs.size();
}

// ---------------------------------------------------------------------------
// Exact 1-center: crossing of the falling and rising cost envelopes.

namespace {

struct Ln {
    double s = 0.0;  // slope
    double c = 0.0;  // intercept
};

double cross_x(const Ln& p, const Ln& q) { return (p.c - q.c) / (q.s - p.s); }

// Upper envelope of lines, left to right ordered (slopes ascending).
std::vector<Ln> upper_hull(std::vector<Ln> ls) {
    std::sort(ls.begin(), ls.end(), [](const Ln& a, const Ln& b) {
        if (a.s != b.s) return a.s < b.s;
        return a.c < b.c;
    });
    std::vector<Ln> h;
    h.reserve(ls.size());
    for (const Ln& l : ls) {
        if (!h.empty() && h.back().s == l.s) h.pop_back();  // same slope, l has max c
        while (h.size() >= 2) {
            const Ln& p = h[h.size() - 2];
            const Ln& q = h.back();
            if (cross_x(p, l) <= cross_x(p, q))
                h.pop_back();
            else
                break;
        }
        h.push_back(l);
    }
    return h;
}

}  // namespace

OcResult oc_env(const std::vector<Pt>& pts, std::size_t lo, std::size_t hi) {
    if (hi <= lo) return {0.0, 0.0};
    if (hi - lo == 1) return {pts[lo].y, 0.0};
    std::vector<Ln> fall, rise;
    fall.reserve(hi - lo);
    rise.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        const Pt& p = pts[i];
        fall.push_back({-p.w, p.w * p.y});
        rise.push_back({p.w, -p.w * p.y});
    }
    std::vector<Ln> ha = upper_hull(std::move(fall));
    std::vector<Ln> hb = upper_hull(std::move(rise));

    // Walk both hulls left to right; rise minus fall is strictly increasing,
    // so the first interval whose linear root lies before the next breakpoint
    // contains the crossing.
    std::size_t ia = 0, ib = 0;
    double h = 0.0;
    for (;;) {
        h = (ha[ia].c - hb[ib].c) / (hb[ib].s - ha[ia].s);
        double na = (ia + 1 < ha.size()) ? cross_x(ha[ia], ha[ia + 1]) : kInf;
        double nb = (ib + 1 < hb.size()) ? cross_x(hb[ib], hb[ib + 1]) : kInf;
        double xn = std::min(na, nb);
        if (!(h > xn)) break;  // root inside the current interval
        if (na <= xn) ++ia;
        if (nb <= xn) ++ib;
    }
    return {h, cost_at(pts, lo, hi, h)};
}

// ---------------------------------------------------------------------------
// Pair classification and the elimination rules built on it.

namespace {

// Crossing heights of two cost rays with distinct ordinates, value-ordered.
std::pair<double, double> ray_crossings(const Pt& a, const Pt& b) {
    double inner = (a.w * a.y + b.w * b.y) / (a.w + b.w);
    if (a.w == b.w) return {inner, inner};
    double outer = (a.w * a.y - b.w * b.y) / (a.w - b.w);
    return {std::min(inner, outer), std::max(inner, outer)};
}

}  // namespace

Classified classify_set(std::vector<Pt> pts) {
    Classified cl;
    cl.kept.reserve(pts.size());
    std::unordered_map<double, std::size_t> by_y;
    by_y.reserve(pts.size() * 2);
    for (const Pt& p : pts) {
        double key = p.y + 0.0;
        auto it = by_y.find(key);
        if (it == by_y.end()) {
            by_y.emplace(key, cl.kept.size());
            cl.kept.push_back(p);
            continue;
        }
        // Same ordinate: the lighter ray is dominated everywhere.
        Pt& q = cl.kept[it->second];
        if (p.w > q.w || (p.w == q.w && p.id < q.id)) q = p;
        ++cl.dup_removed;
    }
    std::size_t m = cl.kept.size();
    if (m < 2) return cl;
    std::size_t np = m / 2;
    cl.pairs.reserve(np);
    std::vector<double> uppers(np), lowers(np);
    for (std::size_t i = 0; i < np; ++i) {
        std::size_t a = 2 * i, b = 2 * i + 1;
        auto [l, u] = ray_crossings(cl.kept[a], cl.kept[b]);
        cl.pairs.push_back({a, b, l, u});
        lowers[i] = l;
        uppers[i] = u;
    }
    std::size_t r = (np + 2) / 3;  // ceil(np / 3)
    nth_smallest(uppers.begin(), uppers.end(), r - 1);
    cl.rank_upper = uppers[r - 1];
    nth_smallest(lowers.begin(), lowers.end(), np - r);
    cl.rank_lower = lowers[np - r];
    cl.ok = true;
    return cl;
}

std::vector<std::size_t> drops_above(const Classified& cl, double u) {
    // Some optimum lies at or above u; beyond both crossings the heavier ray
    // dominates (the lower one when weights tie).
    std::vector<std::size_t> out;
    for (const PairRec& pr : cl.pairs) {
        if (!(pr.upper <= u)) continue;
        const Pt& a = cl.kept[pr.a];
        const Pt& b = cl.kept[pr.b];
        if (a.w < b.w)
            out.push_back(pr.a);
        else if (b.w < a.w)
            out.push_back(pr.b);
        else
            out.push_back(a.y > b.y ? pr.a : pr.b);
    }
    return out;
}

std::vector<std::size_t> drops_below(const Classified& cl, double l) {
    std::vector<std::size_t> out;
    for (const PairRec& pr : cl.pairs) {
        if (!(pr.lower >= l)) continue;
        const Pt& a = cl.kept[pr.a];
        const Pt& b = cl.kept[pr.b];
        if (a.w < b.w)
            out.push_back(pr.a);
        else if (b.w < a.w)
            out.push_back(pr.b);
        else
            out.push_back(a.y < b.y ? pr.a : pr.b);
    }
    return out;
}

std::vector<std::size_t> drops_between(const Classified& cl, double l, double u) {
    // Some optimum lies in [l, u]; pairs whose crossing interval strictly
    // contains the midpoint keep their dominance fixed there, so the cheaper
    // member at the midpoint is dominated throughout.
    double hbar = 0.5 * (l + u);
    std::vector<std::size_t> out;
    for (const PairRec& pr : cl.pairs) {
        if (!(pr.upper >= u && pr.lower <= l)) continue;
        if (!(pr.lower < hbar && hbar < pr.upper)) continue;
        const Pt& a = cl.kept[pr.a];
        const Pt& b = cl.kept[pr.b];
        double ca = pt_cost(a, hbar);
        double cb = pt_cost(b, hbar);
        if (ca < cb)
            out.push_back(pr.a);
        else if (cb < ca)
            out.push_back(pr.b);
        else
            out.push_back(a.id < b.id ? pr.a : pr.b);
    }
    return out;
}

Side side_exact(const std::vector<Pt>& pts, double h) {
    double c = cost_at(pts, 0, pts.size(), h);
    // A ray a few ulps under the maximum is a mathematical tie (probe heights
    // are pair crossings, where two rays meet exactly); treating it as a
    // non-attainer would certify a strict side that does not hold.
    double band = 1e-12 * (1.0 + c);
    bool above = false, below = false;
    for (const Pt& p : pts) {
        if (pt_cost(p, h) < c - band) continue;
        if (p.y > h) above = true;
        else if (p.y < h) below = true;
    }
    if (above && !below) return Side::Above;
    if (below && !above) return Side::Below;
    return Side::Optimal;
}

OcResult oc_solve(std::vector<Pt> pts, Diag* diag) {
    // The elimination rules only preserve the cost function inside the height
    // interval the side tests certify, so the bracket travels with the set and
    // every probe and the final evaluation are clamped into it. Without it a
    // one-ulp tie at a probe height can let the reduced set's minimum escape
    // to heights where a dropped ray was load-bearing.
    double blo = -kInf, bhi = kInf;
    auto at = [](const std::vector<Pt>& v, double h) -> OcResult {
        return {h, cost_at(v, 0, v.size(), h)};
    };
    auto finish = [&](const std::vector<Pt>& v) -> OcResult {
        OcResult r = oc_env(v, 0, v.size());
        double h = std::min(std::max(r.height, blo), bhi);
        return h == r.height ? r : at(v, h);
    };
    for (;;) {
        std::size_t m = pts.size();
        if (m <= 32) return finish(pts);
        Classified cl = classify_set(std::move(pts));
        if (!cl.ok || cl.kept.size() <= 32) return finish(cl.kept);

        std::vector<std::size_t> drops;
        double u = std::min(std::max(cl.rank_upper, blo), bhi);
        Side su = side_exact(cl.kept, u);
        if (su == Side::Optimal) return at(cl.kept, u);
        if (su == Side::Above) {
            if (u >= bhi) return at(cl.kept, bhi);  // cost falls toward the edge
            blo = std::max(blo, u);
            drops = drops_above(cl, u);
        } else {
            if (u <= blo) return at(cl.kept, blo);  // cost rises from the edge
            bhi = std::min(bhi, u);
            double l = std::min(std::max(cl.rank_lower, blo), bhi);
            Side sl = side_exact(cl.kept, l);
            if (sl == Side::Optimal) return at(cl.kept, l);
            if (sl == Side::Below) {
                if (l <= blo) return at(cl.kept, blo);
                bhi = std::min(bhi, l);
                drops = drops_below(cl, l);
            } else {
                if (l >= bhi) return at(cl.kept, bhi);
                blo = std::max(blo, l);
                if (!(l < u)) return finish(cl.kept);  // contradictory probes
                drops = drops_between(cl, l, u);
            }
        }
        std::size_t removed = cl.dup_removed + drops.size();
        if (removed == 0)  // degenerate round: fall back to the exact evaluator
            return finish(cl.kept);
        if (diag)
            diag->events.push_back(
                {PruneEvent::Kind::OneCenter, m, removed, m / 6});
        std::vector<char> dead(cl.kept.size(), 0);
        for (std::size_t d : drops) dead[d] = 1;
        pts.clear();
        pts.reserve(cl.kept.size() - drops.size());
        for (std::size_t i = 0; i < cl.kept.size(); ++i)
            if (!dead[i]) pts.push_back(cl.kept[i]);
    }
}

// ---------------------------------------------------------------------------
// Feasibility: greedy maximal steps over x-runs without global sorting.

namespace {

struct Iv {
    double lo = -kInf;
    double hi = kInf;
};

bool iv_empty(const Iv& v) { return !(v.lo <= v.hi); }

Iv iv_meet_point(Iv v, const Pt& p, double d) {
    v.lo = std::max(v.lo, p.y - d / p.w);
    v.hi = std::min(v.hi, p.y + d / p.w);
    return v;
}

struct Extend {
    std::size_t end = 0;   // first unconsumed position
    double cut_x = kInf;   // x of the first unconsumed run
    Iv iv;                 // allowed heights for the consumed prefix
};

// Consumes the maximal x-prefix of buf[lo, hi) whose height intervals still
// intersect iv, never splitting an x-run. Rearranges the range.
Extend extend_max(std::vector<Pt>& buf, std::size_t lo, std::size_t hi, double d, Iv iv) {
    while (hi - lo > 8) {
        std::size_t mid = lo + (hi - lo) / 2;
        nth_smallest(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                     buf.begin() + static_cast<std::ptrdiff_t>(hi), (hi - lo) / 2, xless);
        double xm = buf[mid].x;
        auto first = buf.begin() + static_cast<std::ptrdiff_t>(lo);
        auto last = buf.begin() + static_cast<std::ptrdiff_t>(hi);
        auto it1 = std::partition(first, last, [xm](const Pt& p) { return p.x < xm; });
        auto it2 = std::partition(it1, last, [xm](const Pt& p) { return p.x == xm; });
        std::size_t a = static_cast<std::size_t>(it1 - buf.begin());
        std::size_t b = static_cast<std::size_t>(it2 - buf.begin());

        Iv ivl = iv;
        for (std::size_t i = lo; i < a; ++i) ivl = iv_meet_point(ivl, buf[i], d);
        if (iv_empty(ivl)) {
            hi = a;  // the break lies left of the median run
            continue;
        }
        Iv ivr = ivl;
        for (std::size_t i = a; i < b; ++i) ivr = iv_meet_point(ivr, buf[i], d);
        if (iv_empty(ivr)) return {a, xm, ivl};  // step ends before the median run
        iv = ivr;
        lo = b;
    }
    std::sort(buf.begin() + static_cast<std::ptrdiff_t>(lo),
              buf.begin() + static_cast<std::ptrdiff_t>(hi), pt_xy_less);
    std::size_t i = lo;
    while (i < hi) {
        std::size_t j = i;
        Iv nxt = iv;
        while (j < hi && buf[j].x == buf[i].x) nxt = iv_meet_point(nxt, buf[j++], d);
        if (iv_empty(nxt)) return {i, buf[i].x, iv};
        iv = nxt;
        i = j;
    }
    return {hi, kInf, iv};
}

}  // namespace

long g_feas_calls = 0;
long g_feas_pts = 0;
long g_bisect_calls = 0;
long g_bisect_pts = 0;
long g_lanch_calls = 0;
long g_lanch_fall_degen = 0;
long g_lanch_fall_tie = 0;
long g_lanch_fall_plateau = 0;
long g_lanch_fall_aeq = 0;
long g_lanch_fall_noprog = 0;
long g_vote_term = 0;
long g_vote_term_bisect = 0;
long g_round_calls = 0;
long g_oc_calls = 0;
long g_small_dp_calls = 0;
long g_small_dp_pts = 0;
long g_solve_calls = 0;
long g_doubly2_calls = 0;

FeasResult feas_test(std::vector<Pt> pts, double d, int steps, const Anchors& anc) {
    ++g_feas_calls;
    g_feas_pts += static_cast<long>(pts.size());
    FeasResult res;
    if (!(d >= 0.0)) return res;
    std::size_t n = pts.size();
    int free_end = steps - (anc.right ? 1 : 0);
    std::vector<double> heights;
    std::vector<double> cuts;
    heights.reserve(static_cast<std::size_t>(steps));
    std::size_t lo = 0;
    for (int t = 1; t <= free_end; ++t) {
        bool pinned = (t == 1 && anc.left.has_value());
        if (lo >= n) {
            double h = pinned ? *anc.left
                              : (heights.empty() ? (anc.left ? *anc.left : 0.0)
                                                 : heights.back());
            heights.push_back(h);
            if (t < steps) cuts.push_back(kInf);
            continue;
        }
        Iv iv = pinned ? Iv{*anc.left, *anc.left} : Iv{};
        Extend er = extend_max(pts, lo, n, d, iv);
        if (er.end == lo && !pinned) return res;  // a run no height can serve
        heights.push_back(pinned ? *anc.left : 0.5 * (er.iv.lo + er.iv.hi));
        if (t < steps) cuts.push_back(er.cut_x);
        lo = er.end;
    }
    if (anc.right) {
        for (std::size_t i = lo; i < n; ++i)
            if (pt_cost(pts[i], *anc.right) > d) return res;
        heights.push_back(*anc.right);
    } else if (lo < n) {
        return res;
    }
    res.feasible = true;
    res.plan = {std::move(heights), std::move(cuts), d};
    return res;
}

double plan_value(const Plan& plan, double x) {
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(plan.cuts.begin(), plan.cuts.end(), x) - plan.cuts.begin());
    return plan.heights[idx];
}

double plan_cost(const std::vector<Pt>& pts, const Plan& plan) {
    double c = 0.0;
    for (const Pt& p : pts) c = std::max(c, pt_cost(p, plan_value(plan, p.x)));
    return c;
}

ProbeOutcome probe(const std::vector<Pt>& pts, double d, int steps, const Anchors& anc) {
    if (d <= 0.0) {
        if (d < 0.0) return ProbeOutcome::Infeasible;
        return feas_test(pts, 0.0, steps, anc).feasible ? ProbeOutcome::Tie
                                                        : ProbeOutcome::Infeasible;
    }
    if (!feas_test(pts, d * (1.0 + 1e-12), steps, anc).feasible)
        return ProbeOutcome::Infeasible;
    if (feas_test(pts, d * (1.0 - 1e-10), steps, anc).feasible)
        return ProbeOutcome::Feasible;
    return ProbeOutcome::Tie;
}

// ---------------------------------------------------------------------------
// Two fixed heights: optimal split threshold by halving the candidate range.
// Phase one narrows to the exact optimal value; phase two finds the largest
// run boundary whose prefix still meets it, which is the largest minimizer
// because the suffix cost only falls as the boundary moves right.

namespace {

struct Part3 {
    std::size_t p1 = 0;  // first index of the median run
    std::size_t p2 = 0;  // first index past the median run
    double xm = 0.0;
};

Part3 median_split(std::vector<Pt>& buf, std::size_t lo, std::size_t hi) {
    nth_smallest(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                 buf.begin() + static_cast<std::ptrdiff_t>(hi), (hi - lo) / 2, xless);
    double xm = buf[lo + (hi - lo) / 2].x;
    auto first = buf.begin() + static_cast<std::ptrdiff_t>(lo);
    auto last = buf.begin() + static_cast<std::ptrdiff_t>(hi);
    auto it1 = std::partition(first, last, [xm](const Pt& p) { return p.x < xm; });
    auto it2 = std::partition(it1, last, [xm](const Pt& p) { return p.x == xm; });
    return {static_cast<std::size_t>(it1 - buf.begin()),
            static_cast<std::size_t>(it2 - buf.begin()), xm};
}

double doubly2_value(std::vector<Pt> buf, double a, double b) {
    std::size_t lo = 0, hi = buf.size();
    double g0 = 0.0, h0 = 0.0;  // committed prefix/suffix costs
    while (hi - lo > 8) {
        Part3 ps = median_split(buf, lo, hi);
        double gr = std::max(g0, cost_at(buf, lo, ps.p2, a));
        double hr = std::max(h0, cost_at(buf, ps.p2, hi, b));
        if (gr <= hr) {  // splitting after the run is no worse: go right
            g0 = gr;
            lo = ps.p2;
            continue;
        }
        double gl = std::max(g0, cost_at(buf, lo, ps.p1, a));
        double hl = std::max(h0, cost_at(buf, ps.p1, hi, b));
        if (gl >= hl || hl < gr) {  // the left candidate is at least as cheap
            h0 = hl;
            hi = ps.p1;
            continue;
        }
        g0 = gr;  // the run's right edge wins outright
        lo = ps.p2;
    }
    std::sort(buf.begin() + static_cast<std::ptrdiff_t>(lo),
              buf.begin() + static_cast<std::ptrdiff_t>(hi), pt_xy_less);
    std::size_t m = hi - lo;
    std::vector<double> suf(m + 1);
    suf[m] = h0;
    for (std::size_t i = m; i > 0; --i)
        suf[i - 1] = std::max(suf[i], pt_cost(buf[lo + i - 1], b));
    double best = std::max(g0, suf[0]);
    double g = g0;
    for (std::size_t i = 0; i < m; ++i) {
        g = std::max(g, pt_cost(buf[lo + i], a));
        bool boundary = (i + 1 == m) || (buf[lo + i + 1].x != buf[lo + i].x);
        if (boundary) best = std::min(best, std::max(g, suf[i + 1]));
    }
    return best;
}

}  // namespace

Split2 doubly2(const std::vector<Pt>& pts, double a, double b) {
    ++g_doubly2_calls;
    double cstar = doubly2_value(pts, a, b);

    // Largest run boundary whose prefix cost against a stays within cstar.
    std::vector<Pt> buf = pts;
    std::size_t n = buf.size();
    std::size_t lo = 0, hi = n;
    double g0 = 0.0;
    std::size_t tstar = 0;
    double gstar = 0.0;
    bool found = false;
    while (hi - lo > 8) {
        Part3 ps = median_split(buf, lo, hi);
        double gr = std::max(g0, cost_at(buf, lo, ps.p2, a));
        if (gr <= cstar) {
            g0 = gr;
            lo = ps.p2;
            continue;
        }
        double gl = std::max(g0, cost_at(buf, lo, ps.p1, a));
        if (gl <= cstar) {  // boundary sits exactly before the median run
            tstar = ps.p1;
            gstar = gl;
            found = true;
            break;
        }
        hi = ps.p1;
    }
    if (!found) {
        std::sort(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                  buf.begin() + static_cast<std::ptrdiff_t>(hi), pt_xy_less);
        tstar = lo;
        gstar = g0;
        double g = g0;
        for (std::size_t i = lo; i < hi; ++i) {
            g = std::max(g, pt_cost(buf[i], a));
            bool boundary = (i + 1 == hi) || (buf[i + 1].x != buf[i].x);
            if (boundary && g <= cstar) {
                tstar = i + 1;
                gstar = g;
            }
        }
    }

    Split2 best{};
    best.left_count = tstar;
    best.left_cost = gstar;
    best.right_cost = cost_at(buf, tstar, n, b);
    best.cost = std::max(best.left_cost, best.right_cost);
    double cut = kInf;
    for (std::size_t i = tstar; i < n; ++i) cut = std::min(cut, buf[i].x);
    best.cut = cut;
    return best;
}

// ---------------------------------------------------------------------------
// Exhaustive DP over runs (exact base case).

Plan small_dp(std::vector<Pt> pts, int steps, const Anchors& anc) {
    ++g_small_dp_calls;
    g_small_dp_pts += static_cast<long>(pts.size());
    std::sort(pts.begin(), pts.end(), pt_xy_less);
    std::size_t n = pts.size();
    std::vector<std::size_t> rpos;  // run start positions, sentinel n
    for (std::size_t i = 0; i < n; ++i)
        if (i == 0 || pts[i].x != pts[i - 1].x) rpos.push_back(i);
    std::size_t nr = rpos.size();
    rpos.push_back(n);

    std::size_t ks = static_cast<std::size_t>(steps);
    // Lazy cache of free-segment interval optima.
    std::vector<OcResult> free_cache((nr + 1) * (nr + 1), OcResult{0.0, -1.0});
    auto free_cost = [&](std::size_t q, std::size_t r) -> const OcResult& {
        OcResult& slot = free_cache[q * (nr + 1) + r];
        if (slot.cost < 0.0) slot = oc_env(pts, rpos[q], rpos[r]);
        return slot;
    };
    auto interval_cost = [&](std::size_t q, std::size_t r, std::size_t t) -> double {
        if (q == r) return 0.0;
        bool pl = (t == 1 && anc.left.has_value());
        bool pr = (t == ks && anc.right.has_value());
        if (pl && pr)
            return std::max(cost_at(pts, rpos[q], rpos[r], *anc.left),
                            cost_at(pts, rpos[q], rpos[r], *anc.right));
        if (pl) return cost_at(pts, rpos[q], rpos[r], *anc.left);
        if (pr) return cost_at(pts, rpos[q], rpos[r], *anc.right);
        return free_cost(q, r).cost;
    };

    std::vector<double> prev(nr + 1, kInf), cur(nr + 1, kInf);
    std::vector<std::size_t> arg((nr + 1) * (ks + 1), 0);
    prev[0] = 0.0;
    for (std::size_t r = 1; r <= nr; ++r) prev[r] = kInf;
    for (std::size_t t = 1; t <= ks; ++t) {
        for (std::size_t r = 0; r <= nr; ++r) {
            double bestv = kInf;
            std::size_t bestq = 0;
            for (std::size_t q = 0; q <= r; ++q) {
                if (prev[q] == kInf) continue;
                double v = std::max(prev[q], interval_cost(q, r, t));
                if (v < bestv) {
                    bestv = v;
                    bestq = q;
                }
            }
            cur[r] = bestv;
            arg[r * (ks + 1) + t] = bestq;
        }
        std::swap(prev, cur);
    }

    // Reconstruct boundaries (run counts per segment prefix).
    std::vector<std::size_t> qs(ks + 1, 0);
    qs[ks] = nr;
    for (std::size_t t = ks; t >= 1; --t) qs[t - 1] = arg[qs[t] * (ks + 1) + t];

    constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> heights(ks, kUnset);
    for (std::size_t t = 1; t <= ks; ++t) {
        bool pl = (t == 1 && anc.left.has_value());
        bool pr = (t == ks && anc.right.has_value());
        std::size_t q = qs[t - 1], r = qs[t];
        if (pl && pr)
            heights[t - 1] = *anc.left;
        else if (pl)
            heights[t - 1] = *anc.left;
        else if (pr)
            heights[t - 1] = *anc.right;
        else if (q < r)
            heights[t - 1] = free_cost(q, r).height;
    }
    // Empty free segments take the next settled height, trailing ones the last.
    double nxt = kUnset;
    for (std::size_t t = ks; t >= 1; --t) {
        if (std::isnan(heights[t - 1]))
            heights[t - 1] = nxt;
        else
            nxt = heights[t - 1];
    }
    double prv = 0.0;
    for (std::size_t t = 0; t < ks; ++t) {
        if (std::isnan(heights[t]))
            heights[t] = prv;
        else
            prv = heights[t];
    }

    std::vector<double> cuts(ks > 0 ? ks - 1 : 0);
    for (std::size_t t = 1; t < ks; ++t)
        cuts[t - 1] = (qs[t] < nr) ? pts[rpos[qs[t]]].x : kInf;
    return {std::move(heights), std::move(cuts), prev[nr]};
}

// ---------------------------------------------------------------------------
// Partition into near-equal buckets closed to run boundaries.

std::vector<std::size_t> partition_closed(std::vector<Pt>& pts, std::size_t buckets) {
    std::size_t n = pts.size();
    std::size_t base = buckets ? n / buckets : 0;
    std::size_t extra = buckets ? n % buckets : 0;
    std::vector<std::size_t> bounds;
    bounds.reserve(buckets + 1);
    bounds.push_back(0);
    std::size_t pos = 0;
    for (std::size_t h = 0; h < buckets; ++h) {
        std::size_t want = base + (h < extra ? 1 : 0);
        std::size_t take = std::min(want, n - pos);
        if (take == 0) {
            bounds.push_back(pos);
            continue;
        }
        nth_smallest(pts.begin() + static_cast<std::ptrdiff_t>(pos), pts.begin() + static_cast<std::ptrdiff_t>(n),
                     take - 1, pt_xy_less);
        double bx = pts[pos + take - 1].x;
        auto mid = std::partition(pts.begin() + static_cast<std::ptrdiff_t>(pos + take),
                                  pts.begin() + static_cast<std::ptrdiff_t>(n),
                                  [bx](const Pt& p) { return p.x == bx; });
        pos = static_cast<std::size_t>(mid - pts.begin());
        bounds.push_back(pos);
    }
    bounds.back() = n;
    return bounds;
}

// ---------------------------------------------------------------------------
// Safety nets.

double upper_level(const std::vector<Pt>& pts, const Anchors& anc) {
    std::size_t n = pts.size();
    if (anc.left && anc.right)
        return std::min(cost_at(pts, 0, n, *anc.left), cost_at(pts, 0, n, *anc.right));
    if (anc.left) return cost_at(pts, 0, n, *anc.left);
    if (anc.right) return cost_at(pts, 0, n, *anc.right);
    return oc_env(pts, 0, n).cost;
}

Plan bisect_solve(const std::vector<Pt>& pts, int steps, const Anchors& anc,
                  double hi_feasible) {
    ++g_bisect_calls;
    g_bisect_pts += static_cast<long>(pts.size());
    FeasResult f0 = feas_test(pts, 0.0, steps, anc);
    if (f0.feasible) {
        f0.plan.cost = plan_cost(pts, f0.plan);
        return f0.plan;
    }
    double hi = hi_feasible;
    if (!(hi > 0.0) || !std::isfinite(hi)) hi = 1.0;
    FeasResult fh = feas_test(pts, hi, steps, anc);
    for (int guard = 0; !fh.feasible && guard < 2200; ++guard) {
        hi *= 4.0;
        fh = feas_test(pts, hi, steps, anc);
    }
    if (!fh.feasible) {
        hi = upper_level(pts, anc) * (1.0 + 1e-9);
        fh = feas_test(pts, hi, steps, anc);
        if (!fh.feasible) {  // cannot happen; return the degenerate witness
            Plan p;
            p.heights.assign(static_cast<std::size_t>(steps),
                             anc.left ? *anc.left : (anc.right ? *anc.right : 0.0));
            p.cuts.assign(static_cast<std::size_t>(steps) - 1, kInf);
            p.cost = plan_cost(pts, p);
            return p;
        }
    }
    double lo = hi;
    for (int guard = 0; guard < 80; ++guard) {
        double half = lo * 0.5;
        FeasResult fr = feas_test(pts, half, steps, anc);
        if (!fr.feasible) break;
        lo = half;
        fh = std::move(fr);
    }
    double blo = lo * 0.5, bhi = lo;
    for (int iter = 0; iter < 200 && bhi / blo > 1.0 + 1e-12; ++iter) {
        double mid = std::sqrt(blo * bhi);
        if (!(mid > blo && mid < bhi)) break;
        FeasResult fr = feas_test(pts, mid, steps, anc);
        if (fr.feasible) {
            bhi = mid;
            fh = std::move(fr);
        } else {
            blo = mid;
        }
    }
    fh.plan.cost = plan_cost(pts, fh.plan);
    return fh.plan;
}

Plan finalize_at(const std::vector<Pt>& pts, double d, int steps, const Anchors& anc) {
    if (!(d >= 0.0)) d = 0.0;
    for (double f : {1.0, 1.0 + 1e-12, 1.0 + 1e-9}) {
        FeasResult fr = feas_test(pts, d * f, steps, anc);
        if (fr.feasible) {
            fr.plan.cost = plan_cost(pts, fr.plan);
            return fr.plan;
        }
    }
    return bisect_solve(pts, steps, anc, d > 0.0 ? d * (1.0 + 1e-9) : 1.0);
}

// ---------------------------------------------------------------------------
// Left-anchored 2-step solver.

namespace {

Pt critical_vs(const std::vector<Pt>& pts, double h) {
    std::size_t best = 0;
    double bc = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double c = pt_cost(pts[i], h);
        if (c > bc || (c == bc && pts[i].id < pts[best].id)) {
            bc = c;
            best = i;
        }
    }
    return pts[best];
}

}  // namespace

Plan lanch2(std::vector<Pt> pts, double a, Diag* diag) {
    ++g_lanch_calls;
    for (;;) {
        std::size_t n = pts.size();
        if (n <= 32 || run_count(pts) <= 4)
            return small_dp(std::move(pts), 2, {a, std::nullopt});

        // Median split on x, closed so the left part owns the median run.
        std::size_t mid = (n - 1) / 2;
        nth_smallest(pts.begin(), pts.end(), mid, xless);
        double xm = pts[mid].x;
        auto it1 = std::partition(pts.begin(), pts.end(),
                                  [xm](const Pt& p) { return p.x < xm; });
        auto it2 = std::partition(it1, pts.end(),
                                  [xm](const Pt& p) { return p.x == xm; });
        std::size_t p2 = static_cast<std::size_t>(it2 - pts.begin());
        bool closure_down = false;
        if (p2 == n) {  // median run is the maximal run; give it to the right
            closure_down = true;
            p2 = static_cast<std::size_t>(it1 - pts.begin());
        }
        std::vector<Pt> left(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(p2));
        std::vector<Pt> right(pts.begin() + static_cast<std::ptrdiff_t>(p2), pts.end());

        double g = cost_at(left, 0, left.size(), a);
        OcResult oc = oc_solve(right, diag);
        if (approx_eq(g, oc.cost, 1e-12)) {
            // The split is pinched between the rising and falling halves.
            double cut = kInf;
            for (const Pt& p : right) cut = std::min(cut, p.x);
            return {{a, oc.height}, {cut}, std::max(g, oc.cost)};
        }
        if (g < oc.cost) {
            // Threshold moves right: the whole left half rides the anchored
            // segment, so only its critical point matters.
            Pt keep = critical_vs(left, a);
            std::size_t removed = left.size() - 1;
            if (removed == 0) {
                ++g_lanch_fall_noprog;
                return bisect_solve(pts, 2, {a, std::nullopt}, cost_at(pts, 0, n, a));
            }
            if (diag)
                diag->events.push_back({PruneEvent::Kind::HalfDiscard, n, removed,
                                        closure_down ? 1 : n / 2 - 1});
            pts.clear();
            pts.reserve(right.size() + 1);
            pts.push_back(keep);
            pts.insert(pts.end(), right.begin(), right.end());
            continue;
        }

        // Threshold stays at or left of the split: the free segment covers all
        // of the right half, so its pairs can be pruned against rank heights.
        std::size_t rsz = right.size();
        Classified cl = classify_set(std::move(right));
        if (!cl.ok) {
            if (cl.dup_removed == 0) {
                ++g_lanch_fall_noprog;
                return bisect_solve(pts, 2, {a, std::nullopt}, cost_at(pts, 0, n, a));
            }
            if (diag)
                diag->events.push_back(
                    {PruneEvent::Kind::PairPrune, rsz, cl.dup_removed, rsz / 6});
            pts = std::move(left);
            pts.insert(pts.end(), cl.kept.begin(), cl.kept.end());
            continue;
        }
        double u = cl.rank_upper, l = cl.rank_lower;
        if (u == l) {
            double du = doubly2(pts, a, u).cost;
            if (probe(pts, du, 2, {a, std::nullopt}) == ProbeOutcome::Tie)
                return finalize_at(pts, du, 2, {a, std::nullopt});
            ++g_lanch_fall_tie;
            return bisect_solve(pts, 2, {a, std::nullopt}, du * (1.0 + 1e-9));
        }

        bool know_le_u = false;  // some optimal free height is at or below u
        std::vector<std::size_t> drops;
        bool resolved = false;

        Split2 su = doubly2(pts, a, u);
        // A degenerate split (empty free side) certifies nothing about which
        // side of u the optimal free height lies on, and neither does an exact
        // tie between the two sides; both fall back to the bisection solver
        // seeded with the achieved split cost.
        if (su.cut == kInf || approx_eq(su.left_cost, su.right_cost, 1e-12)) {
            ++g_lanch_fall_degen;
            return bisect_solve(pts, 2, {a, std::nullopt}, su.cost * (1.0 + 1e-9));
        }
        if (su.right_cost > su.left_cost) {
            bool above = false, below = false;
            double band = 1e-12 * (1.0 + su.right_cost);
            for (const Pt& p : pts) {
                // The free segment of the canonical split covers x >= cut.
                if (p.x < su.cut) continue;
                if (pt_cost(p, u) < su.right_cost - band) continue;
                if (p.y > u) above = true;
                else if (p.y < u) below = true;
            }
            if (above && below)
                return {{a, u}, {su.cut}, su.cost};
            if (above) {
                drops = drops_above(cl, u);
                resolved = true;
            } else if (below) {
                know_le_u = true;
            } else {
                ++g_lanch_fall_aeq;
                return bisect_solve(pts, 2, {a, std::nullopt}, su.cost * (1.0 + 1e-9));
            }
        } else if (a < u) {
            know_le_u = true;  // anchored side binds: the optimum sits on a's side of u
        } else if (a > u) {
            drops = drops_above(cl, u);
            resolved = true;
        } else {
            ++g_lanch_fall_aeq;
            return bisect_solve(pts, 2, {a, std::nullopt}, su.cost * (1.0 + 1e-9));
        }

        if (!resolved && know_le_u) {
            Split2 sl = doubly2(pts, a, l);
            if (sl.cut == kInf || approx_eq(sl.left_cost, sl.right_cost, 1e-12)) {
                ++g_lanch_fall_degen;
                return bisect_solve(pts, 2, {a, std::nullopt}, sl.cost * (1.0 + 1e-9));
            }
            if (sl.right_cost > sl.left_cost) {
                bool above = false, below = false;
                double band = 1e-12 * (1.0 + sl.right_cost);
                for (const Pt& p : pts) {
                    if (p.x < sl.cut) continue;
                    if (pt_cost(p, l) < sl.right_cost - band) continue;
                    if (p.y > l) above = true;
                    else if (p.y < l) below = true;
                }
                if (above && below)
                    return {{a, l}, {sl.cut}, sl.cost};
                if (below) {
                    drops = drops_below(cl, l);
                } else if (above) {
                    // Contradictory probe directions can only come from float
                    // ties; resolve by bisection instead of trusting either.
                    if (l > u) {
                        ++g_lanch_fall_plateau;
                        return bisect_solve(pts, 2, {a, std::nullopt},
                                            std::min(su.cost, sl.cost) * (1.0 + 1e-9));
                    }
                    drops = drops_between(cl, l, u);
                } else {
                    ++g_lanch_fall_aeq;
                    return bisect_solve(pts, 2, {a, std::nullopt}, sl.cost * (1.0 + 1e-9));
                }
            } else if (a < l) {
                drops = drops_below(cl, l);
            } else if (a > l) {
                if (l > u) {
                    ++g_lanch_fall_plateau;
                    return bisect_solve(pts, 2, {a, std::nullopt},
                                        std::min(su.cost, sl.cost) * (1.0 + 1e-9));
                }
                drops = drops_between(cl, l, u);
            } else {
                ++g_lanch_fall_aeq;
                return bisect_solve(pts, 2, {a, std::nullopt}, sl.cost * (1.0 + 1e-9));
            }
        }

        std::size_t removed = cl.dup_removed + drops.size();
        if (removed == 0) {
            ++g_lanch_fall_noprog;
            return bisect_solve(pts, 2, {a, std::nullopt}, cost_at(pts, 0, n, a));
        }
        if (diag)
            diag->events.push_back({PruneEvent::Kind::PairPrune, rsz, removed, rsz / 6});
        std::vector<char> dead(cl.kept.size(), 0);
        for (std::size_t dix : drops) dead[dix] = 1;
        pts = std::move(left);
        for (std::size_t i = 0; i < cl.kept.size(); ++i)
            if (!dead[i]) pts.push_back(cl.kept[i]);
    }
}

// ---------------------------------------------------------------------------
// Reflection helpers (right-anchored problems reuse the left-anchored path).

std::vector<Pt> reflect_x(std::vector<Pt> pts) {
    for (Pt& p : pts) p.x = 0.0 - p.x;
    return pts;
}

Plan unreflect_plan(const Plan& plan, const std::vector<Pt>& original) {
    Plan out;
    out.cost = plan.cost;
    out.heights.assign(plan.heights.rbegin(), plan.heights.rend());
    std::size_t k = plan.heights.size();
    out.cuts.resize(k > 0 ? k - 1 : 0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        double rc = plan.cuts[k - 2 - i];
        double thr = (rc == kInf) ? -kInf : -rc;
        double cut = kInf;
        for (const Pt& p : original)
            if (p.x > thr) cut = std::min(cut, p.x);
        out.cuts[i] = cut;
    }
    return out;
}

// ---------------------------------------------------------------------------
// One certify-and-prune round of the general solver.

namespace {

struct Vote {
    double cost = 0.0;
    bool above = false;
    bool below = false;
};

// Attainer votes of the segment pinned at h, using the minimal pinned span:
// free segments greedily consume the maximal prefix at the side's own level,
// and whatever remains must ride the pinned segment.
void collect_votes(std::vector<Pt> side_pts, int side_steps,
                   const std::optional<double>& outer_left, double h,
                   double side_cost, Vote& v) {
    double level = side_cost * (1.0 + 1e-12);
    std::size_t n = side_pts.size();
    std::size_t lo = 0;
    for (int t = 1; t < side_steps && lo < n; ++t) {
        bool pinned = (t == 1 && outer_left.has_value());
        Iv iv = pinned ? Iv{*outer_left, *outer_left} : Iv{};
        Extend er = extend_max(side_pts, lo, n, level, iv);
        if (er.end == lo && !pinned) break;
        lo = er.end;
    }
    double band = 1e-12 * (1.0 + side_cost);
    for (std::size_t i = lo; i < n; ++i) {
        if (pt_cost(side_pts[i], h) < side_cost - band) continue;
        if (side_pts[i].y > h) v.above = true;
        else if (side_pts[i].y < h) v.below = true;
    }
}

}  // namespace

RoundResult prune_round(std::vector<Pt>& pts, int steps, const Anchors& anc, Diag* diag) {
    ++g_round_calls;
    RoundResult rr;
    std::size_t s = static_cast<std::size_t>(steps);
    std::vector<std::size_t> bounds = partition_closed(pts, s);
    std::size_t n = pts.size();
    auto slice = [&](std::size_t i, std::size_t j) {
        return std::vector<Pt>(pts.begin() + static_cast<std::ptrdiff_t>(i),
                               pts.begin() + static_cast<std::ptrdiff_t>(j));
    };
    auto terminal = [&](Plan p) {
        rr.terminal = true;
        rr.plan = std::move(p);
        return rr;
    };
    auto fallback = [&]() {
        return terminal(bisect_solve(pts, steps, anc, upper_level(pts, anc)));
    };

    if (bounds[1] == 0) return fallback();
    double d1 = anc.left ? cost_at(pts, 0, bounds[1], *anc.left)
                         : oc_solve(slice(0, bounds[1]), diag).cost;
    ProbeOutcome pr1 = probe(pts, d1, steps, anc);
    if (pr1 == ProbeOutcome::Tie) return terminal(finalize_at(pts, d1, steps, anc));

    std::size_t big;
    if (pr1 == ProbeOutcome::Infeasible) {
        big = 1;  // the first segment must reach past its own bucket
    } else if (s == 2) {
        big = 2;
    } else {
        double dp = solve_steps(slice(0, bounds[s - 1]), steps - 1,
                                {anc.left, std::nullopt}, diag, true)
                        .cost;
        ProbeOutcome prp = probe(pts, dp, steps, anc);
        if (prp == ProbeOutcome::Tie) return terminal(finalize_at(pts, dp, steps, anc));
        if (prp == ProbeOutcome::Feasible) {
            big = s;  // prefix of s-1 buckets needs all but the last segment
        } else {
            // Walk the prefix costs to an adjacent feasible/infeasible flip.
            std::size_t flo = 1, fhi = s - 1;
            while (fhi - flo > 1) {
                std::size_t md = (flo + fhi) / 2;
                double dm = solve_steps(slice(0, bounds[md]), static_cast<int>(md),
                                        {anc.left, std::nullopt}, diag, true)
                                .cost;
                ProbeOutcome prm = probe(pts, dm, steps, anc);
                if (prm == ProbeOutcome::Tie)
                    return terminal(finalize_at(pts, dm, steps, anc));
                if (prm == ProbeOutcome::Feasible)
                    flo = md;
                else
                    fhi = md;
            }
            big = fhi;
        }
    }
    rr.big_index = big;
    std::size_t blo = bounds[big - 1], bhi = bounds[big];
    std::size_t bsz = bhi - blo;
    if (bsz == 0) return fallback();

    auto commit = [&](std::size_t removed) {
        rr.removed = removed;
        return rr;
    };

    if ((big == 1 && anc.left) || (big == s && anc.right)) {
        // Anchored extreme bucket: the pinned segment spans it, so only the
        // critical point against the anchor can matter.
        double av = (big == 1) ? *anc.left : *anc.right;
        if (big == s && anc.right) {
            double ds = cost_at(pts, blo, bhi, av);
            ProbeOutcome prx = probe(pts, ds, steps, anc);
            if (prx == ProbeOutcome::Tie)
                return terminal(finalize_at(pts, ds, steps, anc));
            if (prx == ProbeOutcome::Feasible) return fallback();
        }
        std::vector<Pt> bucket = slice(blo, bhi);
        Pt keep = critical_vs(bucket, av);
        std::size_t removed = bsz - 1;
        if (removed == 0) return fallback();
        if (diag)
            diag->events.push_back(
                {PruneEvent::Kind::AnchorCollapse, bsz, removed, bsz / 6});
        std::vector<Pt> np;
        np.reserve(n - removed);
        np.insert(np.end(), pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(blo));
        np.push_back(keep);
        np.insert(np.end(), pts.begin() + static_cast<std::ptrdiff_t>(bhi), pts.end());
        pts = std::move(np);
        return commit(removed);
    }

    Classified cl = classify_set(slice(blo, bhi));
    auto rebuild = [&](const std::vector<std::size_t>& drops) {
        std::vector<char> dead(cl.kept.size(), 0);
        for (std::size_t d : drops) dead[d] = 1;
        std::vector<Pt> np;
        np.reserve(n - cl.dup_removed - drops.size());
        np.insert(np.end(), pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(blo));
        for (std::size_t i = 0; i < cl.kept.size(); ++i)
            if (!dead[i]) np.push_back(cl.kept[i]);
        np.insert(np.end(), pts.begin() + static_cast<std::ptrdiff_t>(bhi), pts.end());
        std::size_t removed = n - np.size();
        pts = std::move(np);
        return removed;
    };
    if (!cl.ok) {
        if (cl.dup_removed == 0) return fallback();
        std::size_t removed = rebuild({});
        if (diag)
            diag->events.push_back({PruneEvent::Kind::BigBucket, bsz, removed, bsz / 6});
        return commit(removed);
    }

    int steps_l = static_cast<int>(big);
    int steps_r = static_cast<int>(s - big + 1);
    auto vote_at = [&](double h) {
        Vote v;
        Plan ra = solve_steps(slice(0, bhi), steps_l, {anc.left, h}, diag, true);
        Plan la = solve_steps(slice(blo, n), steps_r, {h, anc.right}, diag, true);
        v.cost = std::max(ra.cost, la.cost);
        double band = 1e-12 * (1.0 + v.cost);
        // The left side pins h on its last segment, so the forward greedy
        // applies directly; the right side pins h first, so reflect it.
        if (ra.cost >= v.cost - band)
            collect_votes(slice(0, bhi), steps_l, anc.left, h, ra.cost, v);
        if (la.cost >= v.cost - band)
            collect_votes(reflect_x(slice(blo, n)), steps_r, anc.right, h, la.cost, v);
        return v;
    };
    auto vote_terminal = [&](double c) {
        ++g_vote_term;
        ProbeOutcome pr = probe(pts, c, steps, anc);
        if (pr == ProbeOutcome::Tie) return terminal(finalize_at(pts, c, steps, anc));
        ++g_vote_term_bisect;
        return terminal(bisect_solve(pts, steps, anc, c * (1.0 + 1e-9)));
    };

    double u = cl.rank_upper, l = cl.rank_lower;
    std::vector<std::size_t> drops;
    Vote vu = vote_at(u);
    if (vu.above && vu.below) return vote_terminal(vu.cost);
    if (vu.above) {
        drops = drops_above(cl, u);
    } else if (!vu.below) {
        return vote_terminal(vu.cost);  // vacuous votes: no usable direction
    } else {
        Vote vl = vote_at(l);
        if (vl.above && vl.below) return vote_terminal(vl.cost);
        if (vl.below) {
            drops = drops_below(cl, l);
        } else if (vl.above) {
            if (!(l < u)) return vote_terminal(std::min(vu.cost, vl.cost));
            drops = drops_between(cl, l, u);
        } else {
            return vote_terminal(vl.cost);
        }
    }
    std::size_t removed = rebuild(drops);
    if (removed == 0) return fallback();
    if (diag)
        diag->events.push_back({PruneEvent::Kind::BigBucket, bsz, removed, bsz / 6});
    return commit(removed);
}

// ---------------------------------------------------------------------------
// Dispatch.

Plan solve_steps(std::vector<Pt> pts, int steps, const Anchors& anc, Diag* diag,
                 bool inner) {
    ++g_solve_calls;
    for (;;) {
        std::size_t n = pts.size();
        if (steps <= 0) return {{}, {}, 0.0};
        if (steps == 1) {
            if (anc.left && anc.right) return small_dp(std::move(pts), 1, anc);
            if (anc.left) return {{*anc.left}, {}, cost_at(pts, 0, n, *anc.left)};
            if (anc.right) return {{*anc.right}, {}, cost_at(pts, 0, n, *anc.right)};
            OcResult r = oc_solve(std::move(pts), diag);
            return {{r.height}, {}, r.cost};
        }
        if (steps == 2 && anc.left && anc.right) {
            Split2 s2 = doubly2(pts, *anc.left, *anc.right);
            return {{*anc.left, *anc.right}, {s2.cut}, s2.cost};
        }
        if (steps == 2 && anc.left) return lanch2(std::move(pts), *anc.left, diag);
        if (steps == 2 && anc.right) {
            Plan p = lanch2(reflect_x(pts), *anc.right, diag);
            return unreflect_plan(p, pts);
        }
        if (run_count(pts) <= static_cast<std::size_t>(steps) + 2)
            return small_dp(std::move(pts), steps, anc);
        std::size_t base = std::max<std::size_t>(32, 4 * static_cast<std::size_t>(steps));
        if (n <= base) return small_dp(std::move(pts), steps, anc);
        if (inner && n <= 48 * static_cast<std::size_t>(steps))
            return small_dp(std::move(pts), steps, anc);

        RoundResult rr = prune_round(pts, steps, anc, diag);
        if (rr.terminal) return std::move(rr.plan);
        if (diag && !inner) {
            ++diag->rounds;
            diag->pruned_per_round.push_back(rr.removed);
            diag->big_indices.push_back(rr.big_index);
        }
    }
}

// ---------------------------------------------------------------------------
// Plan realization.

StepFunction plan_to_stepfunction(const std::vector<Pt>& pts, const Plan& plan,
                                  std::size_t pad_to) {
    StepFunction sf;
    if (plan.heights.empty()) return sf;
    double minx = kInf, maxx = -kInf;
    for (const Pt& p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
    }
    if (pts.empty()) minx = maxx = 0.0;
    std::vector<double> bs;
    bs.reserve(plan.cuts.size());
    double prev_b = minx;
    for (double cut : plan.cuts) {
        double b;
        if (cut == kInf || cut > maxx) {
            b = maxx;
        } else {
            double pred = -kInf;
            for (const Pt& p : pts)
                if (p.x < cut) pred = std::max(pred, p.x);
            b = (pred == -kInf) ? minx : 0.5 * (pred + cut);
        }
        b = std::min(std::max(b, prev_b), maxx);
        bs.push_back(b);
        prev_b = b;
    }
    double left = minx;
    for (std::size_t i = 0; i < plan.heights.size(); ++i) {
        double right = (i < bs.size()) ? bs[i] : maxx;
        sf.segments.push_back({left, right, plan.heights[i]});
        left = right;
    }
    sf.segments.back().x_right = maxx;
    while (sf.segments.size() < pad_to)
        sf.segments.push_back({maxx, maxx, sf.segments.back().y});
    // Zero-width trailing pieces (empty plan segments) must not override the
    // height of the piece that owns the right end of the domain: lookups
    // resolve the closed right endpoint to the last segment. The owner is the
    // plan segment whose cut interval contains the maximal x.
    std::size_t owner = static_cast<std::size_t>(
        std::upper_bound(plan.cuts.begin(), plan.cuts.end(), maxx) -
        plan.cuts.begin());
    for (std::size_t i = owner + 1; i < sf.segments.size(); ++i)
        sf.segments[i].y = sf.segments[owner].y;
    return sf;
}

}  // namespace stepfit::detail
