#include "stepfit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace stepfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<WeightedPoint> transformed(std::span<const WeightedPoint> pts,
                                       CostModel model) {
    std::vector<WeightedPoint> out(pts.begin(), pts.end());
    if (model == CostModel::Squared)
        for (WeightedPoint& p : out) p.w = std::sqrt(p.w);
    for (WeightedPoint& p : out) {
        p.x += 0.0;
        p.y += 0.0;
    }
    return out;
}

double squared_report(double c, CostModel model) {
    return (model == CostModel::Squared) ? c * c : c;
}

// Max falling ray w*(y - h) and max rising ray w*(h - y) over an index range,
// with the attaining point of each (ties to the smaller id).
struct EnvSample {
    double fall = -kInf, rise = -kInf;
    std::size_t fall_at = 0, rise_at = 0;
};

EnvSample sample(const std::vector<WeightedPoint>& pts, std::size_t lo,
                 std::size_t hi, double h) {
    EnvSample s;
    for (std::size_t i = lo; i < hi; ++i) {
        double f = pts[i].w * (pts[i].y - h);
        double r = pts[i].w * (h - pts[i].y);
        if (f > s.fall || (f == s.fall && pts[i].id < pts[s.fall_at].id)) {
            s.fall = f;
            s.fall_at = i;
        }
        if (r > s.rise || (r == s.rise && pts[i].id < pts[s.rise_at].id)) {
            s.rise = r;
            s.rise_at = i;
        }
    }
    return s;
}

// Weighted 1-center of pts[lo, hi): the falling envelope strictly decreases
// and the rising one strictly increases, so their crossing is the unique
// optimum. Newton steps on the current attainer pair with a bisection
// safeguard converge once the bracket isolates one linear piece of each.
OneCenterResult env_center(const std::vector<WeightedPoint>& pts, std::size_t lo,
                           std::size_t hi) {
    if (hi <= lo) return {0.0, 0.0};
    if (hi - lo == 1) return {pts[lo].y, 0.0};
    double blo = kInf, bhi = -kInf;
    for (std::size_t i = lo; i < hi; ++i) {
        blo = std::min(blo, pts[i].y);
        bhi = std::max(bhi, pts[i].y);
    }
    double h = 0.5 * (blo + bhi);
    EnvSample s = sample(pts, lo, hi, h);
    for (int iter = 0; iter < 256; ++iter) {
        if (s.fall == s.rise) break;
        if (s.fall > s.rise)
            blo = std::max(blo, h);  // optimum lies above h
        else
            bhi = std::min(bhi, h);
        const WeightedPoint& pf = pts[s.fall_at];
        const WeightedPoint& pr = pts[s.rise_at];
        double nh = (pf.w * pf.y + pr.w * pr.y) / (pf.w + pr.w);
        if (!(nh > blo && nh < bhi)) nh = 0.5 * (blo + bhi);
        if (nh == h || !(blo < bhi)) break;
        h = nh;
        s = sample(pts, lo, hi, h);
    }
    return {h, std::max(s.fall, s.rise)};
}

std::size_t clamp_steps(std::size_t k, std::size_t runs) {
    return std::max<std::size_t>(1, std::min(k, runs));
}

struct RunIndex {
    std::vector<WeightedPoint> pts;  // (x, y, id)-sorted
    std::vector<std::size_t> start;  // run start positions, sentinel n
    std::size_t runs = 0;
};

RunIndex index_runs(std::span<const WeightedPoint> input, CostModel model) {
    RunIndex ri;
    ri.pts = transformed(input, model);
    std::sort(ri.pts.begin(), ri.pts.end(), xy_less);
    for (std::size_t i = 0; i < ri.pts.size(); ++i)
        if (i == 0 || ri.pts[i].x != ri.pts[i - 1].x) ri.start.push_back(i);
    ri.runs = ri.start.size();
    ri.start.push_back(ri.pts.size());
    return ri;
}

// Generic run-atomic DP; `pin(t)` yields the forced height of step t, if any.
template <typename PinFn>
OracleFit run_dp(const RunIndex& ri, std::size_t steps, std::size_t pad_to,
                 CostModel model, PinFn pin) {
    std::size_t nr = ri.runs;
    std::vector<OneCenterResult> free_cost((nr + 1) * (nr + 1), {0.0, -1.0});
    auto centered = [&](std::size_t q, std::size_t r) -> const OneCenterResult& {
        OneCenterResult& slot = free_cost[q * (nr + 1) + r];
        if (slot.cost < 0.0) slot = env_center(ri.pts, ri.start[q], ri.start[r]);
        return slot;
    };
    auto pinned_cost = [&](std::size_t q, std::size_t r, double h) {
        double c = 0.0;
        for (std::size_t i = ri.start[q]; i < ri.start[r]; ++i)
            c = std::max(c, ri.pts[i].w * std::abs(ri.pts[i].y - h));
        return c;
    };
    auto interval = [&](std::size_t q, std::size_t r, std::size_t t) {
        if (q == r) return 0.0;
        if (auto h = pin(t)) return pinned_cost(q, r, *h);
        return centered(q, r).cost;
    };

    std::vector<double> prev(nr + 1, kInf), cur(nr + 1, kInf);
    std::vector<std::size_t> arg((nr + 1) * (steps + 1), 0);
    prev[0] = 0.0;
    for (std::size_t t = 1; t <= steps; ++t) {
        for (std::size_t r = 0; r <= nr; ++r) {
            double best = kInf;
            std::size_t bq = 0;
            for (std::size_t q = 0; q <= r; ++q) {
                if (prev[q] == kInf) continue;
                double v = std::max(prev[q], interval(q, r, t));
                if (v < best) {
                    best = v;
                    bq = q;
                }
            }
            cur[r] = best;
            arg[r * (steps + 1) + t] = bq;
        }
        std::swap(prev, cur);
    }

    std::vector<std::size_t> qs(steps + 1, 0);
    qs[steps] = nr;
    for (std::size_t t = steps; t >= 1; --t) qs[t - 1] = arg[qs[t] * (steps + 1) + t];

    constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> heights(steps, kUnset);
    for (std::size_t t = 1; t <= steps; ++t) {
        if (auto h = pin(t)) heights[t - 1] = *h;
        else if (qs[t - 1] < qs[t])
            heights[t - 1] = centered(qs[t - 1], qs[t]).y;
    }
    double nxt = kUnset;
    for (std::size_t t = steps; t >= 1; --t) {
        if (std::isnan(heights[t - 1])) heights[t - 1] = nxt;
        else nxt = heights[t - 1];
    }
    double prv = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        if (std::isnan(heights[t])) heights[t] = prv;
        else prv = heights[t];
    }

    OracleFit out;
    out.cost = squared_report(prev[nr], model);
    double minx = ri.pts.front().x, maxx = ri.pts.back().x;
    double left = minx;
    for (std::size_t t = 1; t <= steps; ++t) {
        double right;
        if (t == steps || qs[t] == nr) {
            right = maxx;
        } else if (qs[t] == 0) {
            right = minx;  // empty leading segment: zero width at the left edge
        } else {
            std::size_t pos = ri.start[qs[t]];
            right = 0.5 * (ri.pts[pos - 1].x + ri.pts[pos].x);
        }
        right = std::max(right, left);
        out.fit.segments.push_back({left, right, heights[t - 1]});
        left = right;
    }
    out.fit.segments.back().x_right = maxx;
    while (out.fit.segments.size() < pad_to)
        out.fit.segments.push_back({maxx, maxx, out.fit.segments.back().y});
    return out;
}

}  // namespace

OneCenterResult oracle_one_center(std::span<const WeightedPoint> pts,
                                  CostModel model) {
    if (pts.empty())
        throw std::invalid_argument("oracle_one_center: empty point set");
    std::vector<WeightedPoint> work = transformed(pts, model);
    OneCenterResult r = env_center(work, 0, work.size());
    r.cost = squared_report(r.cost, model);
    return r;
}

OracleFit oracle_k_step(std::span<const WeightedPoint> pts, std::size_t k,
                        CostModel model) {
    if (pts.empty()) throw std::invalid_argument("oracle_k_step: empty point set");
    if (k < 1) throw std::invalid_argument("oracle_k_step: k must be >= 1");
    RunIndex ri = index_runs(pts, model);
    std::size_t steps = clamp_steps(k, ri.runs);
    std::size_t pad_to = std::min(k, pts.size());
    return run_dp(ri, steps, pad_to, model,
                  [](std::size_t) { return std::optional<double>{}; });
}

bool oracle_feasibility(std::span<const WeightedPoint> pts, double d,
                        std::size_t k) {
    if (k < 1) throw std::invalid_argument("oracle_feasibility: k must be >= 1");
    if (!(d >= 0.0)) return false;
    RunIndex ri = index_runs(pts, CostModel::Linear);
    std::size_t i = 0, used = 0;
    while (i < ri.pts.size()) {
        if (++used > k) return false;
        double lo = -kInf, hi = kInf;
        bool first = true;
        while (i < ri.pts.size()) {
            double nlo = lo, nhi = hi;
            std::size_t j = i;
            while (j < ri.pts.size() && ri.pts[j].x == ri.pts[i].x) {
                nlo = std::max(nlo, ri.pts[j].y - d / ri.pts[j].w);
                nhi = std::min(nhi, ri.pts[j].y + d / ri.pts[j].w);
                ++j;
            }
            if (nlo > nhi) {
                if (first) return false;  // a single run no height can serve
                break;
            }
            lo = nlo;
            hi = nhi;
            i = j;
            first = false;
        }
    }
    return true;
}

OracleFit oracle_anchored(std::span<const WeightedPoint> pts,
                          const AnchorSpec& anchor, int j, CostModel model) {
    if (pts.empty()) throw std::invalid_argument("oracle_anchored: empty point set");
    if (j < 1) throw std::invalid_argument("oracle_anchored: j must be >= 1");
    bool pin_left = anchor.side != AnchorSpec::Side::Right;
    bool pin_right = anchor.side != AnchorSpec::Side::Left;
    if ((pin_left && !anchor.left_value) || (pin_right && !anchor.right_value))
        throw std::invalid_argument("oracle_anchored: missing anchor value");
    RunIndex ri = index_runs(pts, model);
    std::size_t steps = static_cast<std::size_t>(j);  // anchors may force width
    auto pin = [&](std::size_t t) -> std::optional<double> {
        if (t == 1 && pin_left) return *anchor.left_value;
        if (t == steps && pin_right) return *anchor.right_value;
        return std::nullopt;
    };
    return run_dp(ri, steps, steps, model, pin);
}

}  // namespace stepfit
