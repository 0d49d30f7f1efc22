// Acceptance suite: prints one [PASS]/[FAIL] line per criterion and exits
// with the number of failed criteria. Tolerances are pinned here on purpose.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "oracle_ref.hpp"
#include "stepfit/anchored.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/generator.hpp"
#include "stepfit/kstep.hpp"
#include "stepfit/one_center.hpp"
#include "stepfit/oracle.hpp"

using namespace stepfit;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kRel9 = 1e-9;
constexpr double kRel12 = 1e-12;

bool near(double a, double b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

std::vector<WeightedPoint> gen(std::size_t n, std::uint64_t seed,
                               const std::string& profile,
                               const std::string& weights) {
    GenSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.profile = profile;
    spec.weights = weights;
    spec.k = 3;
    return generate_points(spec);
}

const char* profile_of(std::uint64_t seed) {
    switch (seed % 3) {
        case 0: return "staircase";
        case 1: return "random";
        default: return "adversarial";
    }
}

const char* weights_of(std::uint64_t seed) {
    return seed % 2 ? "uniform" : "heavy";
}

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", idx,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Case {
    std::vector<WeightedPoint> pts;
    std::size_t k = 1;
    double opt_linear = 0.0;
};

// Shared harvest of the criterion-1 sweep, reused by criteria 3, 4 and 9.
struct Sweep {
    std::size_t instances = 0;
    std::size_t mismatches = 0;
    std::size_t squared_checked = 0;
    std::size_t squared_mismatches = 0;
    double worst_rel = 0.0;
    std::vector<PruneEvent> events;
    std::vector<Case> cases;
    double seconds = 0.0;
};

Sweep run_sweep() {
    Sweep sw;
    auto t0 = Clock::now();
    for (std::uint64_t seed = 1; seed <= 510; ++seed) {
        std::size_t n = 1 + (seed * 37) % 160;
        std::size_t k = 1 + seed % 6;
        auto pts = gen(n, seed, profile_of(seed), weights_of(seed));
        ++sw.instances;
        for (CostModel model : {CostModel::Linear, CostModel::Squared}) {
            FitReport fast = k_step(pts, k, model);
            OracleFit slow = oracle_k_step(pts, k, model);
            double rel = std::abs(fast.cost - slow.cost) /
                         (1.0 + std::max(std::abs(fast.cost), std::abs(slow.cost)));
            sw.worst_rel = std::max(sw.worst_rel, rel);
            if (!near(fast.cost, slow.cost, kRel9)) ++sw.mismatches;
            for (const PruneEvent& e : fast.diagnostics.prune_log)
                sw.events.push_back(e);
            if (model == CostModel::Linear) {
                sw.cases.push_back({pts, k, fast.cost});
            } else {
                std::vector<WeightedPoint> rooted = pts;
                for (auto& p : rooted) p.w = std::sqrt(p.w);
                double lin = k_step(rooted, k, CostModel::Linear).cost;
                ++sw.squared_checked;
                if (!near(fast.cost, lin * lin, kRel12)) ++sw.squared_mismatches;
            }
        }
    }
    sw.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return sw;
}

void criterion1(const Sweep& sw) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "k_step vs oracle on %zu instances, both models: %zu mismatches, "
                  "worst rel diff %.2e, %.1fs",
                  sw.instances, sw.mismatches, sw.worst_rel, sw.seconds);
    report(1, sw.instances >= 500 && sw.mismatches == 0, buf);
}

std::vector<PruneEvent> criterion2() {
    std::size_t bad = 0, count = 0;
    std::vector<PruneEvent> events;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        std::size_t n = 1 + (seed * 73) % 500;
        auto pts = gen(n, 5000 + seed, profile_of(seed), weights_of(seed));
        CostModel model = seed % 4 == 0 ? CostModel::Squared : CostModel::Linear;
        std::vector<PruneEvent> ev;
        OneCenterResult fast = weighted_one_center(pts, model, &ev);
        OneCenterResult slow = oracle_one_center(pts, model);
        ++count;
        if (!near(fast.cost, slow.cost, kRel9)) ++bad;
        for (const PruneEvent& e : ev) events.push_back(e);
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "weighted_one_center vs oracle on %zu instances: %zu mismatches",
                  count, bad);
    report(2, count >= 1000 && bad == 0, buf);
    return events;
}

void criterion3(const Sweep& sw, const std::vector<PruneEvent>& oc_events) {
    std::size_t total = 0, violations = 0;
    auto audit = [&](const std::vector<PruneEvent>& evs) {
        for (const PruneEvent& e : evs) {
            ++total;
            if (e.removed < e.set_size / 6 || e.removed < e.guarantee ||
                e.removed > e.set_size)
                ++violations;
        }
    };
    audit(sw.events);
    audit(oc_events);
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "every logged round removed >= floor(set/6): %zu events, "
                  "%zu violations",
                  total, violations);
    report(3, total > 0 && violations == 0, buf);
}

void criterion4(const Sweep& sw) {
    std::size_t probes = 0, bad = 0;
    for (const Case& c : sw.cases) {
        if (!(c.opt_linear > 0.0)) continue;
        ++probes;
        if (!feasibility_test(c.pts, c.opt_linear, c.k).feasible) ++bad;
        double low = c.opt_linear * (1.0 - 1e-6) - 1e-12;
        if (feasibility_test(c.pts, low, c.k).feasible) ++bad;
    }
    std::size_t triples = 0, disagree = 0;
    SplitMix64 rng(99);
    for (std::uint64_t t = 0; t < 200; ++t) {
        std::size_t n = 1 + (t * 31) % 120;
        std::size_t k = 1 + t % 6;
        auto pts = gen(n, 9000 + t, profile_of(t), weights_of(t));
        double opt = oracle_k_step(pts, k).cost;
        double factor = 0.25 + 2.0 * rng.uniform();
        if (std::abs(factor - 1.0) < 0.02) factor += 0.05;  // stay off the edge
        double d = opt * factor + (opt == 0.0 ? rng.uniform() : 0.0);
        ++triples;
        if (feasibility_test(pts, d, k).feasible != oracle_feasibility(pts, d, k))
            ++disagree;
    }
    char buf[224];
    std::snprintf(buf, sizeof buf,
                  "feasibility sharp at the optimum on %zu instances (%zu bad), "
                  "agrees with oracle on %zu random triples (%zu disagree)",
                  probes, bad, triples, disagree);
    report(4, probes >= 200 && bad == 0 && triples == 200 && disagree == 0, buf);
}

void criterion5() {
    std::size_t count = 0, bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::size_t n = 6 + (seed * 29) % 55;  // up to 60
        std::size_t k = 1 + seed % 4;
        auto pts = gen(n, 12000 + seed, profile_of(seed), weights_of(seed));
        CostModel model = seed % 5 == 0 ? CostModel::Squared : CostModel::Linear;
        if (k > pts.size()) k = pts.size();
        PartitionScheme scheme = equal_size_partition(pts, k);
        std::size_t j = find_big_partition(pts, scheme, k, model);
        ++count;
        if (j < 1 || j > scheme.bucket_count()) {
            ++bad;
            continue;
        }
        std::vector<WeightedPoint> sorted(pts.begin(), pts.end());
        std::sort(sorted.begin(), sorted.end(), xy_less);
        std::size_t lo = scheme.boundaries[j - 1], hi = scheme.boundaries[j];
        ref::Partitions part(pts, model);
        std::size_t rlo = part.run_of(sorted[lo].x);
        std::size_t rhi = part.run_of(sorted[hi - 1].x);
        if (!ref::spans_some_optimal(pts, k, rlo, rhi, model)) ++bad;
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "certified bucket spanned by a segment of some optimum on "
                  "%zu instances: %zu failures",
                  count, bad);
    report(5, count >= 100 && bad == 0, buf);
}

void criterion6() {
    std::size_t count = 0, bad = 0;
    for (std::uint64_t seed = 1; seed <= 310; ++seed) {
        std::size_t n = 1 + (seed * 23) % 60;
        auto pts = gen(n, 15000 + seed, profile_of(seed), weights_of(seed));
        SplitMix64 rng(seed * 13);
        double a = rng.uniform(-20, 120), b = rng.uniform(-20, 120);
        CostModel model = seed % 2 ? CostModel::Linear : CostModel::Squared;
        ++count;
        bool ok = true;
        SplitSolution d2 = doubly_anchored_two_step(pts, a, b, model);
        ok &= near(d2.cost,
                   oracle_anchored(pts, AnchorSpec::both(a, b), 2, model).cost,
                   kRel9);
        ok &= near(left_anchored_two_step(pts, a, model).cost,
                   oracle_anchored(pts, AnchorSpec::left(a), 2, model).cost, kRel9);
        ok &= near(right_anchored_two_step(pts, b, model).cost,
                   oracle_anchored(pts, AnchorSpec::right(b), 2, model).cost, kRel9);
        for (int j = 1; j <= 4; ++j) {
            ok &= near(anchored_j_step(pts, AnchorSpec::left(a), j, model).cost,
                       oracle_anchored(pts, AnchorSpec::left(a), j, model).cost,
                       kRel9);
            ok &= near(anchored_j_step(pts, AnchorSpec::right(b), j, model).cost,
                       oracle_anchored(pts, AnchorSpec::right(b), j, model).cost,
                       kRel9);
        }
        if (!ok) ++bad;
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "anchored solvers vs oracle on %zu instances "
                  "(doubly/left/right/j<=4): %zu mismatches",
                  count, bad);
    report(6, count >= 300 && bad == 0, buf);
}

void criterion7() {
    std::size_t count = 0, bad = 0;
    for (std::uint64_t seed = 1; seed <= 110; ++seed) {
        std::size_t n = 2 + (seed * 19) % 80;
        auto pts = gen(n, 18000 + seed, profile_of(seed), weights_of(seed));
        ++count;
        bool ok = true;

        std::vector<double> costs;
        for (std::size_t k = 1; k <= 7; ++k) costs.push_back(k_step(pts, k).cost);
        for (std::size_t i = 1; i < costs.size(); ++i)
            ok &= costs[i] <= costs[i - 1] + 1e-12;

        // Zero cost is reachable iff every x-column is y-constant and k covers
        // the maximal constant-y runs; otherwise no k gives an exact fit.
        std::vector<WeightedPoint> sorted(pts.begin(), pts.end());
        std::sort(sorted.begin(), sorted.end(), xy_less);
        std::size_t xruns = 0, yruns = 0;
        bool cols_const = true;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            bool new_col = i == 0 || sorted[i].x != sorted[i - 1].x;
            if (new_col) ++xruns;
            if (i == 0 || sorted[i].y != sorted[i - 1].y) {
                ++yruns;
                if (!new_col) cols_const = false;
            }
        }
        if (cols_const) {
            ok &= k_step(pts, yruns).cost == 0.0;
            if (yruns > 1) ok &= k_step(pts, yruns - 1).cost > 0.0;
        } else {
            ok &= k_step(pts, xruns).cost > 0.0;
        }

        std::size_t k = 1 + seed % 4;
        double base = k_step(pts, k).cost;
        std::vector<WeightedPoint> heavier = pts;
        for (auto& p : heavier) p.w *= 2.0;
        ok &= near(k_step(heavier, k).cost, 2.0 * base, kRel12);

        double c = 41.25;
        std::vector<WeightedPoint> shifted = pts;
        for (auto& p : shifted) p.y += c;
        FitReport sh = k_step(shifted, k);
        ok &= near(sh.cost, base, kRel9);
        StepFunction back = sh.fit;
        for (auto& s : back.segments) s.y -= c;
        ok &= set_cost(pts, back) <= base + kRel9 * (1.0 + base);

        if (!ok) ++bad;
    }
    char buf[224];
    std::snprintf(buf, sizeof buf,
                  "monotone in k, zero iff k >= runs, weight scaling, "
                  "y-translation on %zu instances: %zu failures",
                  count, bad);
    report(7, count >= 100 && bad == 0, buf);
}

void criterion8() {
    const std::size_t sizes[3] = {100000, 200000, 400000};
    double median_ms[3] = {0, 0, 0};
    for (int si = 0; si < 3; ++si) {
        std::vector<double> ms;
        for (int trial = 0; trial < 5; ++trial) {
            auto pts = gen(sizes[si], 21000 + 100 * si + trial, "random", "uniform");
            auto t0 = Clock::now();
            FitReport r = k_step(pts, 3);
            auto t1 = Clock::now();
            (void)r;
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(ms.begin(), ms.end());
        median_ms[si] = ms[ms.size() / 2];
    }
    double r1 = median_ms[1] / std::max(median_ms[0], 1e-9);
    double r2 = median_ms[2] / std::max(median_ms[1], 1e-9);
    double worst = std::max(r1, r2);
    char buf[224];
    std::snprintf(buf, sizeof buf,
                  "k=3 medians %.1f/%.1f/%.1f ms for n=1e5/2e5/4e5, doubling "
                  "ratios %.2f and %.2f (soft limit 3.0, hard limit 6.0)%s",
                  median_ms[0], median_ms[1], median_ms[2], r1, r2,
                  worst > 3.0 && worst <= 6.0 ? " [soft limit exceeded]" : "");
    report(8, worst <= 6.0, buf);
}

void criterion9(const Sweep& sw) {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "squared cost equals squared linear-on-root-weights cost on "
                  "%zu instances: %zu mismatches",
                  sw.squared_checked, sw.squared_mismatches);
    report(9, sw.squared_checked >= 500 && sw.squared_mismatches == 0, buf);
}

}  // namespace

int main() {
    try {
        Sweep sw = run_sweep();
        criterion1(sw);
        std::vector<PruneEvent> oc_events = criterion2();
        criterion3(sw, oc_events);
        criterion4(sw);
        criterion5();
        criterion6();
        criterion7();
        criterion8();
        criterion9(sw);
    } catch (const std::exception& e) {
        std::printf("[FAIL] criterion ?: unhandled exception: %s\n", e.what());
        return g_failures + 1;
    }
    return g_failures;
}
