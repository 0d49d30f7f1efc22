#ifndef STEPFIT_DETAIL_ENGINE_HPP
#define STEPFIT_DETAIL_ENGINE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "stepfit/types.hpp"

// Internal solver core. Everything here works on linear-model weights; the
// public wrappers transform squared-model instances before calling in.
namespace stepfit::detail {

struct Pt {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    int id = 0;
};

// A plan is a step function described by cut thresholds: cuts[i] is the x of
// the first point assigned to segment i+1 (+inf once the tail is empty), so
// segment i covers points with cuts[i-1] <= x < cuts[i]. Cuts coincide with
// run starts, so equal-x groups can never be separated. Plans produced by
// pruning solvers are value-carriers: the cost is the optimum of the solved
// (possibly reduced) set, and heights/cuts are only guaranteed valid for that
// set. Callers needing a plan valid for the original set refit via
// finalize_at on the original points.
struct Plan {
    std::vector<double> heights;
    std::vector<double> cuts;  // size == heights.size() - 1
    double cost = 0.0;
};

struct Anchors {
    std::optional<double> left;
    std::optional<double> right;
};

struct Diag {
    std::size_t rounds = 0;
    std::vector<std::size_t> pruned_per_round;
    std::vector<std::size_t> big_indices;  // 1-based certified bucket per round
    std::vector<PruneEvent> events;
};

double pt_cost(const Pt& p, double h);
double cost_at(const std::vector<Pt>& pts, std::size_t lo, std::size_t hi, double h);
std::size_t run_count(const std::vector<Pt>& pts);

struct OcResult {
    double height = 0.0;
    double cost = 0.0;
};

// Exact weighted 1-center of pts[lo, hi) via the crossing of the falling and
// rising cost envelopes. O(m log m); also the remnant evaluator for DP.
OcResult oc_env(const std::vector<Pt>& pts, std::size_t lo, std::size_t hi);

// Prune-and-search weighted 1-center: pair bisectors, rank heights, a sixth
// of the set eliminated per round, envelope base case at 32 points.
OcResult oc_solve(std::vector<Pt> pts, Diag* diag);

// Side of the minimizer relative to h, judged by exact attainers of the max.
enum class Side { Below, Optimal, Above };
Side side_exact(const std::vector<Pt>& pts, double h);

// Pair classification shared by every bisector-based pruning rule. Points are
// first deduplicated by ordinate (heaviest kept, then smallest id); survivors
// are paired up and each pair contributes its value-ordered crossing heights.
struct PairRec {
    std::size_t a = 0;  // indices into kept
    std::size_t b = 0;
    double lower = 0.0;
    double upper = 0.0;
};

struct Classified {
    std::vector<Pt> kept;
    std::vector<PairRec> pairs;
    std::size_t dup_removed = 0;
    double rank_upper = 0.0;  // ceil(p/3)-th smallest upper crossing
    double rank_lower = 0.0;  // ceil(p/3)-th largest lower crossing
    bool ok = false;          // false when fewer than 2 points survive dedup
};

Classified classify_set(std::vector<Pt> pts);

// Indices into cl.kept to drop, given where the relevant optimum height lies.
std::vector<std::size_t> drops_above(const Classified& cl, double u);
std::vector<std::size_t> drops_below(const Classified& cl, double l);
std::vector<std::size_t> drops_between(const Classified& cl, double l, double u);

struct FeasResult {
    bool feasible = false;
    Plan plan;  // meaningful only when feasible; plan.cost echoes the level
};

// Greedy maximal-step feasibility at level D. Anchored first/last steps are
// pinned to the anchor heights; free-step heights are interval midpoints.
FeasResult feas_test(std::vector<Pt> pts, double D, int steps, const Anchors& anc);

enum class ProbeOutcome { Feasible, Infeasible, Tie };

// Strict three-way comparison of D against the instance optimum, with
// multiplicative guard bands (1e-12 below, 1e-10 above).
ProbeOutcome probe(const std::vector<Pt>& pts, double D, int steps, const Anchors& anc);

struct Split2 {
    double cut = 0.0;         // x of the first right-side point; +inf if none
    double left_cost = 0.0;   // max cost of the prefix against height a
    double right_cost = 0.0;  // max cost of the suffix against height b
    double cost = 0.0;        // max of the two
    std::size_t left_count = 0;
};

// Optimal two-segment split with both heights fixed; returns the canonical
// split with the largest prefix among minimizers.
Split2 doubly2(const std::vector<Pt>& pts, double a, double b);

// Left-anchored 2-step solver (first height fixed at a).
Plan lanch2(std::vector<Pt> pts, double a, Diag* diag);

// Exhaustive DP over x-runs; exact for any size. Base case for small sets and
// for instances whose run count is at most steps + 2.
Plan small_dp(std::vector<Pt> pts, int steps, const Anchors& anc);

// Rearranges pts into `buckets` contiguous groups of near-equal point count,
// each closed upward to a run boundary; returns the buckets+1 prefix bounds.
// Trailing buckets may come out empty when closure swallows their share.
std::vector<std::size_t> partition_closed(std::vector<Pt>& pts, std::size_t buckets);

struct RoundResult {
    bool terminal = false;      // plan carries the finished answer
    Plan plan;
    std::size_t removed = 0;    // points dropped when not terminal
    std::size_t big_index = 0;  // 1-based certified bucket, 0 if none reached
};

// One certify-and-prune round of the general solver: partitions, locates a
// bucket some optimal segment spans, and eliminates a constant fraction of
// it. Mutates pts on progress.
RoundResult prune_round(std::vector<Pt>& pts, int steps, const Anchors& anc, Diag* diag);

// General solver. `inner` enables the work-estimate DP shortcut used by
// recursive sub-solves; top-level calls keep the documented base threshold.
Plan solve_steps(std::vector<Pt> pts, int steps, const Anchors& anc, Diag* diag,
                 bool inner);

// Feasibility bisection fallback: multiplicative search from a feasible level
// down to a 1e-12 relative bracket. Always returns an achieved witness plan.
Plan bisect_solve(const std::vector<Pt>& pts, int steps, const Anchors& anc,
                  double hi_feasible);

// Witness refit ladder at a target level (exact, then +1e-12, then +1e-9
// relative, then upward bisection). Always returns a valid achieved plan with
// its cost recomputed against pts.
Plan finalize_at(const std::vector<Pt>& pts, double D, int steps, const Anchors& anc);

// A level at which the instance is certainly feasible (single working segment
// at an anchor height, or the 1-center level when free).
double upper_level(const std::vector<Pt>& pts, const Anchors& anc);

double plan_value(const Plan& plan, double x);
double plan_cost(const std::vector<Pt>& pts, const Plan& plan);

std::vector<Pt> reflect_x(std::vector<Pt> pts);
// Maps a plan solved on reflect_x(original) back onto the original axis.
Plan unreflect_plan(const Plan& plan, const std::vector<Pt>& original);

// Realizes a plan as a step function tiling [min x, max x]; pads with
// zero-width trailing segments at the last height up to pad_to segments
// (0 = no padding).
StepFunction plan_to_stepfunction(const std::vector<Pt>& pts, const Plan& plan,
                                  std::size_t pad_to);

}  // namespace stepfit::detail

#endif
