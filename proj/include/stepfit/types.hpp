#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepfit {

// Default relative tolerance for cost comparisons throughout the library.
inline constexpr double kDefaultTol = 1e-9;

// |a - b| <= tol * (1 + max(|a|, |b|)): relative for large values, absolute near zero.
inline bool approx_eq(double a, double b, double tol = kDefaultTol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline bool approx_le(double a, double b, double tol = kDefaultTol) {
    return a <= b + tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

enum class CostModel { Linear, Squared };

struct WeightedPoint {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    int id = 0;  // stable input index, used for deterministic tie-breaking
};

// Lexicographic (x, y, id) order used everywhere an x-order has to be total.
inline bool xy_less(const WeightedPoint& a, const WeightedPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.id < b.id;
}

// One horizontal piece of a step function. Covers [x_left, x_right); the last
// segment of a StepFunction is closed on the right.
struct Segment {
    double x_left = 0.0;
    double x_right = 0.0;
    double y = 0.0;
};

struct StepFunction {
    std::vector<Segment> segments;

    bool empty() const { return segments.empty(); }
    std::size_t size() const { return segments.size(); }

    double domain_left() const { return segments.front().x_left; }
    double domain_right() const { return segments.back().x_right; }

    bool contains(double x) const {
        return !segments.empty() && x >= domain_left() && x <= domain_right();
    }

    // Index of the segment whose interval contains x. Half-open pieces except
    // the last, which is closed so the right endpoint of the domain evaluates.
    std::size_t segment_index(double x) const {
        if (!contains(x))
            throw std::domain_error("StepFunction: x=" + std::to_string(x) +
                                    " outside domain");
        // first segment with x_right > x, else the last one
        std::size_t lo = 0, hi = segments.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (segments[mid].x_right > x) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

    double value(double x) const { return segments[segment_index(x)].y; }
};

// Contiguous k-partition of an x-sorted point set, stored as prefix counts:
// bucket h holds sorted positions [boundaries[h], boundaries[h+1]).
struct PartitionScheme {
    std::vector<std::size_t> boundaries;  // size k+1, boundaries[0]=0, boundaries[k]=n
    std::size_t bucket_count() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
    std::size_t bucket_size(std::size_t h) const { return boundaries[h + 1] - boundaries[h]; }
};

// One pruning step performed by a solver round. `set_size` is the size of the
// set the rule was applied to, `removed` how many points it discarded, and
// `guarantee` the minimum the rule promises for that set size.
struct PruneEvent {
    enum class Kind {
        OneCenter,       // pair-bisector elimination inside a 1-center solve
        BigBucket,       // interior big-bucket elimination at a fixed height
        AnchorCollapse,  // anchored extreme bucket collapsed to its critical point
        HalfDiscard,     // anchored 2-step half-discard round
        PairPrune,       // anchored 2-step pair elimination round
    };
    Kind kind = Kind::OneCenter;
    std::size_t set_size = 0;
    std::size_t removed = 0;
    std::size_t guarantee = 0;
};

// Throws std::invalid_argument naming the offending point if any weight is
// nonpositive or any field is nonfinite, or if ids repeat.
void validate_points(std::span<const WeightedPoint> pts);

}  // namespace stepfit
