#pragma once

#include <span>
#include <vector>

#include "stepfit/types.hpp"

namespace stepfit {

// One pair of points with its bisector heights and family memberships
// relative to the rank heights U and L of a classification round.
struct ClassifiedPair {
    WeightedPoint a;
    WeightedPoint b;
    double lower = 0.0;
    double upper = 0.0;
    bool upper_low_third = false;   // upper bisector at or below U
    bool upper_high_two_thirds = false;  // upper bisector at or above U
    bool lower_high_third = false;  // lower bisector at or above L
    bool lower_low_two_thirds = false;   // lower bisector at or below L
};

struct PairClassification {
    double u = 0.0;  // rank height picked from the upper bisectors
    double l = 0.0;  // rank height picked from the lower bisectors
    std::vector<ClassifiedPair> pairs;
    // Points surviving the duplicate-ordinate reduction, in (x, y, id) order;
    // pairs are consecutive entries, an odd leftover stays unpaired.
    std::vector<WeightedPoint> kept;
    // Points removed by the duplicate-ordinate reduction (lighter of any two
    // sharing an ordinate; ids break weight ties).
    std::vector<WeightedPoint> duplicate_drops;
};

// Location of the maximum-cost points of a set relative to a probe height.
enum class SideReport { Above, Below, Both };

// Pairs up the points (after dropping lighter duplicates by ordinate) and
// selects the rank heights U and L from the pair bisectors. Throws
// std::invalid_argument when fewer than two points survive the reduction.
PairClassification classify_pairs(std::span<const WeightedPoint> pts);

// Reports which side of height y the critical points lie on; a critical point
// exactly at y, or critical points on both sides, give Both. Both implies y is
// an optimal 1-step height (within tolerance).
SideReport side_of_critical(std::span<const WeightedPoint> pts, double y,
                            CostModel model = CostModel::Linear);

// Removes at least floor(m/6) of the m points using the bisector dominance
// rules, preserving the 1-center height and cost. Both reports must point
// strictly to one side; throws std::invalid_argument otherwise.
std::vector<WeightedPoint> prune_one_sixth(std::span<const WeightedPoint> pts,
                                           const PairClassification& cl,
                                           SideReport side_u, SideReport side_l);

struct OneCenterResult {
    double y = 0.0;     // optimal height
    double cost = 0.0;  // max weighted distance at that height
};

// Optimal 1-step (weighted 1-center) fit. Linear in the number of points.
// `events`, when given, receives one record per pruning round.
OneCenterResult weighted_one_center(std::span<const WeightedPoint> pts,
                                    CostModel model = CostModel::Linear,
                                    std::vector<PruneEvent>* events = nullptr);

}  // namespace stepfit
