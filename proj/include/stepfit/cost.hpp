#pragma once

#include "stepfit/types.hpp"

namespace stepfit {

// Weighted vertical distance of p to a horizontal line at height y.
// Linear: |p.y - y| * w.  Squared: (p.y - y)^2 * w.
double point_cost(const WeightedPoint& p, double y, CostModel model = CostModel::Linear);

// Max point_cost over Q against the segment of F covering each point's x.
// Empty Q costs 0 (neutral element of max when minimizing). Throws
// std::domain_error if some point lies outside F's domain.
double set_cost(std::span<const WeightedPoint> q, const StepFunction& f,
                CostModel model = CostModel::Linear);

// Points of Q whose cost reaches set_cost(Q, F) up to the relative tolerance,
// in input order. Nonempty whenever Q is.
std::vector<WeightedPoint> critical_points(std::span<const WeightedPoint> q,
                                           const StepFunction& f,
                                           CostModel model = CostModel::Linear,
                                           double tol = kDefaultTol);

// Heights where the two weighted cost rays of p and q intersect, value-ordered
// (lower <= upper). With equal weights the rays cross once; both fields carry
// that height. Above `upper` and below `lower` the same single point dominates.
struct BisectorPair {
    double lower = 0.0;
    double upper = 0.0;
};

// Throws std::invalid_argument when p and q share both ordinate and weight
// (their cost rays coincide; the caller should drop one point instead).
BisectorPair bisectors(const WeightedPoint& p, const WeightedPoint& q,
                       CostModel model = CostModel::Linear);

}  // namespace stepfit
