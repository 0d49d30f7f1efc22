#pragma once

#include <cstddef>
#include <span>

#include "stepfit/anchored.hpp"
#include "stepfit/one_center.hpp"
#include "stepfit/types.hpp"

namespace stepfit {

// Brute-force reference implementations, written independently of the fast
// solvers and shared by tests and the verify command. Clarity over speed.

struct OracleFit {
    StepFunction fit;
    double cost = 0.0;
};

// Exact weighted 1-center: bracketed attainer iteration on the two cost
// envelopes (max falling ray vs max rising ray).
OneCenterResult oracle_one_center(std::span<const WeightedPoint> pts,
                                  CostModel model = CostModel::Linear);

// Exact k-step optimum by dynamic programming over x-runs with a fresh
// 1-center solve per contiguous interval.
OracleFit oracle_k_step(std::span<const WeightedPoint> pts, std::size_t k,
                        CostModel model = CostModel::Linear);

// Sorted greedy sweep: extend each step while the running intersection of
// admissible height intervals [y - d/w, y + d/w] stays nonempty.
bool oracle_feasibility(std::span<const WeightedPoint> pts, double d,
                        std::size_t k);

// k-step DP with the anchored extreme segment heights pinned.
OracleFit oracle_anchored(std::span<const WeightedPoint> pts,
                          const AnchorSpec& anchor, int j,
                          CostModel model = CostModel::Linear);

}  // namespace stepfit
