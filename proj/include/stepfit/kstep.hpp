#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stepfit/types.hpp"

namespace stepfit {

struct FeasibilityWitness {
    bool feasible = false;
    // A k-step function with cost at most the probed level, when feasible.
    std::optional<StepFunction> steps;
};

struct FitDiagnostics {
    std::size_t rounds = 0;                          // outer prune rounds
    std::vector<std::size_t> pruned_per_round;       // points removed per round
    std::vector<std::size_t> big_partition_indices;  // certified bucket per round
    double wall_ms = 0.0;
    std::vector<PruneEvent> prune_log;  // every elimination rule application
};

struct FitReport {
    double cost = 0.0;
    StepFunction fit;
    FitDiagnostics diagnostics;
};

// k contiguous buckets of the (x, y, id)-sorted order with sizes differing by
// at most one, larger buckets first. k is clamped to the point count.
PartitionScheme equal_size_partition(std::span<const WeightedPoint> pts,
                                     std::size_t k);

// Decides whether a k-step function with cost <= d exists, by greedy maximal
// step extension over admissible height intervals; returns a witness fit with
// exactly k segments when it does.
FeasibilityWitness feasibility_test(std::span<const WeightedPoint> pts, double d,
                                    std::size_t k);

// Index j (1-based) of a bucket of the scheme that is spanned by one segment
// of some optimal k-step solution.
std::size_t find_big_partition(std::span<const WeightedPoint> pts,
                               const PartitionScheme& scheme, std::size_t k,
                               CostModel model = CostModel::Linear);

// One elimination round against a certified big bucket: returns the reduced
// set (optimal cost preserved), or the input set unchanged when the round
// resolves the instance outright instead of pruning.
std::vector<WeightedPoint> prune_big(std::span<const WeightedPoint> pts,
                                     const PartitionScheme& scheme, std::size_t j,
                                     std::size_t k,
                                     CostModel model = CostModel::Linear);

// Optimal k-step fit minimizing the maximum weighted vertical distance.
// Linear in the point count for fixed k. k is clamped to the point count; the
// reported fit always has that many segments, zero-width ones padding the tail
// when fewer distinct heights are needed.
FitReport k_step(std::span<const WeightedPoint> pts, std::size_t k,
                 CostModel model = CostModel::Linear);

}  // namespace stepfit
