#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnrpa/types.hpp"

namespace pnrpa {

using ReferencePoint = ObjectiveVector;

/// Exact area dominated by a bi-objective front and bounded by `ref`.
/// Points not strictly below `ref` in both objectives add nothing.
double hypervolume_2d(std::span<const ObjectiveVector> front, const ReferencePoint& ref);

/// hypervolume_2d / hv_max clamped to [0, 1]. Throws ContractError if
/// hv_max <= 0.
double normalized_hypervolume(std::span<const ObjectiveVector> front, const ReferencePoint& ref, double hv_max);

/// Product over objectives of the front extent divided by the
/// ideal-to-maximal extent. An objective with ideal == maximal gives a
/// factor of 0, and so does an empty front.
double overall_spread(std::span<const ObjectiveVector> front, const ObjectiveVector& ideal,
                      const ObjectiveVector& maximal);

/// Sample standard deviation of the nearest-neighbour L1 distances, or
/// nullopt for fewer than two points.
std::optional<double> spacing(std::span<const ObjectiveVector> front);

struct Aggregate {
    double mean = 0.0;
    double ci95 = 0.0;  // 1.96 * sigma / sqrt(n), sigma with divisor n

    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

/// Throws ContractError on an empty input.
Aggregate aggregate_runs(std::span<const double> per_run);

/// Coordinatewise maximum of the valid points, or nullopt when there are none.
std::optional<ReferencePoint> reference_point_from_union(std::span<const ObjectiveVector> valid_points);

/// Objective vectors of the solutions with no violated constraint.
std::vector<ObjectiveVector> valid_points(std::span<const Solution> solutions);

struct MetricBundle {
    double hypervolume = 0.0;
    double normalized_hv = 0.0;
    double overall_spread = 0.0;
    std::optional<double> spacing;  // nullopt iff the run has no valid solution
    double constraint_violations = 0.0;

    friend bool operator==(const MetricBundle&, const MetricBundle&) = default;
};

/// Everything needed to score fronts against a common yardstick.
struct Normalizer {
    std::string source;  // "union" or "oracle"
    std::optional<ReferencePoint> reference;  // nullopt when the pool holds no valid point
    ObjectiveVector ideal;
    ObjectiveVector maximal;
    double hv_max = 0.0;
    std::vector<ObjectiveVector> pool_front;  // non-dominated valid points of the pool

    friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

/// Builds the reference point, ideal and maximal vectors and hv_max from a
/// pool of valid points (the union of all compared fronts).
Normalizer make_normalizer(std::span<const ObjectiveVector> valid_pool, std::string source);

/// Scores one run's final front.
///
/// Only valid members enter hypervolume, spread and spacing. When hv_max is
/// 0 the normalized hypervolume is 1 if the valid front covers every point
/// of the pool front and 0 otherwise. A single valid member has spacing 0.
/// constraint_violations is the mean violation count over all members.
MetricBundle evaluate_front(std::span<const Solution> front, const Normalizer& normalizer);

}  // namespace pnrpa
