#include "pnrpa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pnrpa/pareto.hpp"

namespace pnrpa {

double hypervolume_2d(std::span<const ObjectiveVector> front, const ReferencePoint& ref) {
    if (ref.size() != 2) throw ContractError("hypervolume_2d: reference point must have two coordinates");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(front.size());
    for (const auto& y : front) {
        if (y.size() != 2) throw ContractError("hypervolume_2d: front points must have two coordinates");
        if (y[0] < ref[0] && y[1] < ref[1]) pts.emplace_back(y[0], y[1]);
    }
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double ceiling = ref[1];
    for (const auto& [x, y] : pts) {
        if (y < ceiling) {
            area += (ref[0] - x) * (ceiling - y);
            ceiling = y;
        }
    }
    return area;
}

double normalized_hypervolume(std::span<const ObjectiveVector> front, const ReferencePoint& ref, double hv_max) {
    if (!(hv_max > 0.0)) throw ContractError("normalized_hypervolume: hv_max must be positive");
    return std::clamp(hypervolume_2d(front, ref) / hv_max, 0.0, 1.0);
}

double overall_spread(std::span<const ObjectiveVector> front, const ObjectiveVector& ideal,
                      const ObjectiveVector& maximal) {
    if (ideal.size() != maximal.size()) throw ContractError("overall_spread: ideal/maximal length mismatch");
    if (front.empty()) return 0.0;
    double product = 1.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        const double box = std::abs(ideal[i] - maximal[i]);
        if (box == 0.0) return 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& y : front) {
            if (y.size() != ideal.size()) throw ContractError("overall_spread: dimension mismatch");
            lo = std::min(lo, y[i]);
            hi = std::max(hi, y[i]);
        }
        product *= std::abs(hi - lo) / box;
    }
    return product;
}

std::optional<double> spacing(std::span<const ObjectiveVector> front) {
    const std::size_t n = front.size();
    if (n < 2) return std::nullopt;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (j == k) continue;
            double d = 0.0;
            for (std::size_t i = 0; i < front[j].size(); ++i) d += std::abs(front[j][i] - front[k][i]);
            nearest[j] = std::min(nearest[j], d);
        }
    }
    double mean = 0.0;
    for (double d : nearest) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : nearest) ss += (mean - d) * (mean - d);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

Aggregate aggregate_runs(std::span<const double> per_run) {
    if (per_run.empty()) throw ContractError("aggregate_runs: no runs");
    const auto n = static_cast<double>(per_run.size());
    double mean = 0.0;
    for (double x : per_run) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : per_run) ss += (x - mean) * (x - mean);
    const double sigma = std::sqrt(ss / n);
    return {mean, 1.96 * sigma / std::sqrt(n)};
}

std::optional<ReferencePoint> reference_point_from_union(std::span<const ObjectiveVector> valid_points) {
    if (valid_points.empty()) return std::nullopt;
    ReferencePoint r = valid_points.front();
    for (const auto& y : valid_points) {
        if (y.size() != r.size()) throw ContractError("reference_point_from_union: dimension mismatch");
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::max(r[i], y[i]);
    }
    return r;
}

std::vector<ObjectiveVector> valid_points(std::span<const Solution> solutions) {
    std::vector<ObjectiveVector> out;
    for (const auto& s : solutions) {
        if (s.violations == 0) out.push_back(s.objectives);
    }
    return out;
}

Normalizer make_normalizer(std::span<const ObjectiveVector> valid_pool, std::string source) {
    Normalizer out;
    out.source = std::move(source);
    out.reference = reference_point_from_union(valid_pool);
    if (!out.reference) return out;

    out.maximal = *out.reference;
    out.ideal = valid_pool.front();
    for (const auto& y : valid_pool) {
        for (std::size_t i = 0; i < y.size(); ++i) out.ideal[i] = std::min(out.ideal[i], y[i]);
    }
    const auto fronts = non_dominated_sort(valid_pool);
    for (std::size_t idx : fronts.front()) {
        const auto& y = valid_pool[idx];
        if (std::find(out.pool_front.begin(), out.pool_front.end(), y) == out.pool_front.end()) {
            out.pool_front.push_back(y);
        }
    }
    std::sort(out.pool_front.begin(), out.pool_front.end());
    out.hv_max = hypervolume_2d(out.pool_front, *out.reference);
    return out;
}

MetricBundle evaluate_front(std::span<const Solution> front, const Normalizer& normalizer) {
    MetricBundle m;
    if (!front.empty()) {
        double total = 0.0;
        for (const auto& s : front) total += s.violations;
        m.constraint_violations = total / static_cast<double>(front.size());
    }
    const auto valid = valid_points(front);
    if (valid.empty()) return m;

    m.spacing = valid.size() == 1 ? 0.0 : *spacing(valid);
    if (!normalizer.reference) return m;

    m.hypervolume = hypervolume_2d(valid, *normalizer.reference);
    if (normalizer.hv_max > 0.0) {
        m.normalized_hv = normalized_hypervolume(valid, *normalizer.reference, normalizer.hv_max);
    } else {
        const bool covers = std::all_of(normalizer.pool_front.begin(), normalizer.pool_front.end(),
                                        [&](const ObjectiveVector& target) {
                                            return std::any_of(valid.begin(), valid.end(), [&](const auto& y) {
                                                return y == target || dominates(y, target);
                                            });
                                        });
        m.normalized_hv = covers ? 1.0 : 0.0;
    }
    m.overall_spread = overall_spread(valid, normalizer.ideal, normalizer.maximal);
    return m;
}

}  // namespace pnrpa
