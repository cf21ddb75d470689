#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "pnrpa/types.hpp"

namespace pnrpa {

/// True iff a is no worse than b in every objective and strictly better in
/// at least one. Throws ContractError on a length mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Ranked fronts F_0, F_1, ... as index lists into the sorted population.
/// Indices inside a front are ascending.
using FrontPartition = std::vector<std::vector<std::size_t>>;

/// Fast non-dominated sorting. An empty population yields an empty partition.
FrontPartition non_dominated_sort(std::span<const ObjectiveVector> population);

/// Crowding distance of every member of a front, in input order.
///
/// Extreme points in any objective get +infinity, so fronts of one or two
/// points are all infinite. An objective whose span is zero contributes
/// nothing to interior points. Ties in the per-objective sort are broken by
/// the following objectives (cyclically) and then by input position.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

enum class InsertOutcome { accepted, rejected_dominated, rejected_duplicate };

/// The non-dominated set S* maintained by the search.
///
/// Members are kept in recency order: new members go to the back, and
/// re-offering a stored sequence moves that member to the back without
/// otherwise changing the set. Distinct sequences with identical objective
/// vectors are all kept.
class ParetoArchive {
public:
    ParetoArchive() = default;

    InsertOutcome insert(Solution candidate);

    /// Inserts every member of `other` in its order.
    void merge(const ParetoArchive& other);

    [[nodiscard]] std::span<const Solution> front() const noexcept { return front_; }
    [[nodiscard]] std::size_t size() const noexcept { return front_.size(); }
    [[nodiscard]] bool empty() const noexcept { return front_.empty(); }

    [[nodiscard]] std::vector<ObjectiveVector> objective_vectors() const;

private:
    std::vector<Solution> front_;
};

/// For each policy with at least one solution in the population, the
/// solution of that policy from the lowest-ranked front that contains one
/// (the earliest such member in population order).
std::map<std::size_t, Solution> policy_representatives(std::span<const Solution> population,
                                                       std::size_t n_policies);

}  // namespace pnrpa
