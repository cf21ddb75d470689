#include "pnrpa/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pnrpa {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size()) {
        throw ContractError("dominates: objective vectors differ in length");
    }
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

FrontPartition non_dominated_sort(std::span<const ObjectiveVector> population) {
    const std::size_t n = population.size();
    FrontPartition fronts;
    if (n == 0) return fronts;

    const std::size_t dim = population.front().size();
    for (const auto& v : population) {
        if (v.size() != dim) throw ContractError("non_dominated_sort: mixed objective lengths");
    }

    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(population[p], population[q])) {
                dominated_by[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(population[q], population[p])) {
                dominated_by[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (domination_count[p] == 0) current.push_back(p);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto p : current) {
            for (auto q : dominated_by[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t l = front.size();
    std::vector<double> distance(l, 0.0);
    if (l <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t dim = front.front().size();

    std::vector<std::size_t> order(l);
    for (std::size_t m = 0; m < dim; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            for (std::size_t k = 0; k < dim; ++k) {
                const std::size_t obj = (m + k) % dim;
                if (front[a][obj] != front[b][obj]) return front[a][obj] < front[b][obj];
            }
            return a < b;
        });

        const double lo = front[order.front()][m];
        const double hi = front[order.back()][m];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double span = hi - lo;
        if (span == 0.0) continue;
        for (std::size_t i = 1; i + 1 < l; ++i) {
            distance[order[i]] += (front[order[i + 1]][m] - front[order[i - 1]][m]) / span;
        }
    }
    return distance;
}

InsertOutcome ParetoArchive::insert(Solution candidate) {
    if (!front_.empty() && front_.front().objectives.size() != candidate.objectives.size()) {
        throw ContractError("ParetoArchive::insert: objective length mismatch");
    }
    for (auto it = front_.begin(); it != front_.end(); ++it) {
        if (it->objectives == candidate.objectives && it->moves == candidate.moves) {
            std::rotate(it, it + 1, front_.end());
            return InsertOutcome::rejected_duplicate;
        }
        if (dominates(it->objectives, candidate.objectives)) {
            return InsertOutcome::rejected_dominated;
        }
    }
    std::erase_if(front_, [&](const Solution& s) { return dominates(candidate.objectives, s.objectives); });
    front_.push_back(std::move(candidate));
    return InsertOutcome::accepted;
}

void ParetoArchive::merge(const ParetoArchive& other) {
    for (const auto& s : other.front()) insert(s);
}

std::vector<ObjectiveVector> ParetoArchive::objective_vectors() const {
    std::vector<ObjectiveVector> out;
    out.reserve(front_.size());
    for (const auto& s : front_) out.push_back(s.objectives);
    return out;
}

std::map<std::size_t, Solution> policy_representatives(std::span<const Solution> population,
                                                       std::size_t n_policies) {
    std::map<std::size_t, Solution> reps;
    if (population.empty()) return reps;

    std::vector<ObjectiveVector> objectives;
    objectives.reserve(population.size());
    for (const auto& s : population) {
        if (s.policy_index >= n_policies) {
            throw ContractError("policy_representatives: policy index out of range");
        }
        objectives.push_back(s.objectives);
    }
    for (const auto& front : non_dominated_sort(objectives)) {
        for (auto idx : front) {
            const auto& s = population[idx];
            reps.try_emplace(s.policy_index, s);
        }
        if (reps.size() == n_policies) break;
    }
    return reps;
}

}  // namespace pnrpa
