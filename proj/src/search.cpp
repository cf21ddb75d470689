#include "pnrpa/search.hpp"

#include <cmath>

namespace pnrpa {

void SearchConfig::validate() const {
    if (level < 1) throw ContractError("SearchConfig: level must be >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ContractError("SearchConfig: alpha must be > 0");
    if (n_policies < 1) throw ContractError("SearchConfig: n_policies must be >= 1");
    if (iterations_per_level < 1) throw ContractError("SearchConfig: iterations_per_level must be >= 1");
    if (eval_budget < 1) throw ContractError("SearchConfig: eval_budget must be >= 1");
    if (!(cd_clip > 0.0)) throw ContractError("SearchConfig: cd_clip must be > 0");
}

std::string to_string(AdaptStrategy s) {
    return s == AdaptStrategy::all_sequences ? "all" : "one";
}

AdaptStrategy parse_adapt_strategy(const std::string& name) {
    if (name == "all") return AdaptStrategy::all_sequences;
    if (name == "one") return AdaptStrategy::one_sequence;
    throw ContractError("unknown adapt strategy '" + name + "' (expected all|one)");
}

std::vector<Solution> build_adapt_set(const ParetoArchive& archive, std::span<const Solution> recent,
                                      std::size_t n_policies) {
    std::vector<Solution> out(archive.front().begin(), archive.front().end());

    std::vector<bool> represented(n_policies, false);
    for (const auto& s : out) {
        if (s.policy_index >= n_policies) throw ContractError("build_adapt_set: policy index out of range");
        represented[s.policy_index] = true;
    }
    if (std::all_of(represented.begin(), represented.end(), [](bool b) { return b; })) return out;

    std::vector<Solution> pool = out;
    pool.insert(pool.end(), recent.begin(), recent.end());
    for (auto& [policy, rep] : policy_representatives(pool, n_policies)) {
        if (!represented[policy]) out.push_back(std::move(rep));
    }
    return out;
}

std::vector<double> adapt_weights(std::span<const Solution> adapt_set, const SearchConfig& config) {
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(adapt_set.size());
    for (const auto& s : adapt_set) objectives.push_back(s.objectives);
    const auto cd = crowding_distance(objectives);

    std::vector<double> weights(adapt_set.size());
    for (std::size_t i = 0; i < adapt_set.size(); ++i) {
        weights[i] = config.cd_weighting ? std::min(cd[i], config.cd_clip) : 1.0;
    }
    if (config.adapt_strategy == AdaptStrategy::all_sequences) return weights;

    // One sequence per policy: the highest crowding distance, latest on ties.
    std::vector<std::size_t> chosen(config.n_policies, adapt_set.size());
    for (std::size_t i = 0; i < adapt_set.size(); ++i) {
        const std::size_t k = adapt_set[i].policy_index;
        if (k >= chosen.size()) throw ContractError("adapt_weights: policy index out of range");
        if (chosen[k] == adapt_set.size() || cd[i] >= cd[chosen[k]]) chosen[k] = i;
    }
    std::vector<double> one(adapt_set.size(), 0.0);
    for (std::size_t idx : chosen) {
        if (idx < adapt_set.size()) one[idx] = weights[idx];
    }
    return one;
}

}  // namespace pnrpa
