#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pnrpa/pareto.hpp"
#include "pnrpa/policy.hpp"
#include "pnrpa/problem.hpp"
#include "pnrpa/rng.hpp"
#include "pnrpa/types.hpp"

namespace pnrpa {

enum class AdaptStrategy { all_sequences, one_sequence };

struct SearchConfig {
    int level = 4;
    double alpha = 0.5;
    std::size_t n_policies = 4;
    std::size_t iterations_per_level = 100;
    std::uint64_t eval_budget = 100000;
    bool use_bias = true;
    bool cd_weighting = true;
    AdaptStrategy adapt_strategy = AdaptStrategy::all_sequences;
    double cd_clip = 2.0;
    std::uint64_t rng_seed = 0;

    /// Throws ContractError if any field is out of range.
    void validate() const;

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

std::string to_string(AdaptStrategy s);
AdaptStrategy parse_adapt_strategy(const std::string& name);

/// Counts objective-function evaluations (playouts) against a hard budget.
class EvalCounter {
public:
    explicit EvalCounter(std::uint64_t budget) : budget_(budget) {}

    [[nodiscard]] bool exhausted() const noexcept { return used_ >= budget_; }
    [[nodiscard]] std::uint64_t used() const noexcept { return used_; }
    [[nodiscard]] std::uint64_t budget() const noexcept { return budget_; }

    void consume() {
        if (exhausted()) throw ContractError("EvalCounter: evaluation budget exceeded");
        ++used_;
    }

private:
    std::uint64_t budget_;
    std::uint64_t used_ = 0;
};

/// Called after every adaptation of a level >= 1 search with the level, the
/// iteration index, the adapted policies and the solutions the level keeps
/// (its archive front, or the best sequence for NRPA).
using IterationObserver =
    std::function<void(int, std::size_t, std::span<const PolicyTable>, std::span<const Solution>)>;

namespace detail {

template <SequentialProblem P>
void collect_legal(const P& problem, const typename P::State& state, std::vector<Move>& scratch,
                   std::vector<LegalMove>& out) {
    scratch.clear();
    problem.legal_moves(state, scratch);
    out.clear();
    for (Move m : scratch) {
        out.push_back({m, static_cast<std::size_t>(problem.code(state, m)), static_cast<double>(problem.bias(state, m))});
    }
}

}  // namespace detail

/// One root-to-terminal rollout sampling each move from the policy softmax.
/// Consumes exactly one evaluation and one uniform draw per state with more
/// than one legal move.
template <SequentialProblem P>
Solution playout(const P& problem, const PolicyTable& policy, bool use_bias, Rng& rng, EvalCounter& counter,
                 std::size_t policy_index = 0) {
    if (counter.exhausted()) throw ContractError("playout: evaluation budget exhausted");
    auto state = problem.root();
    Solution out;
    out.policy_index = policy_index;

    std::vector<Move> scratch;
    std::vector<LegalMove> legal;
    std::vector<double> probs;
    while (!problem.is_terminal(state)) {
        detail::collect_legal(problem, state, scratch, legal);
        if (legal.empty()) throw ContractError("playout: non-terminal state without legal moves");
        std::size_t pick = 0;
        if (legal.size() > 1) {
            action_probabilities(policy, legal, use_bias, probs);
            const double u = uniform01(rng);
            double cumulative = 0.0;
            pick = legal.size() - 1;
            for (std::size_t i = 0; i < legal.size(); ++i) {
                cumulative += probs[i];
                if (u < cumulative) {
                    pick = i;
                    break;
                }
            }
        }
        problem.play(state, legal[pick].move);
        out.moves.push_back(legal[pick].move);
    }
    counter.consume();
    auto eval = problem.evaluate(state);
    out.objectives = std::move(eval.objectives);
    out.violations = eval.violations;
    return out;
}

/// Gradient step of `table` toward `sequence`, scaled by alpha * weight.
///
/// Probabilities are read from the table as it was on entry for every step
/// of the sequence; the updates are applied afterwards in step order.
template <SequentialProblem P>
void adapt_in_place(PolicyTable& table, const std::vector<Move>& sequence, const P& problem, double alpha,
                    double weight, bool use_bias) {
    struct Delta {
        std::size_t code;
        double value;
    };
    std::vector<Delta> deltas;
    std::vector<Move> scratch;
    std::vector<LegalMove> legal;
    std::vector<double> probs;
    const double step = alpha * weight;

    auto state = problem.root();
    for (Move move : sequence) {
        if (problem.is_terminal(state)) throw ContractError("adapt: sequence continues past a terminal state");
        detail::collect_legal(problem, state, scratch, legal);
        auto played = std::find_if(legal.begin(), legal.end(), [&](const LegalMove& l) { return l.move == move; });
        if (played == legal.end()) throw ContractError("adapt: illegal move in sequence");
        action_probabilities(table, legal, use_bias, probs);
        deltas.push_back({played->code, step});
        for (std::size_t i = 0; i < legal.size(); ++i) {
            deltas.push_back({legal[i].code, -step * probs[i]});
        }
        problem.play(state, move);
    }
    for (const auto& d : deltas) table.add(d.code, d.value);
}

/// Returns a copy of `policy` adapted toward `sequence` (NRPA Adapt with a
/// per-sequence weight).
template <SequentialProblem P>
PolicyTable adapt_single(const PolicyTable& policy, const Solution& sequence, const P& problem, double alpha,
                         double weight, bool use_bias) {
    if (!(weight > 0.0)) throw ContractError("adapt_single: weight must be positive");
    PolicyTable out = policy;
    adapt_in_place(out, sequence.moves, problem, alpha, weight, use_bias);
    return out;
}

/// The solutions Pareto-Adapt works on: the archive front in recency order,
/// followed by one representative (lowest available front) for every policy
/// that has no member in the front, drawn from the archive and `recent`.
std::vector<Solution> build_adapt_set(const ParetoArchive& archive, std::span<const Solution> recent,
                                      std::size_t n_policies);

/// Per-solution adaptation weights: the clipped crowding distance, or 1 when
/// CD weighting is off. Under the one-sequence strategy only the highest-CD
/// solution of each policy (the latest one on ties) gets a non-zero weight.
std::vector<double> adapt_weights(std::span<const Solution> adapt_set, const SearchConfig& config);

template <SequentialProblem P>
void pareto_adapt_in_place(PolicySet& policies, std::span<const Solution> adapt_set, const P& problem,
                           const SearchConfig& config) {
    const auto weights = adapt_weights(adapt_set, config);
    for (std::size_t i = 0; i < adapt_set.size(); ++i) {
        const auto& s = adapt_set[i];
        if (s.policy_index >= policies.size()) throw ContractError("pareto_adapt: policy index out of range");
        if (weights[i] <= 0.0) continue;
        adapt_in_place(policies[s.policy_index], s.moves, problem, config.alpha, weights[i], config.use_bias);
    }
}

template <SequentialProblem P>
PolicySet pareto_adapt(const PolicySet& policies, std::span<const Solution> adapt_set, const P& problem,
                       const SearchConfig& config) {
    PolicySet out = policies;
    pareto_adapt_in_place(out, adapt_set, problem, config);
    return out;
}

/// Pareto-NRPA at `level`. Every level keeps its own archive; a level >= 1
/// search adapts a private copy of the policies after each lower-level call.
/// Stops as soon as the evaluation budget is spent and returns the archive
/// it has so far.
template <SequentialProblem P>
ParetoArchive pareto_nrpa(int level, const PolicySet& policies, const P& problem, EvalCounter& counter,
                          const SearchConfig& config, Rng& rng, const IterationObserver* observer = nullptr) {
    ParetoArchive archive;
    if (counter.exhausted()) return archive;
    if (level <= 0) {
        const std::size_t k = policies.size() == 1 ? 0 : uniform_index(rng, policies.size());
        archive.insert(playout(problem, policies[k], config.use_bias, rng, counter, k));
        return archive;
    }

    PolicySet local = policies;
    for (std::size_t i = 0; i < config.iterations_per_level; ++i) {
        if (counter.exhausted()) break;
        ParetoArchive result = pareto_nrpa(level - 1, local, problem, counter, config, rng, observer);
        archive.merge(result);
        if (counter.exhausted()) break;
        const auto adapt_set = build_adapt_set(archive, result.front(), local.size());
        pareto_adapt_in_place(local, adapt_set, problem, config);
        if (observer != nullptr && *observer) (*observer)(level, i, local, archive.front());
    }
    return archive;
}

struct ParetoSearchResult {
    ParetoArchive archive;
    std::uint64_t evaluations = 0;
};

/// Runs Pareto-NRPA from uniform policies at config.level.
template <SequentialProblem P>
ParetoSearchResult run_pareto_nrpa(const P& problem, const SearchConfig& config, Rng& rng,
                                   const IterationObserver* observer = nullptr) {
    config.validate();
    EvalCounter counter(config.eval_budget);
    PolicySet policies(config.n_policies);
    ParetoSearchResult out;
    out.archive = pareto_nrpa(config.level, policies, problem, counter, config, rng, observer);
    out.evaluations = counter.used();
    return out;
}

template <SequentialProblem P>
ParetoSearchResult run_pareto_nrpa(const P& problem, const SearchConfig& config) {
    Rng rng(config.rng_seed);
    return run_pareto_nrpa(problem, config, rng);
}

struct NrpaResult {
    double score = -std::numeric_limits<double>::infinity();
    Solution solution;
};

/// Classic single-policy NRPA. The score is the negated single objective,
/// since the problems minimize. Returns nothing if the budget was already
/// exhausted on entry.
template <SequentialProblem P>
std::optional<NrpaResult> nrpa(int level, const PolicyTable& policy, const P& problem, EvalCounter& counter,
                               const SearchConfig& config, Rng& rng, const IterationObserver* observer = nullptr) {
    if (problem.n_objectives() != 1) throw ContractError("nrpa: problem must have exactly one objective");
    if (counter.exhausted()) return std::nullopt;
    if (level <= 0) {
        NrpaResult r;
        r.solution = playout(problem, policy, config.use_bias, rng, counter, 0);
        r.score = -r.solution.objectives.front();
        return r;
    }

    std::optional<NrpaResult> best;
    PolicyTable local = policy;
    for (std::size_t i = 0; i < config.iterations_per_level; ++i) {
        if (counter.exhausted()) break;
        auto result = nrpa(level - 1, local, problem, counter, config, rng, observer);
        if (result && (!best || result->score >= best->score)) best = std::move(result);
        if (!best || counter.exhausted()) break;
        adapt_in_place(local, best->solution.moves, problem, config.alpha, 1.0, config.use_bias);
        if (observer != nullptr && *observer) {
            (*observer)(level, i, std::span<const PolicyTable>(&local, 1), std::span<const Solution>(&best->solution, 1));
        }
    }
    return best;
}

/// Runs `config.eval_budget` independent playouts under uniform weights
/// (bias still applies when enabled) and keeps their non-dominated set.
template <SequentialProblem P>
ParetoSearchResult run_random_playouts(const P& problem, const SearchConfig& config, Rng& rng) {
    config.validate();
    EvalCounter counter(config.eval_budget);
    const PolicyTable uniform;
    ParetoSearchResult out;
    while (!counter.exhausted()) {
        out.archive.insert(playout(problem, uniform, config.use_bias, rng, counter, 0));
    }
    out.evaluations = counter.used();
    return out;
}

}  // namespace pnrpa
