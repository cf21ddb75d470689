#pragma once

#include <concepts>
#include <cstddef>
#include <vector>

#include "pnrpa/types.hpp"

namespace pnrpa {

/// Result of evaluating a terminal state.
struct Evaluation {
    ObjectiveVector objectives;
    int violations = 0;
};

/// A sequential decision problem the search can drive.
///
/// States are values owned by the caller. `legal_moves` appends nothing for
/// a terminal state; for any other state it must return at least one move.
/// `code` must give distinct codes to distinct legal moves of one state.
template <typename P>
concept SequentialProblem = requires(const P& p, typename P::State& s, const typename P::State& cs,
                                     std::vector<Move>& moves, Move m) {
    typename P::State;
    { p.n_objectives() } -> std::convertible_to<std::size_t>;
    { p.root() } -> std::same_as<typename P::State>;
    { p.is_terminal(cs) } -> std::convertible_to<bool>;
    p.legal_moves(cs, moves);
    p.play(s, m);
    { p.evaluate(cs) } -> std::same_as<Evaluation>;
    { p.code(cs, m) } -> std::convertible_to<std::size_t>;
    { p.bias(cs, m) } -> std::convertible_to<double>;
};

/// Replays `moves` from the root and evaluates the final state. Throws
/// ContractError if a move is illegal or the sequence does not end in a
/// terminal state.
template <SequentialProblem P>
Evaluation replay_evaluate(const P& problem, const std::vector<Move>& moves) {
    auto state = problem.root();
    std::vector<Move> legal;
    for (Move m : moves) {
        legal.clear();
        problem.legal_moves(state, legal);
        bool ok = false;
        for (Move l : legal) ok = ok || l == m;
        if (!ok) throw ContractError("replay_evaluate: illegal move in sequence");
        problem.play(state, m);
    }
    if (!problem.is_terminal(state)) throw ContractError("replay_evaluate: sequence is not terminal");
    return problem.evaluate(state);
}

}  // namespace pnrpa

namespace pnrpa {

/// Views a multi-objective problem through one of its objectives, so the
/// single-objective NRPA can run on it. The wrapped problem must outlive
/// the view.
template <SequentialProblem P>
class ObjectiveProjection {
public:
    using State = typename P::State;

    ObjectiveProjection(const P& inner, std::size_t objective) : inner_(&inner), objective_(objective) {
        if (objective >= inner.n_objectives()) throw ContractError("ObjectiveProjection: objective out of range");
    }

    [[nodiscard]] std::size_t n_objectives() const noexcept { return 1; }
    [[nodiscard]] State root() const { return inner_->root(); }
    [[nodiscard]] bool is_terminal(const State& s) const { return inner_->is_terminal(s); }
    void legal_moves(const State& s, std::vector<Move>& out) const { inner_->legal_moves(s, out); }
    void play(State& s, Move m) const { inner_->play(s, m); }
    [[nodiscard]] Evaluation evaluate(const State& s) const {
        auto full = inner_->evaluate(s);
        return {{full.objectives[objective_]}, full.violations};
    }
    [[nodiscard]] std::size_t code(const State& s, Move m) const { return inner_->code(s, m); }
    [[nodiscard]] double bias(const State& s, Move m) const { return inner_->bias(s, m); }

    [[nodiscard]] const P& inner() const noexcept { return *inner_; }

private:
    const P* inner_;
    std::size_t objective_;
};

}  // namespace pnrpa
