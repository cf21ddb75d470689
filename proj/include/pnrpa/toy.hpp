#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pnrpa/problem.hpp"
#include "pnrpa/types.hpp"

namespace pnrpa {

/// A complete tree of fixed depth and branching with an objective vector on
/// every leaf. Every internal node has its own block of move codes, so the
/// codes of a sequence never collide across steps.
class ToyTreeProblem {
public:
    struct State {
        std::size_t depth = 0;
        std::size_t node = 0;  // index of the node within its depth
    };

    /// `leaves` holds branching^depth objective vectors, in the order of the
    /// move sequences read as base-`branching` numbers. `biases`, when not
    /// empty, gives a bias per move code.
    ToyTreeProblem(std::size_t depth, std::size_t branching, std::vector<ObjectiveVector> leaves,
                   std::vector<double> biases = {});

    [[nodiscard]] std::size_t n_objectives() const noexcept { return n_objectives_; }
    [[nodiscard]] State root() const noexcept { return {}; }
    [[nodiscard]] bool is_terminal(const State& s) const noexcept { return s.depth == depth_; }
    void legal_moves(const State& s, std::vector<Move>& out) const;
    void play(State& s, Move m) const;
    [[nodiscard]] Evaluation evaluate(const State& s) const;
    [[nodiscard]] std::size_t code(const State& s, Move m) const noexcept;
    [[nodiscard]] double bias(const State& s, Move m) const noexcept;

    [[nodiscard]] std::size_t depth() const noexcept { return depth_; }
    [[nodiscard]] std::size_t branching() const noexcept { return branching_; }
    [[nodiscard]] std::size_t n_codes() const noexcept { return n_internal_ * branching_; }
    [[nodiscard]] const std::vector<ObjectiveVector>& leaves() const noexcept { return leaves_; }

private:
    std::size_t depth_;
    std::size_t branching_;
    std::size_t n_objectives_;
    std::size_t n_internal_;
    std::vector<std::size_t> depth_offset_;
    std::vector<ObjectiveVector> leaves_;
    std::vector<double> biases_;
};

/// Toy tree with integer leaf objectives drawn from Rng(seed) in [0, 100).
ToyTreeProblem toy_line_problem(std::size_t depth, std::size_t branching, std::size_t n_objectives = 2,
                                std::uint64_t seed = 0);

}  // namespace pnrpa
