#include "pnrpa/toy.hpp"

#include "pnrpa/rng.hpp"

namespace pnrpa {

ToyTreeProblem::ToyTreeProblem(std::size_t depth, std::size_t branching, std::vector<ObjectiveVector> leaves,
                               std::vector<double> biases)
    : depth_(depth), branching_(branching), leaves_(std::move(leaves)), biases_(std::move(biases)) {
    if (depth < 1 || branching < 1) throw ContractError("ToyTreeProblem: depth and branching must be >= 1");
    std::size_t width = 1;
    n_internal_ = 0;
    for (std::size_t d = 0; d < depth; ++d) {
        depth_offset_.push_back(n_internal_);
        n_internal_ += width;
        width *= branching;
    }
    if (leaves_.size() != width) throw ContractError("ToyTreeProblem: need branching^depth leaves");
    n_objectives_ = leaves_.front().size();
    for (const auto& leaf : leaves_) {
        if (leaf.size() != n_objectives_ || leaf.empty()) {
            throw ContractError("ToyTreeProblem: leaves need one common, non-zero objective count");
        }
    }
    if (!biases_.empty() && biases_.size() != n_codes()) throw ContractError("ToyTreeProblem: need one bias per code");
}

void ToyTreeProblem::legal_moves(const State& s, std::vector<Move>& out) const {
    if (is_terminal(s)) return;
    for (std::size_t m = 0; m < branching_; ++m) out.push_back(static_cast<Move>(m));
}

void ToyTreeProblem::play(State& s, Move m) const {
    if (is_terminal(s) || m < 0 || static_cast<std::size_t>(m) >= branching_) {
        throw ContractError("ToyTreeProblem: illegal move");
    }
    s.node = s.node * branching_ + static_cast<std::size_t>(m);
    ++s.depth;
}

Evaluation ToyTreeProblem::evaluate(const State& s) const {
    if (!is_terminal(s)) throw ContractError("ToyTreeProblem: evaluate needs a leaf");
    return {leaves_[s.node], 0};
}

std::size_t ToyTreeProblem::code(const State& s, Move m) const noexcept {
    return (depth_offset_[s.depth] + s.node) * branching_ + static_cast<std::size_t>(m);
}

double ToyTreeProblem::bias(const State& s, Move m) const noexcept {
    return biases_.empty() ? 0.0 : biases_[code(s, m)];
}

ToyTreeProblem toy_line_problem(std::size_t depth, std::size_t branching, std::size_t n_objectives,
                                std::uint64_t seed) {
    std::size_t n_leaves = 1;
    for (std::size_t d = 0; d < depth; ++d) n_leaves *= branching;
    Rng rng(seed);
    std::vector<ObjectiveVector> leaves(n_leaves, ObjectiveVector(n_objectives));
    for (auto& leaf : leaves) {
        for (auto& v : leaf) v = static_cast<double>(uniform_index(rng, 100));
    }
    return ToyTreeProblem(depth, branching, std::move(leaves));
}

}  // namespace pnrpa
