#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pnrpa/types.hpp"

namespace pnrpa {

/// Move weights keyed by non-negative move code. Codes that were never
/// written read as 0, so a fresh table is the uniform policy.
///
/// Storage is a flat vector that grows on first write; move codes are
/// expected to be small dense integers (from * n + to for MO-TSPTW).
class PolicyTable {
public:
    [[nodiscard]] double weight(std::size_t code) const noexcept {
        return code < weights_.size() ? weights_[code] : 0.0;
    }

    double& at(std::size_t code) {
        if (code >= weights_.size()) weights_.resize(code + 1, 0.0);
        return weights_[code];
    }

    void add(std::size_t code, double delta) { at(code) += delta; }

    /// Number of codes with storage behind them (written at least once, or
    /// below such a code).
    [[nodiscard]] std::size_t stored_codes() const noexcept { return weights_.size(); }

    /// Tables are equal when every code reads the same weight.
    friend bool operator==(const PolicyTable& a, const PolicyTable& b);

private:
    std::vector<double> weights_;
};

using PolicySet = std::vector<PolicyTable>;

/// A legal move at some state together with its policy code and bias.
struct LegalMove {
    Move move = 0;
    std::size_t code = 0;
    double bias = 0.0;
};

/// Softmax of w[code] (+ bias when use_bias) over the legal moves, written
/// into `out`. Uses max-subtraction, so large weights do not overflow.
void action_probabilities(const PolicyTable& policy, std::span<const LegalMove> legal, bool use_bias,
                          std::vector<double>& out);

std::vector<double> action_probabilities(const PolicyTable& policy, std::span<const LegalMove> legal,
                                         bool use_bias);

}  // namespace pnrpa
