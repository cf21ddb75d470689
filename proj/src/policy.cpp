#include "pnrpa/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pnrpa {

bool operator==(const PolicyTable& a, const PolicyTable& b) {
    const std::size_t n = std::max(a.weights_.size(), b.weights_.size());
    for (std::size_t code = 0; code < n; ++code) {
        if (a.weight(code) != b.weight(code)) return false;
    }
    return true;
}

void action_probabilities(const PolicyTable& policy, std::span<const LegalMove> legal, bool use_bias,
                          std::vector<double>& out) {
    if (legal.empty()) throw ContractError("action_probabilities: no legal moves");
    out.resize(legal.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < legal.size(); ++i) {
        out[i] = policy.weight(legal[i].code) + (use_bias ? legal[i].bias : 0.0);
        top = std::max(top, out[i]);
    }
    double z = 0.0;
    for (auto& p : out) {
        p = std::exp(p - top);
        z += p;
    }
    for (auto& p : out) p /= z;
}

std::vector<double> action_probabilities(const PolicyTable& policy, std::span<const LegalMove> legal,
                                         bool use_bias) {
    std::vector<double> out;
    action_probabilities(policy, legal, use_bias, out);
    return out;
}

}  // namespace pnrpa
