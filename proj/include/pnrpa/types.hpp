#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnrpa {

/// Objective values, one per objective; every objective is minimized.
using ObjectiveVector = std::vector<double>;

/// Problem-specific move identifier (a city index for MO-TSPTW).
using Move = int;

/// Raised when a caller breaks a documented precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A terminal move sequence together with its evaluation and the index of
/// the policy that produced it.
struct Solution {
    std::vector<Move> moves;
    ObjectiveVector objectives;
    int violations = 0;
    std::size_t policy_index = 0;

    friend bool operator==(const Solution&, const Solution&) = default;
};

}  // namespace pnrpa
