#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pnrpa/pareto.hpp"
#include "pnrpa/problem.hpp"
#include "pnrpa/tsptw.hpp"

namespace pnrpa {

/// Largest instance the exhaustive oracle accepts: (n - 1)! <= 3,628,800.
inline constexpr std::size_t kOracleMaxCities = 11;

struct OracleFront {
    std::vector<Solution> front;  // canonical order, see sort_canonical
    std::uint64_t evaluations = 0;
};

/// Exact Pareto front of an MO-TSPTW instance by enumerating every tour.
/// The front is taken over feasible tours, or over all tours when none is
/// feasible. Throws ContractError for n > kOracleMaxCities.
///
/// The tours are split by first city across OpenMP threads; the result is
/// identical to brute_force_front_serial.
OracleFront brute_force_front(const MoTsptwInstance& instance, TsptwOptions options = {});

/// Single-threaded reference enumeration in lexicographic tour order.
OracleFront brute_force_front_serial(const MoTsptwInstance& instance, TsptwOptions options = {});

/// Orders solutions by objective vector, then by move sequence.
void sort_canonical(std::vector<Solution>& solutions);

/// Exact non-dominated set of any enumerable problem, by depth-first search
/// over every move sequence.
template <SequentialProblem P>
std::vector<Solution> enumerate_front(const P& problem) {
    ParetoArchive archive;
    std::vector<Move> path;
    auto visit = [&](auto&& self, const typename P::State& state) -> void {
        if (problem.is_terminal(state)) {
            auto eval = problem.evaluate(state);
            archive.insert({path, std::move(eval.objectives), eval.violations, 0});
            return;
        }
        std::vector<Move> moves;
        problem.legal_moves(state, moves);
        for (Move m : moves) {
            auto next = state;
            problem.play(next, m);
            path.push_back(m);
            self(self, next);
            path.pop_back();
        }
    };
    visit(visit, problem.root());
    std::vector<Solution> out(archive.front().begin(), archive.front().end());
    sort_canonical(out);
    return out;
}

}  // namespace pnrpa
