#include "pnrpa/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace pnrpa {

namespace {

struct ChunkResult {
    ParetoArchive feasible;
    ParetoArchive any;
    std::uint64_t evaluations = 0;
};

/// Enumerates every tour whose first city is `first` (0 = all tours), in
/// lexicographic order.
void enumerate_tours(const MoTsptw& problem, Move first, ChunkResult& out) {
    const std::size_t n = problem.instance().n;
    std::vector<Move> rest;
    for (std::size_t c = 1; c < n; ++c) {
        if (static_cast<Move>(c) != first) rest.push_back(static_cast<Move>(c));
    }
    do {
        auto state = problem.root();
        if (first != 0) problem.play(state, first);
        for (Move m : rest) problem.play(state, m);
        problem.play(state, 0);
        auto eval = problem.evaluate(state);
        ++out.evaluations;
        Solution s{state.moves, std::move(eval.objectives), eval.violations, 0};
        if (s.violations == 0) {
            out.feasible.insert(std::move(s));
        } else if (out.feasible.empty()) {
            out.any.insert(std::move(s));
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
}

OracleFront finish(std::vector<ChunkResult>& chunks) {
    OracleFront out;
    ParetoArchive feasible;
    ParetoArchive any;
    for (auto& c : chunks) {
        out.evaluations += c.evaluations;
        feasible.merge(c.feasible);
        any.merge(c.any);
    }
    const auto& chosen = feasible.empty() ? any : feasible;
    out.front.assign(chosen.front().begin(), chosen.front().end());
    sort_canonical(out.front);
    return out;
}

MoTsptw checked_problem(const MoTsptwInstance& instance, TsptwOptions options) {
    if (instance.n > kOracleMaxCities) {
        throw ContractError("brute_force_front: refusing to enumerate " + std::to_string(instance.n) +
                            " cities (limit " + std::to_string(kOracleMaxCities) + ")");
    }
    return MoTsptw(instance, options);
}

}  // namespace

void sort_canonical(std::vector<Solution>& solutions) {
    std::sort(solutions.begin(), solutions.end(), [](const Solution& a, const Solution& b) {
        if (a.objectives != b.objectives) return a.objectives < b.objectives;
        return a.moves < b.moves;
    });
}

OracleFront brute_force_front_serial(const MoTsptwInstance& instance, TsptwOptions options) {
    const auto problem = checked_problem(instance, options);
    std::vector<ChunkResult> chunks(1);
    enumerate_tours(problem, 0, chunks[0]);
    return finish(chunks);
}

OracleFront brute_force_front(const MoTsptwInstance& instance, TsptwOptions options) {
    const auto problem = checked_problem(instance, options);
    const auto n_first = static_cast<std::ptrdiff_t>(instance.n - 1);
    std::vector<ChunkResult> chunks(static_cast<std::size_t>(n_first));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n_first; ++i) {
        enumerate_tours(problem, static_cast<Move>(i + 1), chunks[static_cast<std::size_t>(i)]);
    }
    return finish(chunks);
}

}  // namespace pnrpa
