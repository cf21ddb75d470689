#pragma once

// Independent reference implementations used as test oracles. They favour
// the most direct formulation over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pnrpa/pareto.hpp"
#include "pnrpa/policy.hpp"
#include "pnrpa/problem.hpp"
#include "pnrpa/tsptw.hpp"

namespace testsupport {

using pnrpa::ObjectiveVector;

inline std::string data_path(const std::string& relative) {
    return std::string(PNRPA_DATA_DIR) + "/" + relative;
}

inline std::string instance_path(const std::string& name) {
    return data_path("mo-tsptw/" + name + ".tsptw");
}

inline bool weakly_better_everywhere(const ObjectiveVector& a, const ObjectiveVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
    }
    return true;
}

inline bool dominates_ref(const ObjectiveVector& a, const ObjectiveVector& b) {
    return weakly_better_everywhere(a, b) && a != b;
}

/// Fronts by repeated peeling: each round takes every remaining point that
/// no other remaining point dominates.
inline std::vector<std::vector<std::size_t>> pairwise_fronts(const std::vector<ObjectiveVector>& pop) {
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<bool> taken(pop.size(), false);
    std::size_t left = pop.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (taken[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pop.size() && !dominated; ++j) {
                dominated = !taken[j] && dominates_ref(pop[j], pop[i]);
            }
            if (!dominated) front.push_back(i);
        }
        for (std::size_t i : front) taken[i] = true;
        left -= front.size();
        fronts.push_back(front);
    }
    return fronts;
}

/// Area of the union of the boxes [y, ref] on the grid spanned by every
/// coordinate that occurs: a cell counts when some point lies at or below
/// its lower-left corner.
inline double hv_grid(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref) {
    std::vector<double> xs{ref[0]}, ys{ref[1]};
    for (const auto& y : front) {
        if (y[0] < ref[0]) xs.push_back(y[0]);
        if (y[1] < ref[1]) ys.push_back(y[1]);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            bool covered = false;
            for (const auto& y : front) {
                if (y[0] <= xs[i] && y[1] <= ys[j]) {
                    covered = true;
                    break;
                }
            }
            if (covered) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
        }
    }
    return area;
}

inline std::vector<ObjectiveVector> random_population(std::mt19937_64& gen, std::size_t n, std::size_t p,
                                                      int max_value) {
    std::uniform_int_distribution<int> coord(0, max_value);
    std::vector<ObjectiveVector> pop(n, ObjectiveVector(p));
    for (auto& y : pop) {
        for (auto& v : y) v = coord(gen);
    }
    return pop;
}

/// Mutually non-dominated random points: (x, y) with y strictly decreasing
/// in x, drawn from real coordinates.
inline std::vector<ObjectiveVector> random_front(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<double> xs(n), ys(n);
    for (auto& x : xs) x = u(gen);
    for (auto& y : ys) y = u(gen);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({xs[i], ys[i]});
    std::shuffle(out.begin(), out.end(), gen);
    return out;
}

/// Probability that a playout under `policy` produces exactly `moves`, from
/// the plain softmax definition.
template <pnrpa::SequentialProblem P>
double sequence_probability(const P& problem, const pnrpa::PolicyTable& policy, const std::vector<pnrpa::Move>& moves,
                            bool use_bias) {
    auto state = problem.root();
    double prob = 1.0;
    for (pnrpa::Move played : moves) {
        std::vector<pnrpa::Move> legal;
        problem.legal_moves(state, legal);
        double z = 0.0;
        double num = 0.0;
        for (pnrpa::Move m : legal) {
            double logit = policy.weight(problem.code(state, m));
            if (use_bias) logit += problem.bias(state, m);
            z += std::exp(logit);
            if (m == played) num = std::exp(logit);
        }
        prob *= num / z;
        problem.play(state, played);
    }
    return prob;
}

struct TourOracle {
    double cost1 = 0.0;
    double cost2 = 0.0;
    int violations = 0;
};

/// Tour costs and violations straight from the matrices, for a move list
/// starting after the depot and ending with the return to it.
inline TourOracle tour_oracle(const pnrpa::MoTsptwInstance& inst, const std::vector<pnrpa::Move>& moves,
                              bool count_depot = true) {
    TourOracle out;
    std::size_t at = 0;
    double clock = 0.0;
    for (pnrpa::Move m : moves) {
        const auto to = static_cast<std::size_t>(m);
        out.cost1 += inst.cost1[at * inst.n + to];
        out.cost2 += inst.cost2[at * inst.n + to];
        clock += inst.cost1[at * inst.n + to];
        if (clock > inst.windows[to].latest && (to != 0 || count_depot)) out.violations += 1;
        if (clock < inst.windows[to].earliest) clock = inst.windows[to].earliest;
        at = to;
    }
    return out;
}

/// A small instance built from explicit matrices.
inline pnrpa::MoTsptwInstance make_instance(std::size_t n, std::vector<double> c1, std::vector<double> c2,
                                            std::vector<pnrpa::TimeWindow> windows) {
    pnrpa::MoTsptwInstance inst;
    inst.n = n;
    inst.cost1 = std::move(c1);
    inst.cost2 = std::move(c2);
    inst.windows = std::move(windows);
    return inst;
}

/// Random symmetric instance with integer costs and the given window width
/// around a random feasible schedule; `wide` windows make every tour valid.
inline pnrpa::MoTsptwInstance random_instance(std::mt19937_64& gen, std::size_t n, double width) {
    std::uniform_int_distribution<int> cost(1, 50);
    std::vector<double> c1(n * n, 0.0), c2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            c1[i * n + j] = c1[j * n + i] = cost(gen);
            c2[i * n + j] = c2[j * n + i] = cost(gen);
        }
    }
    std::uniform_real_distribution<double> start(0.0, 50.0 * static_cast<double>(n));
    std::vector<pnrpa::TimeWindow> w(n);
    w[0] = {0.0, 1e5};
    for (std::size_t i = 1; i < n; ++i) {
        const double e = std::floor(start(gen));
        w[i] = {e, e + width};
    }
    return make_instance(n, std::move(c1), std::move(c2), std::move(w));
}

}  // namespace testsupport
