#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pnrpa/problem.hpp"
#include "pnrpa/types.hpp"

namespace pnrpa {

/// Penalty added to both objectives per violated time window.
inline constexpr double kViolationPenalty = 1e6;

/// Malformed instance text. `line()` is 1-based; 0 when the problem is not
/// tied to one line (e.g. a missing section at end of file).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct TimeWindow {
    double earliest = 0.0;
    double latest = 0.0;
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Bi-objective TSPTW instance. City 0 is the depot. Matrices are row-major
/// n x n with a zero diagonal; cost1 is also the travel time.
struct MoTsptwInstance {
    std::size_t n = 0;
    std::vector<double> cost1;
    std::vector<double> cost2;
    std::vector<TimeWindow> windows;

    [[nodiscard]] double primary(std::size_t i, std::size_t j) const { return cost1[i * n + j]; }
    [[nodiscard]] double secondary(std::size_t i, std::size_t j) const { return cost2[i * n + j]; }

    /// Throws ContractError when an invariant does not hold.
    void validate() const;

    friend bool operator==(const MoTsptwInstance&, const MoTsptwInstance&) = default;
};

/// Single-objective TSPTW in the classic matrix format (n, n x n travel
/// times, n lines of "earliest latest").
struct ClassicTsptw {
    std::size_t n = 0;
    std::vector<double> cost;
    std::vector<TimeWindow> windows;
};

MoTsptwInstance parse_instance(std::string_view text);
std::string serialize_instance(const MoTsptwInstance& instance);
MoTsptwInstance load_instance(const std::filesystem::path& path);
void save_instance(const MoTsptwInstance& instance, const std::filesystem::path& path);

ClassicTsptw parse_classic(std::string_view text);
std::string serialize_classic(const ClassicTsptw& instance);

/// Adds a secondary cost: one point per city drawn uniformly in a square of
/// side max(cost) from Rng(seed), cost2 = Euclidean distance.
MoTsptwInstance generate_secondary_costs(const ClassicTsptw& classic, std::uint64_t seed);

/// Synthetic classic instance in the style of the Solomon RC2 geometry:
/// half clustered and half scattered customers on a 100 x 100 grid, travel
/// times are Euclidean distances truncated to one decimal plus a service
/// time of 10 at the departure city. Windows of mean
/// width `window_width` are laid along a short reference tour (nearest
/// neighbour improved by 2-opt), so that tour is always feasible.
ClassicTsptw synthesize_classic(std::size_t n, double window_width, std::uint64_t seed);

struct TourState {
    std::vector<char> visited;
    std::size_t n_visited = 0;  // non-depot cities visited
    Move current = 0;
    double elapsed_time = 0.0;
    int violations = 0;
    double cost1 = 0.0;
    double cost2 = 0.0;
    std::vector<Move> moves;
    bool closed = false;  // returned to the depot
};

struct TsptwOptions {
    /// Check the depot window on the final return and count it in violations.
    bool count_depot_window = true;
};

/// MO-TSPTW as a sequential problem: a tour starts at the depot, visits
/// every other city once, then returns to the depot.
class MoTsptw {
public:
    using State = TourState;

    explicit MoTsptw(MoTsptwInstance instance, TsptwOptions options = {});

    [[nodiscard]] std::size_t n_objectives() const noexcept { return 2; }
    [[nodiscard]] State root() const;
    [[nodiscard]] bool is_terminal(const State& s) const noexcept { return s.closed; }
    void legal_moves(const State& s, std::vector<Move>& out) const;
    /// Throws ContractError for an illegal move.
    void play(State& s, Move move) const;
    /// Throws ContractError for a non-terminal state.
    [[nodiscard]] Evaluation evaluate(const State& s) const;
    [[nodiscard]] std::size_t code(const State& s, Move move) const noexcept {
        return static_cast<std::size_t>(s.current) * instance_.n + static_cast<std::size_t>(move);
    }
    [[nodiscard]] double bias(const State& s, Move move) const noexcept;

    [[nodiscard]] const MoTsptwInstance& instance() const noexcept { return instance_; }

private:
    MoTsptwInstance instance_;
    TsptwOptions options_;
    double max_primary_ = 0.0;
};

}  // namespace pnrpa
