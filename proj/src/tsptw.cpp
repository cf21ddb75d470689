#include "pnrpa/tsptw.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pnrpa/rng.hpp"

namespace pnrpa {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

void MoTsptwInstance::validate() const {
    if (n < 2) throw ContractError("instance needs at least the depot and one city");
    if (cost1.size() != n * n || cost2.size() != n * n) throw ContractError("cost matrices must be n x n");
    if (windows.size() != n) throw ContractError("need one time window per city");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = primary(i, j);
            const double b = secondary(i, j);
            if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
                throw ContractError("costs must be finite and non-negative");
            }
            if (i == j && (a != 0.0 || b != 0.0)) throw ContractError("cost diagonal must be zero");
        }
        const auto& w = windows[i];
        if (!std::isfinite(w.earliest) || !std::isfinite(w.latest) || w.earliest > w.latest) {
            throw ContractError("time windows must be finite with earliest <= latest");
        }
    }
}

namespace {

struct Line {
    std::size_t number;
    std::string_view text;
};

/// Non-blank lines that are not '#' comments.
std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') {
            if (end == text.size()) break;
            continue;
        }
        out.push_back({number, line});
        if (end == text.size()) break;
    }
    return out;
}

std::vector<double> parse_numbers(const Line& line) {
    std::vector<double> out;
    std::string_view rest = line.text;
    while (true) {
        const auto start = rest.find_first_not_of(" \t");
        if (start == std::string_view::npos) break;
        rest.remove_prefix(start);
        const auto stop = std::min(rest.find_first_of(" \t"), rest.size());
        const std::string_view token = rest.substr(0, stop);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
            throw ParseError(line.number, "not a number: '" + std::string(token) + "'");
        }
        out.push_back(value);
        rest.remove_prefix(stop);
    }
    return out;
}

std::size_t parse_city_count(const Line& line) {
    const auto values = parse_numbers(line);
    if (values.size() != 1 || values[0] < 2 || values[0] != std::floor(values[0])) {
        throw ParseError(line.number, "expected the city count (an integer >= 2)");
    }
    return static_cast<std::size_t>(values[0]);
}

void read_matrix(const std::vector<Line>& lines, std::size_t& cursor, std::size_t n, std::vector<double>& out,
                 const char* what) {
    out.clear();
    out.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (cursor >= lines.size()) throw ParseError(0, std::string("unexpected end of file in ") + what);
        const auto& line = lines[cursor++];
        const auto row = parse_numbers(line);
        if (row.size() != n) {
            throw ParseError(line.number, std::string(what) + " row has " + std::to_string(row.size()) +
                                              " entries, expected " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (row[j] < 0.0) throw ParseError(line.number, std::string("negative entry in ") + what);
            if (i == j && row[j] != 0.0) throw ParseError(line.number, std::string("non-zero diagonal in ") + what);
        }
        out.insert(out.end(), row.begin(), row.end());
    }
}

void read_windows(const std::vector<Line>& lines, std::size_t& cursor, std::size_t n, std::vector<TimeWindow>& out) {
    out.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (cursor >= lines.size()) throw ParseError(0, "unexpected end of file in time windows");
        const auto& line = lines[cursor++];
        const auto w = parse_numbers(line);
        if (w.size() != 2) throw ParseError(line.number, "time window needs exactly two values");
        if (w[0] > w[1]) throw ParseError(line.number, "time window has earliest > latest");
        out.push_back({w[0], w[1]});
    }
}

/// Shortest text that reads back as exactly `v`.
std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_matrix(std::ostringstream& os, std::size_t n, const std::vector<double>& m) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) os << ' ';
            os << format_number(m[i * n + j]);
        }
        os << '\n';
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open instance file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

MoTsptwInstance parse_instance(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError(0, "empty instance");
    std::size_t cursor = 0;
    MoTsptwInstance inst;
    inst.n = parse_city_count(lines[cursor++]);
    read_matrix(lines, cursor, inst.n, inst.cost1, "primary cost");
    read_matrix(lines, cursor, inst.n, inst.cost2, "secondary cost");
    read_windows(lines, cursor, inst.n, inst.windows);
    if (cursor != lines.size()) throw ParseError(lines[cursor].number, "unexpected trailing content");
    return inst;
}

std::string serialize_instance(const MoTsptwInstance& instance) {
    std::ostringstream os;
    os << "# MO-TSPTW: n, primary cost matrix, secondary cost matrix, time windows\n";
    os << instance.n << '\n';
    write_matrix(os, instance.n, instance.cost1);
    write_matrix(os, instance.n, instance.cost2);
    for (const auto& w : instance.windows) os << format_number(w.earliest) << ' ' << format_number(w.latest) << '\n';
    return os.str();
}

MoTsptwInstance load_instance(const std::filesystem::path& path) {
    const auto text = read_file(path);
    try {
        return parse_instance(text);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

void save_instance(const MoTsptwInstance& instance, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write instance file '" + path.string() + "'");
    out << serialize_instance(instance);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ClassicTsptw parse_classic(std::string_view text) {
    // Classic files are whitespace separated; rows may wrap, so read tokens.
    std::vector<double> tokens;
    for (const auto& line : content_lines(text)) {
        const auto values = parse_numbers(line);
        tokens.insert(tokens.end(), values.begin(), values.end());
    }
    if (tokens.empty()) throw ParseError(0, "empty classic instance");
    if (tokens[0] < 2 || tokens[0] != std::floor(tokens[0])) throw ParseError(1, "expected the city count");
    ClassicTsptw out;
    out.n = static_cast<std::size_t>(tokens[0]);
    const std::size_t n = out.n;
    if (tokens.size() < 1 + n * n + 2 * n) throw ParseError(0, "classic instance is truncated");
    out.cost.assign(tokens.begin() + 1, tokens.begin() + 1 + static_cast<std::ptrdiff_t>(n * n));
    for (std::size_t i = 0; i < n; ++i) {
        out.cost[i * n + i] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (out.cost[i * n + j] < 0.0) throw ParseError(0, "negative travel time in classic instance");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double e = tokens[1 + n * n + 2 * i];
        const double l = tokens[2 + n * n + 2 * i];
        if (e > l) throw ParseError(0, "time window of city " + std::to_string(i) + " has earliest > latest");
        out.windows.push_back({e, l});
    }
    return out;
}

std::string serialize_classic(const ClassicTsptw& instance) {
    std::ostringstream os;
    os << instance.n << '\n';
    write_matrix(os, instance.n, instance.cost);
    for (const auto& w : instance.windows) os << format_number(w.earliest) << ' ' << format_number(w.latest) << '\n';
    return os.str();
}

MoTsptwInstance generate_secondary_costs(const ClassicTsptw& classic, std::uint64_t seed) {
    const std::size_t n = classic.n;
    const double side = *std::max_element(classic.cost.begin(), classic.cost.end());
    Rng rng(seed);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = uniform01(rng) * side;
        y[i] = uniform01(rng) * side;
    }
    MoTsptwInstance out;
    out.n = n;
    out.cost1 = classic.cost;
    out.windows = classic.windows;
    out.cost2.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) out.cost2[i * n + j] = std::hypot(x[i] - x[j], y[i] - y[j]);
        }
    }
    out.validate();
    return out;
}

ClassicTsptw synthesize_classic(std::size_t n, double window_width, std::uint64_t seed) {
    constexpr double kServiceTime = 10.0;
    if (n < 2) throw ContractError("synthesize_classic: need at least two cities");
    if (!(window_width > 0.0)) throw ContractError("synthesize_classic: window width must be positive");
    Rng rng(seed);

    std::vector<double> x(n), y(n);
    x[0] = 40.0;
    y[0] = 50.0;
    constexpr int kClusters = 4;
    double cx[kClusters], cy[kClusters];
    for (int c = 0; c < kClusters; ++c) {
        cx[c] = 15.0 + 70.0 * uniform01(rng);
        cy[c] = 15.0 + 70.0 * uniform01(rng);
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (i % 2 == 0) {
            const auto c = uniform_index(rng, kClusters);
            // Sum of three uniforms: a cheap bell around the cluster centre.
            const double dx = (uniform01(rng) + uniform01(rng) + uniform01(rng) - 1.5) * 12.0;
            const double dy = (uniform01(rng) + uniform01(rng) + uniform01(rng) - 1.5) * 12.0;
            x[i] = std::clamp(cx[c] + dx, 0.0, 100.0);
            y[i] = std::clamp(cy[c] + dy, 0.0, 100.0);
        } else {
            x[i] = 100.0 * uniform01(rng);
            y[i] = 100.0 * uniform01(rng);
        }
    }

    ClassicTsptw out;
    out.n = n;
    out.cost.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                out.cost[i * n + j] = std::floor(std::hypot(x[i] - x[j], y[i] - y[j]) * 10.0) / 10.0 + kServiceTime;
            }
        }
    }

    // Reference tour: nearest neighbour, then 2-opt until no move improves.
    std::vector<std::size_t> tour{0};
    std::vector<char> used(n, 0);
    used[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t current = tour.back();
        std::size_t next = 0;
        for (std::size_t j = 1; j < n; ++j) {
            if (!used[j] && (next == 0 || out.cost[current * n + j] < out.cost[current * n + next])) next = j;
        }
        used[next] = 1;
        tour.push_back(next);
    }
    tour.push_back(0);
    auto d = [&](std::size_t a, std::size_t b) { return out.cost[tour[a] * n + tour[b]]; };
    for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t i = 0; i + 2 < tour.size(); ++i) {
            for (std::size_t k = i + 2; k + 1 < tour.size(); ++k) {
                if (d(i, k) + d(i + 1, k + 1) < d(i, i + 1) + d(k, k + 1) - 1e-9) {
                    std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                 tour.begin() + static_cast<std::ptrdiff_t>(k + 1));
                    improved = true;
                }
            }
        }
    }
    tour.erase(tour.begin());
    tour.pop_back();

    out.windows.assign(n, {});
    double t = 0.0;
    std::size_t current = 0;
    for (std::size_t city : tour) {
        t += out.cost[current * n + city];
        const double width = window_width * (0.5 + uniform01(rng));
        const double earliest = std::floor(std::max(0.0, t - uniform01(rng) * width));
        out.windows[city] = {earliest, std::ceil(std::max(t, earliest + width))};
        current = city;
    }
    t += out.cost[current * n];
    out.windows[0] = {0.0, std::ceil(t + window_width)};
    return out;
}

MoTsptw::MoTsptw(MoTsptwInstance instance, TsptwOptions options)
    : instance_(std::move(instance)), options_(options) {
    instance_.validate();
    max_primary_ = *std::max_element(instance_.cost1.begin(), instance_.cost1.end());
}

TourState MoTsptw::root() const {
    TourState s;
    s.visited.assign(instance_.n, 0);
    s.visited[0] = 1;
    s.moves.reserve(instance_.n);
    return s;
}

void MoTsptw::legal_moves(const State& s, std::vector<Move>& out) const {
    if (s.closed) return;
    if (s.n_visited + 1 == instance_.n) {
        out.push_back(0);
        return;
    }
    for (std::size_t c = 1; c < instance_.n; ++c) {
        if (!s.visited[c]) out.push_back(static_cast<Move>(c));
    }
}

void MoTsptw::play(State& s, Move move) const {
    const std::size_t n = instance_.n;
    if (s.closed || move < 0 || static_cast<std::size_t>(move) >= n) throw ContractError("tsptw: illegal move");
    const bool returning = move == 0;
    if (returning ? s.n_visited + 1 != n : s.visited[static_cast<std::size_t>(move)] != 0) {
        throw ContractError("tsptw: illegal move");
    }
    const auto from = static_cast<std::size_t>(s.current);
    const auto to = static_cast<std::size_t>(move);
    const double arrival = s.elapsed_time + instance_.primary(from, to);
    const auto& window = instance_.windows[to];
    if (arrival > window.latest && (!returning || options_.count_depot_window)) ++s.violations;
    s.elapsed_time = std::max(arrival, window.earliest);
    s.cost1 += instance_.primary(from, to);
    s.cost2 += instance_.secondary(from, to);
    s.current = move;
    s.moves.push_back(move);
    if (returning) {
        s.closed = true;
    } else {
        s.visited[to] = 1;
        ++s.n_visited;
    }
}

Evaluation MoTsptw::evaluate(const State& s) const {
    if (!s.closed) throw ContractError("tsptw: evaluate needs a closed tour");
    const double penalty = kViolationPenalty * s.violations;
    return {{s.cost1 + penalty, s.cost2 + penalty}, s.violations};
}

double MoTsptw::bias(const State& s, Move move) const noexcept {
    if (max_primary_ <= 0.0) return 0.0;
    return -10.0 * instance_.primary(static_cast<std::size_t>(s.current), static_cast<std::size_t>(move)) / max_primary_;
}

}  // namespace pnrpa
