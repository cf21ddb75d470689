#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnrpa/metrics.hpp"
#include "pnrpa/search.hpp"
#include "pnrpa/tsptw.hpp"

namespace pnrpa {

enum class Algorithm { pareto_nrpa, nrpa, random_playout, oracle };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// Where the hypervolume normalizer comes from. `automatic` uses the exact
/// oracle front together with the runs when the instance is small enough
/// for the oracle, and the union of the runs otherwise.
enum class NormalizerMode { automatic, union_of_runs };

std::string to_string(NormalizerMode m);
NormalizerMode parse_normalizer_mode(const std::string& name);

struct ExperimentSpec {
    std::vector<std::filesystem::path> instances;
    Algorithm algorithm = Algorithm::pareto_nrpa;
    SearchConfig config;
    std::size_t n_runs = 1;
    std::uint64_t base_seed = 0;
    NormalizerMode normalizer = NormalizerMode::automatic;
    TsptwOptions tsptw;
    /// 1 selects the serial reference loop, 0 the OpenMP default team size.
    int threads = 0;

    /// Throws ContractError when the spec cannot run.
    void validate() const;
};

struct RunReport {
    std::string instance;
    std::size_t cities = 0;
    std::string algorithm;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    std::uint64_t evaluations = 0;
    double wall_time_s = 0.0;
    std::vector<Solution> front;  // canonical order
    MetricBundle metrics;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct InstanceNormalizer {
    std::string instance;
    Normalizer normalizer;

    friend bool operator==(const InstanceNormalizer&, const InstanceNormalizer&) = default;
};

struct ExperimentResult {
    Algorithm algorithm = Algorithm::pareto_nrpa;
    SearchConfig config;
    std::size_t n_runs = 0;
    std::uint64_t base_seed = 0;
    bool count_depot_window = true;
    std::vector<InstanceNormalizer> normalizers;
    std::vector<RunReport> runs;  // in the order of spec.instances, then by run index

    friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

/// Identifier of an instance file: its name without the last extension.
std::string instance_id(const std::filesystem::path& path);

/// Sorted paths matching a shell glob; a pattern naming an existing file
/// matches itself. Throws std::runtime_error when nothing matches.
std::vector<std::filesystem::path> expand_instance_glob(const std::string& pattern);

/// One search on one instance with the seed of run `run_index`, without
/// metrics. Independent of every other run.
RunReport execute_run(const MoTsptw& problem, const std::string& instance, const ExperimentSpec& spec,
                      std::size_t run_index);

/// Normalizer for one instance from a set of fronts, plus the oracle front
/// when `mode` allows it and the instance is small enough.
Normalizer build_normalizer(const MoTsptwInstance& instance, std::span<const RunReport> runs, NormalizerMode mode,
                            TsptwOptions options = {});

/// Runs every (instance, run) pair, then scores each run against the
/// normalizer of its instance. Throws std::runtime_error naming the file
/// when an instance cannot be loaded.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct SummaryRow {
    std::string instance;
    std::size_t cities = 0;
    std::string algorithm;
    Aggregate hv;
    Aggregate os;
    std::optional<Aggregate> sp;  // nullopt when no run has a defined spacing
    Aggregate cv;
    std::size_t n_runs = 0;
    std::size_t excluded_spacing_runs = 0;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// One row per (instance, algorithm), sorted by instance then algorithm.
/// Runs are taken in run-index order inside a group, so the result does not
/// depend on the order of `reports`.
std::vector<SummaryRow> aggregate_reports(std::span<const RunReport> reports);

std::string emit_csv(std::span<const SummaryRow> rows);

/// Human-readable "mean ± ci" table; an undefined spacing shows as "-".
std::string format_summary_table(std::span<const SummaryRow> rows);

std::string emit_json(const ExperimentResult& result);
ExperimentResult parse_json(const std::string& text);

/// Writes `text` to `path`. Throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pnrpa
