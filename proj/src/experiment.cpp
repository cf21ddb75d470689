#include "pnrpa/experiment.hpp"

#include <glob.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "pnrpa/oracle.hpp"
#include "pnrpa/rng.hpp"

namespace pnrpa {

using nlohmann::json;

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::pareto_nrpa: return "pareto-nrpa";
        case Algorithm::nrpa: return "nrpa";
        case Algorithm::random_playout: return "random-playout";
        case Algorithm::oracle: return "oracle";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    for (auto a : {Algorithm::pareto_nrpa, Algorithm::nrpa, Algorithm::random_playout, Algorithm::oracle}) {
        if (to_string(a) == name) return a;
    }
    throw ContractError("unknown algorithm '" + name + "' (expected pareto-nrpa|nrpa|random-playout|oracle)");
}

std::string to_string(NormalizerMode m) {
    return m == NormalizerMode::automatic ? "auto" : "union";
}

NormalizerMode parse_normalizer_mode(const std::string& name) {
    if (name == "auto") return NormalizerMode::automatic;
    if (name == "union") return NormalizerMode::union_of_runs;
    throw ContractError("unknown normalizer '" + name + "' (expected auto|union)");
}

void ExperimentSpec::validate() const {
    if (instances.empty()) throw ContractError("ExperimentSpec: no instances");
    if (n_runs < 1) throw ContractError("ExperimentSpec: n_runs must be >= 1");
    if (threads < 0) throw ContractError("ExperimentSpec: threads must be >= 0");
    config.validate();
}

std::string instance_id(const std::filesystem::path& path) {
    return path.stem().string();
}

std::vector<std::filesystem::path> expand_instance_glob(const std::string& pattern) {
    std::vector<std::filesystem::path> out;
    glob_t g{};
    if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (out.empty() && std::filesystem::is_regular_file(pattern)) out.emplace_back(pattern);
    if (out.empty()) throw std::runtime_error("no instance file matches '" + pattern + "'");
    std::sort(out.begin(), out.end());
    return out;
}

RunReport execute_run(const MoTsptw& problem, const std::string& instance, const ExperimentSpec& spec,
                      std::size_t run_index) {
    RunReport r;
    r.instance = instance;
    r.cities = problem.instance().n;
    r.algorithm = to_string(spec.algorithm);
    r.run_index = run_index;
    r.seed = spec.base_seed + run_index;

    const auto start = std::chrono::steady_clock::now();
    SearchConfig config = spec.config;
    config.rng_seed = r.seed;
    Rng rng(r.seed);
    switch (spec.algorithm) {
        case Algorithm::pareto_nrpa: {
            auto res = run_pareto_nrpa(problem, config, rng);
            r.evaluations = res.evaluations;
            r.front.assign(res.archive.front().begin(), res.archive.front().end());
            break;
        }
        case Algorithm::nrpa: {
            config.validate();
            const ObjectiveProjection<MoTsptw> primary(problem, 0);
            EvalCounter counter(config.eval_budget);
            auto best = nrpa(config.level, PolicyTable{}, primary, counter, config, rng);
            r.evaluations = counter.used();
            if (best) {
                auto eval = replay_evaluate(problem, best->solution.moves);
                r.front.push_back({best->solution.moves, std::move(eval.objectives), eval.violations, 0});
            }
            break;
        }
        case Algorithm::random_playout: {
            auto res = run_random_playouts(problem, config, rng);
            r.evaluations = res.evaluations;
            r.front.assign(res.archive.front().begin(), res.archive.front().end());
            break;
        }
        case Algorithm::oracle: {
            auto res = brute_force_front(problem.instance(), spec.tsptw);
            r.evaluations = res.evaluations;
            r.front = std::move(res.front);
            break;
        }
    }
    sort_canonical(r.front);
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

Normalizer build_normalizer(const MoTsptwInstance& instance, std::span<const RunReport> runs, NormalizerMode mode,
                            TsptwOptions options) {
    std::vector<ObjectiveVector> pool;
    std::string source = "union";
    if (mode == NormalizerMode::automatic && instance.n <= kOracleMaxCities) {
        const auto exact = brute_force_front(instance, options);
        pool = valid_points(exact.front);
        source = "oracle";
    }
    for (const auto& r : runs) {
        auto v = valid_points(r.front);
        pool.insert(pool.end(), v.begin(), v.end());
    }
    return make_normalizer(pool, source);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<MoTsptw> problems;
    std::vector<std::string> ids;
    for (const auto& path : spec.instances) {
        try {
            problems.emplace_back(load_instance(path), spec.tsptw);
        } catch (const std::exception& e) {
            throw std::runtime_error("cannot load instance '" + path.string() + "': " + e.what());
        }
        ids.push_back(instance_id(path));
    }

    const std::size_t n_tasks = problems.size() * spec.n_runs;
    std::vector<RunReport> runs(n_tasks);
    auto task = [&](std::size_t t) {
        const std::size_t inst = t / spec.n_runs;
        runs[t] = execute_run(problems[inst], ids[inst], spec, t % spec.n_runs);
    };
    if (spec.threads == 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) task(t);
    } else {
        std::vector<std::exception_ptr> errors(n_tasks);
        const int team = spec.threads > 0 ? spec.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n_tasks); ++t) {
            try {
                task(static_cast<std::size_t>(t));
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        }
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    ExperimentResult result;
    result.algorithm = spec.algorithm;
    result.config = spec.config;
    result.n_runs = spec.n_runs;
    result.base_seed = spec.base_seed;
    result.count_depot_window = spec.tsptw.count_depot_window;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        std::span<RunReport> group(runs.data() + i * spec.n_runs, spec.n_runs);
        auto normalizer = build_normalizer(problems[i].instance(), group, spec.normalizer, spec.tsptw);
        for (auto& r : group) r.metrics = evaluate_front(r.front, normalizer);
        result.normalizers.push_back({ids[i], std::move(normalizer)});
    }
    result.runs = std::move(runs);
    return result;
}

std::vector<SummaryRow> aggregate_reports(std::span<const RunReport> reports) {
    std::map<std::pair<std::string, std::string>, std::vector<const RunReport*>> groups;
    for (const auto& r : reports) groups[{r.instance, r.algorithm}].push_back(&r);

    std::vector<SummaryRow> rows;
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(), [](const RunReport* a, const RunReport* b) {
            return std::tie(a->run_index, a->seed) < std::tie(b->run_index, b->seed);
        });
        std::vector<double> hv, os, sp, cv;
        for (const auto* r : members) {
            hv.push_back(r->metrics.normalized_hv);
            os.push_back(r->metrics.overall_spread);
            cv.push_back(r->metrics.constraint_violations);
            if (r->metrics.spacing) sp.push_back(*r->metrics.spacing);
        }
        SummaryRow row;
        row.instance = key.first;
        row.cities = members.front()->cities;
        row.algorithm = key.second;
        row.hv = aggregate_runs(hv);
        row.os = aggregate_runs(os);
        if (!sp.empty()) row.sp = aggregate_runs(sp);
        row.cv = aggregate_runs(cv);
        row.n_runs = members.size();
        row.excluded_spacing_runs = members.size() - sp.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt2(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

json to_json(const Solution& s) {
    return {{"moves", s.moves}, {"objectives", s.objectives}, {"violations", s.violations},
            {"policy", s.policy_index}};
}

Solution solution_from_json(const json& j) {
    Solution s;
    j.at("moves").get_to(s.moves);
    j.at("objectives").get_to(s.objectives);
    j.at("violations").get_to(s.violations);
    j.at("policy").get_to(s.policy_index);
    return s;
}

json optional_number(const std::optional<double>& x) {
    return x ? json(*x) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json to_json(const SummaryRow& row) {
    json sp_mean = row.sp ? json(row.sp->mean) : json(nullptr);
    json sp_ci = row.sp ? json(row.sp->ci95) : json(nullptr);
    return {{"instance", row.instance}, {"cities", row.cities}, {"algorithm", row.algorithm},
            {"hv_mean", row.hv.mean},   {"hv_ci", row.hv.ci95},  {"os_mean", row.os.mean},
            {"os_ci", row.os.ci95},     {"sp_mean", sp_mean},    {"sp_ci", sp_ci},
            {"cv_mean", row.cv.mean},   {"cv_ci", row.cv.ci95},  {"n_runs", row.n_runs},
            {"excluded_spacing_runs", row.excluded_spacing_runs}};
}

json to_json(const SearchConfig& c) {
    return {{"level", c.level},
            {"alpha", c.alpha},
            {"n_policies", c.n_policies},
            {"iterations_per_level", c.iterations_per_level},
            {"eval_budget", c.eval_budget},
            {"use_bias", c.use_bias},
            {"cd_weighting", c.cd_weighting},
            {"adapt_strategy", to_string(c.adapt_strategy)},
            {"cd_clip", c.cd_clip},
            {"rng_seed", c.rng_seed}};
}

SearchConfig config_from_json(const json& j) {
    SearchConfig c;
    j.at("level").get_to(c.level);
    j.at("alpha").get_to(c.alpha);
    j.at("n_policies").get_to(c.n_policies);
    j.at("iterations_per_level").get_to(c.iterations_per_level);
    j.at("eval_budget").get_to(c.eval_budget);
    j.at("use_bias").get_to(c.use_bias);
    j.at("cd_weighting").get_to(c.cd_weighting);
    c.adapt_strategy = parse_adapt_strategy(j.at("adapt_strategy").get<std::string>());
    j.at("cd_clip").get_to(c.cd_clip);
    j.at("rng_seed").get_to(c.rng_seed);
    return c;
}

}  // namespace

std::string emit_csv(std::span<const SummaryRow> rows) {
    std::string out =
        "instance,cities,algorithm,hv_mean,hv_ci,os_mean,os_ci,sp_mean,sp_ci,cv_mean,cv_ci,n_runs,"
        "excluded_spacing_runs\n";
    for (const auto& r : rows) {
        out += r.instance + ',' + std::to_string(r.cities) + ',' + r.algorithm + ',';
        out += fmt17(r.hv.mean) + ',' + fmt17(r.hv.ci95) + ',';
        out += fmt17(r.os.mean) + ',' + fmt17(r.os.ci95) + ',';
        out += (r.sp ? fmt17(r.sp->mean) + ',' + fmt17(r.sp->ci95) : std::string(",")) + ',';
        out += fmt17(r.cv.mean) + ',' + fmt17(r.cv.ci95) + ',';
        out += std::to_string(r.n_runs) + ',' + std::to_string(r.excluded_spacing_runs) + '\n';
    }
    return out;
}

std::string format_summary_table(std::span<const SummaryRow> rows) {
    auto cell = [](const Aggregate& a) { return fmt2(a.mean) + " ± " + fmt2(a.ci95); };
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "%-12s %6s %-15s %-14s %-14s %-14s %-14s %5s\n", "instance", "cities",
                  "algorithm", "HV", "OS", "SP", "CV", "runs");
    out += line;
    for (const auto& r : rows) {
        const std::string sp = r.sp ? cell(*r.sp) : "-";
        std::snprintf(line, sizeof line, "%-12s %6zu %-15s %-14s %-14s %-14s %-14s %5zu\n", r.instance.c_str(),
                      r.cities, r.algorithm.c_str(), cell(r.hv).c_str(), cell(r.os).c_str(), sp.c_str(),
                      cell(r.cv).c_str(), r.n_runs);
        out += line;
    }
    return out;
}

std::string emit_json(const ExperimentResult& result) {
    json doc;
    doc["metadata"] = {{"algorithm", to_string(result.algorithm)},
                       {"config", to_json(result.config)},
                       {"n_runs", result.n_runs},
                       {"base_seed", result.base_seed},
                       {"seed_rule", "base_seed + run_index"},
                       {"rng", kRngName},
                       {"ci", "1.96 * sigma / sqrt(n)"},
                       {"sigma_divisor", "n"},
                       {"count_depot_window", result.count_depot_window}};

    json normalizers = json::array();
    for (const auto& n : result.normalizers) {
        const auto& z = n.normalizer;
        normalizers.push_back({{"instance", n.instance},
                               {"source", z.source},
                               {"reference", z.reference ? json(*z.reference) : json(nullptr)},
                               {"ideal", z.ideal},
                               {"maximal", z.maximal},
                               {"hv_max", z.hv_max},
                               {"pool_front", z.pool_front}});
    }
    doc["normalizers"] = std::move(normalizers);

    json summary = json::array();
    for (const auto& row : aggregate_reports(result.runs)) summary.push_back(to_json(row));
    doc["summary"] = std::move(summary);

    json runs = json::array();
    for (const auto& r : result.runs) {
        json front = json::array();
        for (const auto& s : r.front) front.push_back(to_json(s));
        runs.push_back({{"instance", r.instance},
                        {"cities", r.cities},
                        {"algorithm", r.algorithm},
                        {"run_index", r.run_index},
                        {"seed", r.seed},
                        {"evaluations", r.evaluations},
                        {"wall_time_s", r.wall_time_s},
                        {"front", std::move(front)},
                        {"metrics",
                         {{"hypervolume", r.metrics.hypervolume},
                          {"normalized_hv", r.metrics.normalized_hv},
                          {"overall_spread", r.metrics.overall_spread},
                          {"spacing", optional_number(r.metrics.spacing)},
                          {"constraint_violations", r.metrics.constraint_violations}}}});
    }
    doc["runs"] = std::move(runs);
    return doc.dump(2) + "\n";
}

ExperimentResult parse_json(const std::string& text) {
    const json doc = json::parse(text);
    ExperimentResult out;
    const auto& meta = doc.at("metadata");
    out.algorithm = parse_algorithm(meta.at("algorithm").get<std::string>());
    out.config = config_from_json(meta.at("config"));
    meta.at("n_runs").get_to(out.n_runs);
    meta.at("base_seed").get_to(out.base_seed);
    meta.at("count_depot_window").get_to(out.count_depot_window);

    for (const auto& j : doc.at("normalizers")) {
        InstanceNormalizer n;
        j.at("instance").get_to(n.instance);
        auto& z = n.normalizer;
        j.at("source").get_to(z.source);
        if (!j.at("reference").is_null()) z.reference = j.at("reference").get<ReferencePoint>();
        j.at("ideal").get_to(z.ideal);
        j.at("maximal").get_to(z.maximal);
        j.at("hv_max").get_to(z.hv_max);
        j.at("pool_front").get_to(z.pool_front);
        out.normalizers.push_back(std::move(n));
    }
    for (const auto& j : doc.at("runs")) {
        RunReport r;
        j.at("instance").get_to(r.instance);
        j.at("cities").get_to(r.cities);
        j.at("algorithm").get_to(r.algorithm);
        j.at("run_index").get_to(r.run_index);
        j.at("seed").get_to(r.seed);
        j.at("evaluations").get_to(r.evaluations);
        j.at("wall_time_s").get_to(r.wall_time_s);
        for (const auto& s : j.at("front")) r.front.push_back(solution_from_json(s));
        const auto& m = j.at("metrics");
        m.at("hypervolume").get_to(r.metrics.hypervolume);
        m.at("normalized_hv").get_to(r.metrics.normalized_hv);
        m.at("overall_spread").get_to(r.metrics.overall_spread);
        r.metrics.spacing = optional_from_json(m.at("spacing"));
        m.at("constraint_violations").get_to(r.metrics.constraint_violations);
        out.runs.push_back(std::move(r));
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace pnrpa
