#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnrpa/experiment.hpp"
#include "pnrpa/oracle.hpp"
#include "pnrpa/tsptw.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pareto-NRPA experiments on bi-objective TSPTW instances"};
    app.require_subcommand(1);

    pnrpa::SearchConfig config;
    std::string instances;
    std::string algo = "pareto-nrpa";
    std::string adapt = "all";
    std::size_t runs = 30;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    std::string normalizer = "auto";
    int threads = 0;
    bool depot_window = true;

    auto* run = app.add_subcommand("run", "Run an algorithm over a set of instances and report metrics");
    run->add_option("--instances", instances, "Glob of MO-TSPTW instance files")->required();
    run->add_option("--algo", algo, "pareto-nrpa | nrpa | random-playout | oracle")->capture_default_str();
    run->add_option("--level", config.level, "Nesting level")->capture_default_str();
    run->add_option("--alpha", config.alpha, "Adaptation rate")->capture_default_str();
    run->add_option("--n-policies", config.n_policies, "Number of policies")->capture_default_str();
    run->add_option("--iters", config.iterations_per_level, "Iterations per level")->capture_default_str();
    run->add_option("--budget", config.eval_budget, "Evaluation budget per run")->capture_default_str();
    run->add_option("--runs", runs, "Independent runs per instance")->capture_default_str();
    run->add_option("--seed", seed, "Base seed; run i uses seed + i")->capture_default_str();
    run->add_flag("--bias,!--no-bias", config.use_bias, "Heuristic bias in playouts and adaptation");
    run->add_flag("--cd-weighting,!--no-cd-weighting", config.cd_weighting, "Crowding-distance weighted adaptation");
    run->add_option("--adapt-strategy", adapt, "all | one")->capture_default_str();
    run->add_option("--out", out, "Report path")->required();
    run->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    run->add_option("--normalizer", normalizer, "auto (oracle front when n <= 11) | union")->capture_default_str();
    run->add_option("--threads", threads, "Worker threads; 1 runs the serial path, 0 the OpenMP default")
        ->capture_default_str();
    run->add_flag("--depot-window,!--no-depot-window", depot_window, "Count a late return to the depot");

    std::string classic;
    std::uint64_t convert_seed = 0;
    std::string convert_out;
    auto* convert = app.add_subcommand("convert", "Add a seeded secondary cost to a classic TSPTW file");
    convert->add_option("--classic", classic, "Classic TSPTW file")->required();
    convert->add_option("--seed", convert_seed, "Seed for the secondary coordinates")->required();
    convert->add_option("--out", convert_out, "MO-TSPTW output file")->required();

    std::string oracle_instance;
    std::string oracle_out;
    auto* oracle = app.add_subcommand("oracle", "Exact Pareto front of a small instance by enumeration");
    oracle->add_option("--instance", oracle_instance, "MO-TSPTW instance file")->required();
    oracle->add_option("--out", oracle_out, "JSON output file")->required();

    std::size_t synth_n = 0;
    double synth_width = 100.0;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic classic TSPTW instance");
    synth->add_option("--cities", synth_n, "City count including the depot")->required();
    synth->add_option("--width", synth_width, "Mean time-window width")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Generator seed")->required();
    synth->add_option("--out", synth_out, "Classic TSPTW output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            pnrpa::ExperimentSpec spec;
            spec.instances = pnrpa::expand_instance_glob(instances);
            spec.algorithm = pnrpa::parse_algorithm(algo);
            config.adapt_strategy = pnrpa::parse_adapt_strategy(adapt);
            spec.config = config;
            spec.n_runs = runs;
            spec.base_seed = seed;
            spec.normalizer = pnrpa::parse_normalizer_mode(normalizer);
            spec.threads = threads;
            spec.tsptw.count_depot_window = depot_window;

            const auto result = pnrpa::run_experiment(spec);
            const auto rows = pnrpa::aggregate_reports(result.runs);
            if (format == "csv") {
                pnrpa::write_text_file(out, pnrpa::emit_csv(rows));
            } else {
                pnrpa::write_text_file(out, pnrpa::emit_json(result));
            }
            std::cout << pnrpa::format_summary_table(rows);
        } else if (convert->parsed()) {
            const auto cl = pnrpa::parse_classic(read_file(classic));
            pnrpa::save_instance(pnrpa::generate_secondary_costs(cl, convert_seed), convert_out);
        } else if (oracle->parsed()) {
            const auto instance = pnrpa::load_instance(oracle_instance);
            const auto res = pnrpa::brute_force_front(instance);
            nlohmann::json front = nlohmann::json::array();
            for (const auto& s : res.front) {
                front.push_back({{"moves", s.moves}, {"objectives", s.objectives}, {"violations", s.violations}});
            }
            const nlohmann::json doc = {{"instance", pnrpa::instance_id(oracle_instance)},
                                        {"cities", instance.n},
                                        {"evaluations", res.evaluations},
                                        {"front", front}};
            pnrpa::write_text_file(oracle_out, doc.dump(2) + "\n");
            std::cout << res.front.size() << " front solutions from " << res.evaluations << " tours\n";
        } else if (synth->parsed()) {
            const auto cl = pnrpa::synthesize_classic(synth_n, synth_width, synth_seed);
            pnrpa::write_text_file(synth_out, pnrpa::serialize_classic(cl));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pnrpa: %s\n", e.what());
        return 1;
    }
    return 0;
}
