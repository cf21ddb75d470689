#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "catch_amalgamated.hpp"
#include "pnrpa/oracle.hpp"
#include "pnrpa/search.hpp"
#include "pnrpa/toy.hpp"
#include "pnrpa/tsptw.hpp"
#include "support.hpp"

using namespace pnrpa;
using Catch::Approx;

namespace {

SearchConfig small_config() {
    SearchConfig c;
    c.level = 2;
    c.iterations_per_level = 10;
    c.n_policies = 2;
    c.eval_budget = 1000;
    return c;
}

struct Step {
    int level;
    std::size_t iteration;
    std::vector<PolicyTable> policies;
    std::vector<Solution> kept;
};

IterationObserver recorder(std::vector<Step>& steps) {
    return [&steps](int level, std::size_t i, std::span<const PolicyTable> p, std::span<const Solution> kept) {
        steps.push_back({level, i, {p.begin(), p.end()}, {kept.begin(), kept.end()}});
    };
}

}  // namespace

TEST_CASE("SearchConfig: validation") {
    SearchConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = c;
    bad.level = 0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = c;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = c;
    bad.n_policies = 0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = c;
    bad.iterations_per_level = 0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = c;
    bad.eval_budget = 0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = c;
    bad.cd_clip = 0.0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    CHECK(parse_adapt_strategy("one") == AdaptStrategy::one_sequence);
    CHECK(to_string(AdaptStrategy::all_sequences) == "all");
    CHECK_THROWS_AS(parse_adapt_strategy("some"), ContractError);
}

TEST_CASE("playout: uniform policy on a two-leaf tree") {
    const ToyTreeProblem toy(1, 2, {{0, 1}, {1, 0}});
    Rng rng(99);
    EvalCounter counter(10000);
    int first = 0;
    for (int i = 0; i < 10000; ++i) first += playout(toy, PolicyTable{}, false, rng, counter).moves[0] == 0;
    CHECK(std::abs(first / 10000.0 - 0.5) <= 0.02);
    CHECK(counter.used() == 10000);
    CHECK_THROWS_AS(playout(toy, PolicyTable{}, false, rng, counter), ContractError);
}

TEST_CASE("playout: MO-TSPTW tours are permutations and recompute exactly") {
    const MoTsptw problem(load_instance(testsupport::instance_path("rc_206.1")));
    Rng rng(1);
    EvalCounter counter(1000);
    std::mt19937_64 gen(8);
    std::normal_distribution<double> w(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        PolicyTable policy;
        for (std::size_t code = 0; code < 16; ++code) policy.at(code) = w(gen);
        const auto before = counter.used();
        const auto s = playout(problem, policy, i % 2 == 0, rng, counter, 3);
        CHECK(counter.used() == before + 1);
        REQUIRE(s.moves.size() == 4);
        auto cities = s.moves;
        std::sort(cities.begin(), cities.end());
        CHECK(cities == std::vector<Move>{0, 1, 2, 3});
        CHECK(s.moves.back() == 0);
        CHECK(s.policy_index == 3);
        const auto again = replay_evaluate(problem, s.moves);
        CHECK(again.objectives == s.objectives);
        CHECK(again.violations == s.violations);
    }
}

TEST_CASE("playout: a near-deterministic policy follows its tour") {
    const auto inst = load_instance(testsupport::instance_path("rc_207.4"));
    const MoTsptw problem(inst);
    const std::vector<Move> tour{4, 2, 5, 1, 3, 0};
    PolicyTable policy;
    Move at = 0;
    for (Move m : tour) {
        policy.at(static_cast<std::size_t>(at) * inst.n + static_cast<std::size_t>(m)) = 50.0;
        at = m;
    }
    Rng rng(4);
    EvalCounter counter(100);
    for (int i = 0; i < 50; ++i) {
        const auto s = playout(problem, policy, true, rng, counter);
        REQUIRE(s.moves == tour);
        const auto oracle = testsupport::tour_oracle(inst, tour);
        CHECK(s.objectives[0] == oracle.cost1 + kViolationPenalty * oracle.violations);
        CHECK(s.objectives[1] == oracle.cost2 + kViolationPenalty * oracle.violations);
        CHECK(s.violations == oracle.violations);
    }
}

TEST_CASE("adapt_single: examples") {
    const ToyTreeProblem toy(1, 3, {{0}, {1}, {2}});
    const Solution seq{{0}, {0}, 0, 0};
    SECTION("uniform policy, alpha 0.5, weight 1") {
        const auto p = adapt_single(PolicyTable{}, seq, toy, 0.5, 1.0, false);
        CHECK(p.weight(0) == Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(p.weight(1) == Approx(-1.0 / 6.0).epsilon(1e-15));
        CHECK(p.weight(2) == Approx(-1.0 / 6.0).epsilon(1e-15));
    }
    SECTION("weight 2 doubles every delta") {
        const auto p = adapt_single(PolicyTable{}, seq, toy, 0.5, 2.0, false);
        CHECK(p.weight(0) == Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(p.weight(1) == Approx(-1.0 / 3.0).epsilon(1e-15));
        CHECK(p.weight(2) == Approx(-1.0 / 3.0).epsilon(1e-15));
    }
    SECTION("alpha 0 leaves the table unchanged") {
        PolicyTable start;
        start.at(1) = 0.7;
        CHECK(adapt_single(start, seq, toy, 0.0, 1.0, false) == start);
    }
    SECTION("illegal sequences and non-positive weights are contract errors") {
        CHECK_THROWS_AS(adapt_single(PolicyTable{}, Solution{{5}, {0}, 0, 0}, toy, 0.5, 1.0, false), ContractError);
        CHECK_THROWS_AS(adapt_single(PolicyTable{}, Solution{{0, 1}, {0}, 0, 0}, toy, 0.5, 1.0, false),
                        ContractError);
        CHECK_THROWS_AS(adapt_single(PolicyTable{}, seq, toy, 0.5, 0.0, false), ContractError);
    }
    SECTION("bias enters the normalization") {
        const ToyTreeProblem biased(1, 2, {{0}, {1}}, {0.0, std::log(3.0)});
        const auto p = adapt_single(PolicyTable{}, Solution{{0}, {0}, 0, 0}, biased, 1.0, 1.0, true);
        CHECK(p.weight(0) == Approx(0.75).epsilon(1e-14));
        CHECK(p.weight(1) == Approx(-0.75).epsilon(1e-14));
    }
}

TEST_CASE("adapt_single: probability of the adapted sequence never decreases") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> w(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto toy = toy_line_problem(4, 3, 2, 5);
    for (int trial = 0; trial < 300; ++trial) {
        PolicyTable policy;
        for (std::size_t c = 0; c < toy.n_codes(); ++c) policy.at(c) = w(gen);
        std::vector<Move> seq;
        for (std::size_t d = 0; d < toy.depth(); ++d) seq.push_back(static_cast<Move>(gen() % toy.branching()));
        const double alpha = 1.0 - unit(gen);
        const double weight = 2.0 * (1.0 - unit(gen));
        const bool use_bias = trial % 2 == 0;
        const Solution s{seq, {0, 0}, 0, 0};
        const auto after = adapt_single(policy, s, toy, alpha, weight, use_bias);
        CHECK(testsupport::sequence_probability(toy, after, seq, use_bias) >=
              testsupport::sequence_probability(toy, policy, seq, use_bias));
    }
}

TEST_CASE("adapt_weights: clipping, flags and one-sequence choice") {
    SearchConfig c;
    const std::vector<Solution> set{{{1}, {1, 3}, 0, 0}, {{2}, {2, 2}, 0, 0}, {{3}, {3, 1}, 0, 0}};
    SECTION("infinite crowding distance is clipped") {
        const auto w = adapt_weights(set, c);
        CHECK(w == std::vector<double>{2.0, 2.0, 2.0});
        c.cd_clip = 1.5;
        CHECK(adapt_weights(set, c) == std::vector<double>{1.5, 1.5, 1.5});
    }
    SECTION("finite distances below the clip are used as they are") {
        const std::vector<Solution> four{{{1}, {0, 4}, 0, 0}, {{2}, {1, 2}, 0, 0}, {{3}, {2, 1}, 0, 0}, {{4}, {4, 0}, 0, 0}};
        const auto w = adapt_weights(four, c);
        CHECK(w[1] == Approx(1.25));
        CHECK(w[0] == 2.0);
    }
    SECTION("without CD weighting every weight is 1") {
        c.cd_weighting = false;
        CHECK(adapt_weights(set, c) == std::vector<double>{1.0, 1.0, 1.0});
    }
    SECTION("one sequence per policy, the latest among equal distances") {
        c.adapt_strategy = AdaptStrategy::one_sequence;
        c.n_policies = 2;
        const auto w = adapt_weights(set, c);
        CHECK(w == std::vector<double>{0.0, 0.0, 2.0});
    }
    SECTION("one sequence per policy picks the highest distance") {
        c.adapt_strategy = AdaptStrategy::one_sequence;
        c.n_policies = 2;
        const std::vector<Solution> four{{{1}, {0, 4}, 0, 1}, {{2}, {1, 2}, 0, 0}, {{3}, {2, 1}, 0, 0}, {{4}, {4, 0}, 0, 1}};
        const auto w = adapt_weights(four, c);
        CHECK(w[0] == 0.0);
        CHECK(w[3] == 2.0);
        CHECK(w[1] == 0.0);
        CHECK(w[2] == Approx(1.25));
    }
}

TEST_CASE("pareto_adapt: only the producing policy moves") {
    const auto toy = toy_line_problem(2, 2, 2, 1);
    SearchConfig c;
    c.n_policies = 3;
    const PolicySet start(3);
    const std::vector<Solution> set{{{0, 1}, {1, 9}, 0, 0}, {{1, 0}, {9, 1}, 0, 2}};
    const auto out = pareto_adapt(start, set, toy, c);
    CHECK(out[1] == start[1]);
    CHECK_FALSE(out[0] == start[0]);
    CHECK_FALSE(out[2] == start[2]);
    CHECK(out[0] == adapt_single(start[0], set[0], toy, c.alpha, 2.0, c.use_bias));

    SECTION("two unit-weight updates in sequence without CD weighting") {
        c.cd_weighting = false;
        const std::vector<Solution> two{{{0, 1}, {1, 9}, 0, 0}, {{1, 0}, {9, 1}, 0, 0}};
        const auto p = pareto_adapt(start, two, toy, c);
        const auto expected =
            adapt_single(adapt_single(start[0], two[0], toy, c.alpha, 1.0, true), two[1], toy, c.alpha, 1.0, true);
        CHECK(p[0] == expected);
    }
    SECTION("out-of-range policy index") {
        const std::vector<Solution> bad{{{0, 1}, {1, 9}, 0, 5}};
        CHECK_THROWS_AS(pareto_adapt(start, bad, toy, c), ContractError);
    }
}

TEST_CASE("build_adapt_set: unrepresented policies get their best remaining solution") {
    ParetoArchive archive;
    archive.insert({{1}, {1, 4}, 0, 0});
    archive.insert({{2}, {4, 1}, 0, 0});
    const std::vector<Solution> recent{{{3}, {5, 5}, 0, 1}, {{4}, {6, 6}, 0, 1}};
    const auto set = build_adapt_set(archive, recent, 3);
    REQUIRE(set.size() == 3);
    CHECK(set[2] == recent[0]);
}

TEST_CASE("pareto_nrpa: budget and iteration counting") {
    const auto toy = toy_line_problem(3, 3, 2, 7);
    SECTION("a budget of one performs exactly one playout") {
        for (int level = 0; level <= 4; ++level) {
            SearchConfig c;
            c.eval_budget = 1;
            EvalCounter counter(1);
            Rng rng(3);
            const auto archive = pareto_nrpa(level, PolicySet(4), toy, counter, c, rng);
            CHECK(counter.used() == 1);
            CHECK(archive.size() == 1);
        }
    }
    SECTION("level 1, ten iterations, one policy") {
        SearchConfig c;
        c.n_policies = 1;
        c.iterations_per_level = 10;
        c.eval_budget = std::numeric_limits<std::uint64_t>::max();
        std::vector<Step> steps;
        const auto obs = recorder(steps);
        EvalCounter counter(c.eval_budget);
        Rng rng(3);
        pareto_nrpa(1, PolicySet(1), toy, counter, c, rng, &obs);
        CHECK(counter.used() == 10);
        CHECK(steps.size() == 10);
    }
    SECTION("evaluations equal min(budget, N^level)") {
        for (std::uint64_t budget : {1u, 7u, 50u, 64u, 1000u}) {
            SearchConfig c;
            c.level = 3;
            c.iterations_per_level = 4;
            c.eval_budget = budget;
            Rng rng(budget);
            const auto res = run_pareto_nrpa(toy, c, rng);
            CHECK(res.evaluations == std::min<std::uint64_t>(budget, 64));
        }
    }
    SECTION("an exhausted counter returns an empty archive") {
        SearchConfig c;
        EvalCounter counter(1);
        counter.consume();
        Rng rng(1);
        CHECK(pareto_nrpa(2, PolicySet(2), toy, counter, c, rng).empty());
    }
}

TEST_CASE("pareto_nrpa: the kept front only improves between iterations") {
    const MoTsptw problem(load_instance(testsupport::instance_path("rc_203.4")));
    auto c = small_config();
    c.level = 1;
    c.iterations_per_level = 300;
    c.eval_budget = 300;
    std::vector<Step> steps;
    const auto obs = recorder(steps);
    Rng rng(12);
    run_pareto_nrpa(problem, c, rng, &obs);
    REQUIRE(steps.size() > 1);
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
        for (const auto& old : steps[k].kept) {
            CHECK(std::any_of(steps[k + 1].kept.begin(), steps[k + 1].kept.end(), [&](const Solution& s) {
                return testsupport::weakly_better_everywhere(s.objectives, old.objectives);
            }));
        }
    }
}

TEST_CASE("pareto_nrpa: same seed gives the same archive") {
    const MoTsptw problem(load_instance(testsupport::instance_path("rc_202.2")));
    auto c = small_config();
    c.eval_budget = 300;
    Rng a(5), b(5);
    const auto ra = run_pareto_nrpa(problem, c, a);
    const auto rb = run_pareto_nrpa(problem, c, b);
    CHECK(std::equal(ra.archive.front().begin(), ra.archive.front().end(), rb.archive.front().begin(),
                     rb.archive.front().end()));
}

TEST_CASE("pareto_nrpa: recovers the exact front of the smallest instance") {
    const auto inst = load_instance(testsupport::instance_path("rc_206.1"));
    const MoTsptw problem(inst);
    const auto exact = brute_force_front_serial(inst);
    SearchConfig c;
    c.eval_budget = 2000;
    Rng rng(0);
    const auto res = run_pareto_nrpa(problem, c, rng);
    CHECK(res.evaluations == 2000);
    std::vector<Solution> found(res.archive.front().begin(), res.archive.front().end());
    for (auto& s : found) s.policy_index = 0;
    sort_canonical(found);
    CHECK(found == exact.front);
}

TEST_CASE("nrpa: examples") {
    SECTION("multi-objective problems are rejected") {
        const auto toy = toy_line_problem(2, 2, 2, 1);
        EvalCounter counter(10);
        Rng rng(1);
        CHECK_THROWS_AS(nrpa(1, PolicyTable{}, toy, counter, SearchConfig{}, rng), ContractError);
    }
    SECTION("level 0 is a playout") {
        const auto toy = toy_line_problem(3, 3, 1, 4);
        EvalCounter c1(10), c2(10);
        Rng r1(8), r2(8);
        const auto res = nrpa(0, PolicyTable{}, toy, c1, SearchConfig{}, r1);
        const auto play = playout(toy, PolicyTable{}, true, r2, c2);
        REQUIRE(res);
        CHECK(res->solution == play);
        CHECK(res->score == -play.objectives[0]);
    }
    SECTION("two leaves scored 3 and 7: the best score is 7 at every level") {
        const ToyTreeProblem toy(1, 2, {{-3}, {-7}});
        for (int level = 1; level <= 3; ++level) {
            SearchConfig c;
            c.iterations_per_level = 20;
            c.eval_budget = 10000;
            EvalCounter counter(c.eval_budget);
            Rng rng(static_cast<std::uint64_t>(level));
            const auto res = nrpa(level, PolicyTable{}, toy, counter, c, rng);
            REQUIRE(res);
            CHECK(res->score == 7.0);
            CHECK(res->solution.moves == std::vector<Move>{1});
        }
    }
    SECTION("the stored best is kept on worse results and every adapt uses it") {
        const auto toy = toy_line_problem(3, 3, 1, 9);
        SearchConfig c;
        c.iterations_per_level = 30;
        c.eval_budget = 30;
        std::vector<Step> steps;
        const auto obs = recorder(steps);
        EvalCounter counter(c.eval_budget);
        Rng rng(2);
        const auto res = nrpa(1, PolicyTable{}, toy, counter, c, rng, &obs);
        REQUIRE(res);
        REQUIRE(steps.size() == 29);  // the last iteration exhausts the budget before adapting
        PolicyTable expected;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& st : steps) {
            const auto& kept = st.kept.front();
            CHECK(-kept.objectives[0] >= best);
            best = -kept.objectives[0];
            adapt_in_place(expected, kept.moves, toy, c.alpha, 1.0, c.use_bias);
            CHECK(st.policies.front() == expected);
        }
        CHECK(res->score >= best);
    }
}

TEST_CASE("reduction: one policy, one objective, one unit-weight sequence behaves as NRPA") {
    const auto tsp = load_instance(testsupport::instance_path("rc_207.4"));
    const MoTsptw mo(tsp);
    const ObjectiveProjection<MoTsptw> tsp1(mo, 0);
    const auto toy = toy_line_problem(4, 3, 1, 17);

    SearchConfig c;
    c.level = 2;
    c.iterations_per_level = 8;
    c.eval_budget = 50;
    c.n_policies = 1;
    c.cd_weighting = false;
    c.adapt_strategy = AdaptStrategy::one_sequence;

    auto lockstep = [&](const auto& problem, std::uint64_t seed) {
        std::vector<Step> ps, ns;
        const auto po = recorder(ps);
        const auto no = recorder(ns);
        EvalCounter pc(c.eval_budget), nc(c.eval_budget);
        Rng pr(seed), nr(seed);
        const auto archive = pareto_nrpa(c.level, PolicySet(1), problem, pc, c, pr, &po);
        const auto best = nrpa(c.level, PolicyTable{}, problem, nc, c, nr, &no);
        REQUIRE(ps.size() == ns.size());
        for (std::size_t i = 0; i < ps.size(); ++i) {
            REQUIRE(ps[i].policies.front() == ns[i].policies.front());
            CHECK(ps[i].kept.back().objectives == ns[i].kept.front().objectives);
        }
        REQUIRE(best);
        CHECK(archive.front().back().moves == best->solution.moves);
        CHECK(pc.used() == nc.used());
    };
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        lockstep(toy, seed);
        lockstep(tsp1, seed);
    }
}
