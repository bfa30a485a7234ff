#include <cmath>
#include <string>

#include "doctest.h"
#include "obschan/experiment.hpp"
#include "oracles.hpp"

using namespace obschan;

namespace {

ExperimentConfig full_view_config() {
    ExperimentConfig cfg;
    cfg.n = 10;
    cfg.p = 0.15;
    cfg.r = 1.0;
    cfg.c = 1;
    cfg.s = 2;
    cfg.R = 0.2;
    cfg.rho = 0.4;
    cfg.delta0 = 0.2;
    cfg.delta1 = 0.05;
    cfg.eps_rho = 0.01;
    cfg.eps_R = 0.01;
    cfg.strategy = "omniscient";
    cfg.seed = 1234;
    cfg.trials = 3000;
    return cfg;
}

std::string drop_wall_field(const std::string& csv) {
    return csv.substr(0, csv.rfind(','));
}

}  // namespace

TEST_CASE("config JSON round trips byte for byte") {
    ExperimentConfig cfg = full_view_config();
    std::string text = cfg.to_json_text();
    ExperimentConfig back = ExperimentConfig::from_json_text(text);
    CHECK(back.to_json_text() == text);
    CHECK(back.config_hash() == cfg.config_hash());
    CHECK(back.n == cfg.n);
    CHECK(back.strategy == cfg.strategy);
    CHECK(back.trials == cfg.trials);

    ExperimentConfig other = cfg;
    other.seed += 1;
    CHECK(other.config_hash() != cfg.config_hash());
}

TEST_CASE("config defaults fill in and required keys are enforced") {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"n": 12, "p": 0.1, "r": 0.5, "R": 0.25, "rho": 0.5})");
    CHECK(cfg.c == 1);
    CHECK(cfg.s == 1);
    CHECK(cfg.mode == CodeMode::Concatenated);
    CHECK(cfg.strategy == "oblivious");
    CHECK(cfg.seed == 0);
    CHECK(cfg.trials == 1000);
    SystemParams sp = cfg.system();
    CHECK(sp.n == 12);
    CHECK(sp.pn_budget == 1);
    CHECK(sp.obs_width == 6);

    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"n": 12, "p": 0.1})"), UsageError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), UsageError);
}

TEST_CASE("monte carlo runs reproduce exactly") {
    ExperimentConfig cfg = full_view_config();
    cfg.trials = 400;
    ExperimentResult a = run_monte_carlo(cfg);
    ExperimentResult b = run_monte_carlo(cfg);
    CHECK(a.trials == 400);
    CHECK(a.errors == b.errors);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    // Same bytes up to the wall-clock column, which is informational only.
    CHECK(drop_wall_field(a.csv_row()) == drop_wall_field(b.csv_row()));
    CHECK(a.ci_low <= a.p_hat);
    CHECK(a.p_hat <= a.ci_high);
}

TEST_CASE("omniscient monte carlo brackets the exact full-view value") {
    // Under the identity observation each cell is a single codeword, so the
    // exact per-cell worst case is 1 iff some budget error breaks the message.
    // The omniscient search realizes exactly that indicator per trial.
    ExperimentConfig cfg = full_view_config();
    ExperimentResult mc = run_monte_carlo(cfg);
    std::vector<Circuit> family = named_circuit_family("identity", cfg.system());
    ExperimentResult ex = run_exact_pe(cfg, family);
    REQUIRE(ex.exact.has_value());
    double exact = ex.exact->convert_to<double>();
    CHECK(ex.p_hat == exact);
    CHECK(ex.ci_low == exact);
    CHECK(ex.ci_high == exact);
    CHECK(mc.ci_low <= exact);
    CHECK(exact <= mc.ci_high);
}

TEST_CASE("sweep output does not depend on the thread count") {
    std::vector<ExperimentConfig> configs;
    for (uint64_t seed = 0; seed < 6; ++seed) {
        ExperimentConfig cfg = full_view_config();
        cfg.strategy = (seed % 2 == 0) ? "oblivious" : "erasure";
        cfg.r = 0.5;
        cfg.seed = 100 + seed;
        cfg.trials = 120;
        configs.push_back(cfg);
    }
    auto one = sweep(configs, 1);
    auto four = sweep(configs, 4);
    REQUIRE(one.size() == configs.size());
    REQUIRE(four.size() == configs.size());
    for (size_t i = 0; i < configs.size(); ++i) {
        CHECK(one[i].config.seed == configs[i].seed);  // rows stay in input order
        CHECK(drop_wall_field(one[i].csv_row()) == drop_wall_field(four[i].csv_row()));
    }
}

TEST_CASE("exact runner agrees with the brute-force oracle") {
    SystemParams sp = SystemParams::create(10, 0.15, 0.4, 1, 2, 0.2, 0.4, 0.2, 0.05, 0.01, 0.01);
    std::vector<Circuit> family = named_circuit_family("constant", sp);
    auto ident = named_circuit_family("identity", sp);
    family.insert(family.end(), ident.begin(), ident.end());
    for (uint64_t seed = 0; seed < 5; ++seed) {
        ConcatenatedCode code = ConcatenatedCode::concatenated(sp, 7000 + seed);
        CHECK(exact_error_probability(code, family) == oracle::exact_pe(code, family));
    }
    // Plain random mode rides the same decode path.
    ConcatenatedCode plain = ConcatenatedCode::plain_random(sp, 11);
    CHECK(exact_error_probability(plain, family) == oracle::exact_pe(plain, family));
}

TEST_CASE("named circuit families are exactly the advertised ones") {
    SystemParams sp = SystemParams::create(10, 0.15, 0.4, 1, 2, 0.2, 0.4, 0.2, 0.05, 0.01, 0.01);
    auto ident = named_circuit_family("identity", sp);
    REQUIRE(ident.size() == 1);
    CHECK(ident[0].output_width() == sp.n);
    Rng rng(3);
    BitWord x = sample_uniform(sp.n, rng);
    CHECK(ident[0].evaluate(x) == x);

    auto constant = named_circuit_family("constant", sp);
    REQUIRE(constant.size() == 1);
    CHECK(constant[0].output_width() == sp.obs_width);
    CHECK(constant[0].evaluate(x) == BitWord(sp.obs_width));

    CHECK_THROWS_AS(named_circuit_family("nope", sp), UsageError);
}

TEST_CASE("csv layout stays pinned") {
    CHECK(ExperimentResult::csv_header() ==
          "n,R,rho,p,r,mode,strategy,seed,trials,errors,p_hat,ci_low,ci_high,exact,wall_ms");
    ExperimentConfig cfg = full_view_config();
    cfg.trials = 50;
    ExperimentResult res = run_monte_carlo(cfg);
    std::string row = res.csv_row();
    size_t commas = 0;
    for (char ch : row) commas += (ch == ',');
    CHECK(commas == 14);
    CHECK(row.rfind("10,", 0) == 0);  // leading n column
}
