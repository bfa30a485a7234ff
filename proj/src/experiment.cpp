#include "obschan/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace obschan {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_rational(const Rational& v) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(v) << '/' << boost::multiprecision::denominator(v);
    return os.str();
}

struct WilsonInterval {
    double low = 0, high = 0;
};

// 95% score interval; well defined for every errors/trials combination.
WilsonInterval wilson(uint64_t errors, uint64_t trials) {
    const double z = 1.959963984540054;
    double nT = static_cast<double>(trials);
    double ph = static_cast<double>(errors) / nT;
    double z2 = z * z;
    double denom = 1 + z2 / nT;
    double center = (ph + z2 / (2 * nT)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / nT + z2 / (4 * nT * nT)) / denom;
    // At the boundary the exact endpoint is 0 (or 1); the formula leaves a
    // ~1e-18 rounding residue there.
    double low = errors == 0 ? 0.0 : std::max(0.0, center - half);
    double high = errors == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

}  // namespace

SystemParams ExperimentConfig::system() const {
    return SystemParams::create(n, p, r, c, s, R, rho, delta0, delta1, eps_rho, eps_R);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError(std::string("config parse: ") + ex.what());
    }
    if (!j.is_object()) throw UsageError("config parse: top level must be an object");
    ExperimentConfig cfg;
    try {
        cfg.n = j.at("n").get<int>();
        cfg.p = j.at("p").get<double>();
        cfg.r = j.at("r").get<double>();
        cfg.R = j.at("R").get<double>();
        cfg.rho = j.at("rho").get<double>();
        cfg.c = j.value("c", 1);
        cfg.s = j.value("s", 1);
        cfg.delta0 = j.value("delta0", 0.0);
        cfg.delta1 = j.value("delta1", 0.0);
        cfg.eps_rho = j.value("eps_rho", 0.0);
        cfg.eps_R = j.value("eps_R", 0.0);
        cfg.mode = code_mode_from_string(j.value("mode", std::string("concat")));
        cfg.strategy = j.value("strategy", std::string("oblivious"));
        cfg.seed = j.value("seed", uint64_t{0});
        cfg.trials = j.value("trials", uint64_t{1000});
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError(std::string("config fields: ") + ex.what());
    }
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["p"] = p;
    j["r"] = r;
    j["c"] = c;
    j["s"] = s;
    j["R"] = R;
    j["rho"] = rho;
    j["delta0"] = delta0;
    j["delta1"] = delta1;
    j["eps_rho"] = eps_rho;
    j["eps_R"] = eps_R;
    j["mode"] = to_string(mode);
    j["strategy"] = strategy;
    j["seed"] = seed;
    j["trials"] = trials;
    return j.dump();
}

uint64_t ExperimentConfig::config_hash() const {
    std::string text = to_json_text();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string ExperimentResult::csv_header() {
    return "n,R,rho,p,r,mode,strategy,seed,trials,errors,p_hat,ci_low,ci_high,exact,wall_ms";
}

std::string ExperimentResult::csv_row() const {
    std::ostringstream os;
    os << config.n << ',' << fmt_double(config.R) << ',' << fmt_double(config.rho) << ','
       << fmt_double(config.p) << ',' << fmt_double(config.r) << ',' << to_string(config.mode)
       << ',' << config.strategy << ',' << config.seed << ',' << trials << ',' << errors << ','
       << fmt_double(p_hat) << ',' << fmt_double(ci_low) << ',' << fmt_double(ci_high) << ',';
    if (exact) os << fmt_rational(*exact);
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",%.3f", wall_ms);
    os << buf;
    return os.str();
}

std::string ExperimentResult::to_json_text() const {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::parse(config.to_json_text());
    j["trials"] = trials;
    j["errors"] = errors;
    j["p_hat"] = p_hat;
    j["ci_low"] = ci_low;
    j["ci_high"] = ci_high;
    if (exact)
        j["exact"] = fmt_rational(*exact);
    else
        j["exact"] = nullptr;
    j["wall_ms"] = wall_ms;
    return j.dump(2);
}

Rational exact_error_probability(const ConcatenatedCode& code, std::span<const Circuit> family) {
    const SystemParams& sp = code.params();
    if (family.empty()) throw UsageError("exact_error_probability: empty circuit family");
    if (sp.n > 14) throw CapacityError("exact_error_probability: n must be <= 14");
    if (code.inner().rho_n() > 8) throw CapacityError("exact_error_probability: rho_n must be <= 8");
    if (ball_volume(sp.n, sp.pn_budget) > (BigInt(1) << 18))
        throw CapacityError("exact_error_probability: error ball too large");

    std::vector<uint64_t> masks;
    {
        BallMaskEnumerator en(sp.n, sp.pn_budget);
        while (auto mk = en.next()) masks.push_back(*mk);
    }
    const uint64_t M = code.message_count();
    Rational best = 0;
    for (const Circuit& f : family) {
        if (f.n_inputs != sp.n)
            throw UsageError("exact_error_probability: circuit arity mismatch");
        ObservationPartition partition(f);
        std::vector<std::vector<uint64_t>> bucket(partition.cell_count());
        for (uint64_t m = 1; m <= M; ++m) bucket[partition.cell_of(code.encode(m))].push_back(m);
        Rational total = 0;
        for (uint32_t cell = 0; cell < partition.cell_count(); ++cell) {
            if (bucket[cell].empty()) continue;
            uint64_t worst = 0;
            for (uint64_t mk : masks) {
                BitWord e = BitWord::from_mask(mk, sp.n);
                uint64_t fails = 0;
                for (uint64_t m : bucket[cell]) {
                    DecodeOutcome out = code.decode(code.encode(m) ^ e);
                    if (!out.ok() || *out.message != m) ++fails;
                }
                worst = std::max(worst, fails);
                if (worst == bucket[cell].size()) break;
            }
            // (|cell| / M) * (worst / |cell|) collapses to worst / M.
            total += Rational(worst, M);
        }
        best = std::max(best, total);
    }
    return best;
}

std::vector<Circuit> named_circuit_family(const std::string& name, const SystemParams& params) {
    if (name == "identity") return {Circuit::identity(params.n)};
    if (name == "constant") return {Circuit::constant(params.n, params.obs_width)};
    throw UsageError("unknown circuit family '" + name + "' (want identity or constant)");
}

ExperimentResult run_monte_carlo(const ExperimentConfig& config) {
    if (config.trials < 1) throw UsageError("run_monte_carlo: need trials >= 1");
    SystemParams sp = config.system();
    auto t0 = std::chrono::steady_clock::now();

    Rng code_rng = Rng::substream(config.seed, 0);
    ConcatenatedCode code = config.mode == CodeMode::Concatenated
                                ? ConcatenatedCode::concatenated(sp, code_rng.next_u64())
                                : ConcatenatedCode::plain_random(sp, code_rng.next_u64());
    Rng setup_rng = Rng::substream(config.seed, 1);
    auto strategy = make_strategy(config.strategy, sp, setup_rng);

    uint64_t errors = 0;
    for (uint64_t t = 0; t < config.trials; ++t) {
        Rng rng = Rng::substream(config.seed, 2 + t);
        uint64_t m0 = 1 + rng.below(code.message_count());
        Circuit f = strategy->choose_circuit(code, rng);
        BudgetReport budget = validate_budget(f, sp.r, sp.c, sp.s);
        if (!budget.ok)
            throw VerificationError("strategy '" + config.strategy +
                                    "' produced an out-of-budget circuit");
        const BitWord& x = code.encode(m0);
        BitWord psi = strategy->genie_observation() ? x : f.evaluate(x);
        BitWord e = strategy->choose_error(code, f, psi, rng);
        if (e.length() != sp.n || e.weight() > sp.pn_budget)
            throw VerificationError("strategy '" + config.strategy +
                                    "' produced an out-of-budget error");
        DecodeOutcome out = code.decode(x ^ e);
        if (!out.ok() || *out.message != m0) ++errors;
    }

    ExperimentResult res;
    res.config = config;
    res.trials = config.trials;
    res.errors = errors;
    res.p_hat = static_cast<double>(errors) / static_cast<double>(config.trials);
    WilsonInterval ci = wilson(errors, config.trials);
    res.ci_low = ci.low;
    res.ci_high = ci.high;
    auto t1 = std::chrono::steady_clock::now();
    res.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return res;
}

ExperimentResult run_exact_pe(const ExperimentConfig& config, std::span<const Circuit> family) {
    SystemParams sp = config.system();
    auto t0 = std::chrono::steady_clock::now();

    Rng code_rng = Rng::substream(config.seed, 0);
    ConcatenatedCode code = config.mode == CodeMode::Concatenated
                                ? ConcatenatedCode::concatenated(sp, code_rng.next_u64())
                                : ConcatenatedCode::plain_random(sp, code_rng.next_u64());

    std::vector<Circuit> circuits(family.begin(), family.end());
    if (circuits.empty()) {
        // No explicit family: the configured strategy picks the one circuit.
        Rng setup_rng = Rng::substream(config.seed, 1);
        auto strategy = make_strategy(config.strategy, sp, setup_rng);
        Rng choice_rng = Rng::substream(config.seed, 2);
        Circuit f = strategy->choose_circuit(code, choice_rng);
        BudgetReport budget = validate_budget(f, sp.r, sp.c, sp.s);
        if (!budget.ok)
            throw VerificationError("strategy '" + config.strategy +
                                    "' produced an out-of-budget circuit");
        circuits.push_back(std::move(f));
    }

    ExperimentResult res;
    res.config = config;
    res.exact = exact_error_probability(code, circuits);
    res.p_hat = res.exact->convert_to<double>();
    res.ci_low = res.p_hat;
    res.ci_high = res.p_hat;
    auto t1 = std::chrono::steady_clock::now();
    res.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return res;
}

std::vector<ExperimentResult> sweep(std::span<const ExperimentConfig> configs, int threads) {
    std::vector<ExperimentResult> out(configs.size());
    parallel_for(configs.size(), threads, [&](uint64_t begin, uint64_t end) {
        for (uint64_t i = begin; i < end; ++i) out[i] = run_monte_carlo(configs[i]);
    });
    return out;
}

}  // namespace obschan
