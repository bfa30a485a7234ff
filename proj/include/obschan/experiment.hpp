#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obschan/adversary.hpp"
#include "obschan/circuit.hpp"
#include "obschan/code.hpp"

namespace obschan {

/// One run description; serializes to/from a flat snake_case JSON object.
struct ExperimentConfig {
    int n = 0;
    double p = 0;
    double r = 0;
    int c = 1, s = 1;
    double R = 0;
    double rho = 0;
    double delta0 = 0, delta1 = 0, eps_rho = 0, eps_R = 0;
    CodeMode mode = CodeMode::Concatenated;
    std::string strategy = "oblivious";
    uint64_t seed = 0;
    uint64_t trials = 0;

    SystemParams system() const;

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    /// FNV-1a over the canonical JSON text; stamped into output headers so a
    /// result row can be traced to the exact configuration that produced it.
    uint64_t config_hash() const;
};

struct ExperimentResult {
    ExperimentConfig config;
    uint64_t trials = 0;
    uint64_t errors = 0;
    double p_hat = 0;
    double ci_low = 0, ci_high = 0;  // Wilson score interval at 95%
    std::optional<Rational> exact;   // set by the exact runner
    double wall_ms = 0;              // informational; excluded from reproducibility

    static std::string csv_header();
    std::string csv_row() const;
    std::string to_json_text() const;
};

/// Exact adversarial error probability over a circuit family: for each circuit,
/// each observation cell contributes its probability times the worst over all
/// errors in the radius-pn ball of the in-cell decode failure fraction; the
/// result is the maximum over the family. Guards: n <= 14, rho_n <= 8,
/// ball_volume(n, pn) <= 2^18.
Rational exact_error_probability(const ConcatenatedCode& code, std::span<const Circuit> family);

/// Named circuit families for the exact runner: "identity" (the one full
/// observation) and "constant" (the one width-obs_width all-zero observation).
std::vector<Circuit> named_circuit_family(const std::string& name, const SystemParams& params);

/// Monte Carlo estimate of the strategy's success against a fresh code drawn
/// from substream (seed, 0). Strategy setup uses substream (seed, 1); trial t
/// uses substream (seed, 2 + t), so any prefix of trials is reproducible.
/// Every trial hard-checks the circuit budget and the error weight.
ExperimentResult run_monte_carlo(const ExperimentConfig& config);

/// Exact error probability for the code drawn from the config seed, against
/// `family` plus the configured strategy's own circuit choice.
ExperimentResult run_exact_pe(const ExperimentConfig& config, std::span<const Circuit> family);

/// One Monte Carlo run per config; rows in input order. Runs are independent,
/// so `threads` workers may process disjoint config ranges concurrently
/// without changing any result.
std::vector<ExperimentResult> sweep(std::span<const ExperimentConfig> configs, int threads = 1);

}  // namespace obschan
