#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "obschan/circuit.hpp"
#include "obschan/code.hpp"

namespace obschan {

/// |O_psi intersect C_n| counted with message multiplicity: the number of
/// messages whose codeword lands in the psi cell (two messages sharing a
/// codeword count twice). Every denominator below uses this count.
uint64_t count_in_cell(const ConcatenatedCode& code, const ObservationPartition& partition,
                       const BitWord& psi);

/// P(Psi = psi) = count_in_cell / M, exact.
Rational observation_probability(const ConcatenatedCode& code,
                                 const ObservationPartition& partition, const BitWord& psi);

/// Strictly below the 2^((delta0 + delta1) n - Rn) threshold.
bool is_informative(const SystemParams& params, const Rational& obs_prob);

struct PhiResult {
    std::vector<uint8_t> phi;  // phi[m-1] for m in [1, M]
    uint64_t Phi = 0;          // sum over m
};

/// phi_m = 1{w_i(m, e) is another message's outer word and inner-decodes into
/// the radius-pn list at y_m} * 1{codeword(m) in O_psi}; Phi is the total.
PhiResult compute_phi(const ConcatenatedCode& code, const ObservationPartition& partition,
                      const BitWord& psi, const BitWord& e, uint64_t i);

/// The conditional probability q_i = P_m(w_i in L_in, w_i in I_m | Psi = psi),
/// computed by direct message counting over the cell, then cross-checked as an
/// exact integer identity against Phi / count_in_cell. Requires a nonempty cell.
Rational compute_q(const ConcatenatedCode& code, const ObservationPartition& partition,
                   const BitWord& psi, const BitWord& e, uint64_t i);

struct TypicalityReport {
    bool applicable = false;      // |O_psi| >= 2^((n - Rn) + delta0 n)
    uint64_t cell_size = 0;       // |O_psi|
    uint64_t cell_count = 0;      // |O_psi intersect C_n|
    double delta0_prime = 0;      // (log2 |O_psi| - (n - Rn)) / n
    double ell = 0;               // 2^((4 delta0'/13) n)
    double t_lower = 0;           // 2^(delta0' n) - 2^((3/4) delta0' n)
    double t_upper = 0;           // 2^(delta0' n) + 2^((3/4) delta0' n)
    double k_lipschitz = 0;       // (2 ell + 3) / (t_lower - 1); valid when t_lower > 1
    bool list_decodable = false;  // [floor(ell), pn] exhaustive check
    bool count_in_range = false;  // t_lower <= cell_count <= t_upper
    bool typical = false;         // applicable && list_decodable && count_in_range
};

TypicalityReport typicality(const ConcatenatedCode& code, const ObservationPartition& partition,
                            const BitWord& psi);

struct QPrimeResult {
    long double value = 0;   // Phi / t
    long double t = 0;       // max(count_in_cell, t_lower)
    uint64_t Phi = 0;
    bool exact = false;      // t == count_in_cell, so value equals q exactly
    Rational exact_value;    // set when exact
};

/// q' from the typicality-smoothed denominator. Requires the cell to clear the
/// applicability threshold (delta0' must exist).
QPrimeResult compute_q_prime(const ConcatenatedCode& code, const ObservationPartition& partition,
                             const BitWord& psi, const BitWord& e, uint64_t i);

struct VariationReport {
    long double q_prime = 0;
    long double v_prime = 0;    // sum_j 2^-n sum_z (q'(C) - q'(C(j,z)))^2
    long double max_delta = 0;  // max |q'(C) - q'(C(j,z))|
    uint64_t pairs = 0;
};

/// Full replacement sweep over all rows j and all z in {0,1}^n.
/// Guards: n <= 12, rho_n <= 5.
VariationReport compute_variation(const ConcatenatedCode& code,
                                  const ObservationPartition& partition, const BitWord& psi,
                                  const BitWord& e, uint64_t i);

struct ClaimViolation {
    int claim = 0;
    uint64_t m = 0, k = 0, i = 0;
    uint64_t z_mask = 0;
    std::string detail;
};

struct ClaimSweepResult {
    // Index 1..4; [0] unused.
    std::array<uint64_t, 5> checked{};
    std::vector<ClaimViolation> violations;
};

/// Exhaustive (m, k, z) sweep of the four single-replacement claims at every
/// i in `is`, recomputing both sides from scratch per tuple. Tuples whose
/// hypotheses fail are skipped (not counted in `checked`).
/// Guards: n <= 12, rho_n <= 5.
ClaimSweepResult verify_claims(const ConcatenatedCode& code, const ObservationPartition& partition,
                               const BitWord& psi, const BitWord& e, std::span<const uint64_t> is);

struct VariationInstance {
    const ConcatenatedCode* code = nullptr;
    const ObservationPartition* partition = nullptr;
    BitWord psi;
    BitWord e;
};

struct VariationBoundsReport {
    uint64_t sum_checked = 0;       // (m, z) pairs checked against sum_j <= i+1
    uint64_t sum_violations = 0;
    uint64_t lipschitz_checked = 0; // (j, z) pairs checked against K_T
    uint64_t lipschitz_violations = 0;
    uint64_t skipped_atypical = 0;  // instances where the typicality predicate failed
    struct Diagnostic {
        size_t instance = 0;
        bool typical = false;
        long double v_prime = 0;
        double typical_coefficient_rhs = 0;  // (t_U (ell+1) + 2^(delta0' n + eps_R n)) K_T^2
        double global_rhs = 0;               // 5 i + 14
    };
    std::vector<Diagnostic> diagnostics;    // finite-n report only, never asserted
};

/// Hard checks: per-message replacement sums <= i+1 (all z outside the ball),
/// and the per-replacement Lipschitz bound on typical instances. Atypical
/// instances are skipped and counted.
VariationBoundsReport verify_variation_bounds(std::span<const VariationInstance> instances,
                                              uint64_t i);

struct BinomialCheckRow {
    int n = 0, Rn = 0;
    BigInt cell_size;      // |A| = 2^(n - shift)
    double sigma = 0;      // |t - mu| = sigma * sqrt(mu)
    double mu = 0;
    double t_lower = 0, t_upper = 0;
    double lower_tail = 0, lower_bound = 0;
    double upper_tail = 0, upper_bound = 0;
    bool pass = false;
};

/// Exact binomial tails of |A intersect C_n| ~ Bin(2^Rn, 2^-shift) against the
/// concentration bound formulas over the cross product of the grids. Points
/// with mu < 4 are dropped; sigma grid must stay >= 2. Guard: Rn <= 12 so the
/// exact CDF stays cheap.
std::vector<BinomialCheckRow> binomial_concentration_check(std::span<const int> ns,
                                                           std::span<const int> Rns,
                                                           std::span<const int> shifts,
                                                           std::span<const double> sigmas);

struct TrendPoint {
    int n = 0;
    double mean = 0;
    double ci_half = 0;  // 1.96 * sd / sqrt(samples)
    uint64_t samples = 0;
};

/// Monte Carlo estimate of E over inner codebooks of q_i at each parameter
/// set, with the observation fixed to a width-obs_width prefix projection,
/// psi read off message 1's codeword, and e the lowest-position weight-pn word.
std::vector<TrendPoint> expectation_q_trend(std::span<const SystemParams> params_list, uint64_t i,
                                            uint64_t samples, uint64_t seed);

struct UnionBoundResult {
    Rational upper;        // max_f sum_{i<=L} E_psi max_e q_i
    Rational exact_pe;     // exact Eq-style error probability, same family
    bool dominates = false;
    uint64_t max_list = 0; // largest |L_in| realized over (m, e)
    uint64_t L = 0;        // as capped to W
};

/// List-truncated union bound against the exact error probability on the same
/// circuit family. Throws VerificationError if the bound fails to dominate
/// while L covers every realized list size. Guards: n <= 12, rho_n <= 5.
UnionBoundResult union_bound_pe(const ConcatenatedCode& code, std::span<const Circuit> family,
                                uint64_t L);

struct TailDiagnosticRow {
    double lambda = 0;
    double empirical = 0;          // fraction of samples with q' - mean > lambda
    double generic_bound = 0;      // exp(-lambda^2 / (8 a_T)), a_T = 2^(-delta0 n / 30)
    double application_bound = 0;  // 2 exp(-2^(delta0 n / 30) / (8 n^2))
    uint64_t samples = 0;
};

/// Finite-n concentration report; the bounds are asymptotic statements and are
/// printed beside the data, never asserted.
std::vector<TailDiagnosticRow> concentration_tail_diagnostic(const SystemParams& params,
                                                             std::span<const double> lambdas,
                                                             uint64_t i, uint64_t samples,
                                                             uint64_t seed);

}  // namespace obschan
