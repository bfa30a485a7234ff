#include "obschan/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "obschan/experiment.hpp"

namespace obschan {

namespace {

/// Fresh total order of all index words by (distance to y, integer label).
std::vector<std::pair<int, uint64_t>> rank_words(const InnerCodebook& inner, const BitWord& y) {
    uint64_t W = inner.size();
    std::vector<std::pair<int, uint64_t>> ranked;
    ranked.reserve(W);
    for (uint64_t j = 1; j <= W; ++j)
        ranked.emplace_back(hamming_distance(inner.codeword(j), y), j);
    std::sort(ranked.begin(), ranked.end());
    return ranked;
}

/// phi for one message under an arbitrary inner codebook variant; everything
/// (codeword, received word, order) is recomputed from the variant.
uint8_t phi_one(const OuterCodebook& outer, const InnerCodebook& inner,
                const ObservationPartition& partition, const std::optional<uint32_t>& cell,
                uint64_t m, const BitWord& e, uint64_t i, int pn) {
    BitWord xm = inner.codeword_of(outer.word(m));
    if (!cell || partition.cell_of(xm) != *cell) return 0;
    BitWord y = xm ^ e;
    auto ranked = rank_words(inner, y);
    auto [dist, j] = ranked[i - 1];
    auto owner = outer.message_of(inner.index_word(j));
    if (!owner || *owner == m) return 0;
    return dist <= pn ? 1 : 0;
}

/// q' numerator/denominator under an inner variant, shared by the variation
/// sweep and the Lipschitz check so both sides use identical arithmetic.
long double q_prime_value(const OuterCodebook& outer, const InnerCodebook& inner,
                          const ObservationPartition& partition,
                          const std::optional<uint32_t>& cell, double t_lower, const BitWord& e,
                          uint64_t i, int pn) {
    uint64_t count = 0, Phi = 0;
    for (uint64_t m = 1; m <= outer.size(); ++m) {
        BitWord xm = inner.codeword_of(outer.word(m));
        if (!cell || partition.cell_of(xm) != *cell) continue;
        ++count;
        Phi += phi_one(outer, inner, partition, cell, m, e, i, pn);
    }
    long double t = std::max<long double>(static_cast<long double>(count), t_lower);
    if (t <= 0) throw UsageError("q': degenerate denominator (empty cell and t_lower = 0)");
    return static_cast<long double>(Phi) / t;
}

/// Distance computed position by position; the deliberately naive path used
/// by the direct-count side of compute_q.
int slow_distance(const BitWord& a, const BitWord& b) {
    int d = 0;
    for (int j = 1; j <= a.length(); ++j)
        if (a.get(j) != b.get(j)) ++d;
    return d;
}

void check_phi_inputs(const ConcatenatedCode& code, const BitWord& e, uint64_t i) {
    if (e.length() != code.params().n) throw UsageError("analysis: error length mismatch");
    if (e.weight() > code.params().pn_budget) throw UsageError("analysis: error weight over budget");
    if (i < 1 || i > code.inner().size()) throw UsageError("analysis: need 1 <= i <= W");
}

void check_sweep_guards(const ConcatenatedCode& code) {
    if (code.params().n > 12) throw CapacityError("analysis sweep: n must be <= 12");
    if (code.inner().rho_n() > 5) throw CapacityError("analysis sweep: rho_n must be <= 5");
}

}  // namespace

uint64_t count_in_cell(const ConcatenatedCode& code, const ObservationPartition& partition,
                       const BitWord& psi) {
    auto cell = partition.cell_id(psi);
    if (!cell) return 0;
    uint64_t count = 0;
    for (uint64_t m = 1; m <= code.message_count(); ++m)
        if (partition.cell_of(code.encode(m)) == *cell) ++count;
    return count;
}

Rational observation_probability(const ConcatenatedCode& code,
                                 const ObservationPartition& partition, const BitWord& psi) {
    return Rational(count_in_cell(code, partition, psi), code.message_count());
}

bool is_informative(const SystemParams& params, const Rational& obs_prob) {
    double exponent = (params.delta0 + params.delta1) * params.n - params.Rn;
    double rounded = std::round(exponent);
    if (std::abs(exponent - rounded) < 1e-9) {
        // Exact dyadic threshold: compare as rationals so the boundary case is strict.
        long k = static_cast<long>(rounded);
        Rational threshold = k >= 0 ? Rational(BigInt(1) << k)
                                    : Rational(BigInt(1), BigInt(1) << (-k));
        return obs_prob < threshold;
    }
    if (obs_prob == 0) return true;
    double log2p = std::log2(obs_prob.convert_to<double>());
    return log2p < exponent;
}

PhiResult compute_phi(const ConcatenatedCode& code, const ObservationPartition& partition,
                      const BitWord& psi, const BitWord& e, uint64_t i) {
    check_phi_inputs(code, e, i);
    auto cell = partition.cell_id(psi);
    PhiResult out;
    uint64_t M = code.message_count();
    out.phi.resize(M, 0);
    for (uint64_t m = 1; m <= M; ++m) {
        uint8_t v = phi_one(code.outer(), code.inner(), partition, cell, m, e, i,
                            code.params().pn_budget);
        out.phi[m - 1] = v;
        out.Phi += v;
    }
    return out;
}

Rational compute_q(const ConcatenatedCode& code, const ObservationPartition& partition,
                   const BitWord& psi, const BitWord& e, uint64_t i) {
    check_phi_inputs(code, e, i);
    const auto& outer = code.outer();
    const auto& inner = code.inner();
    int pn = code.params().pn_budget;
    uint64_t W = inner.size();
    uint64_t denom = 0, num = 0;
    for (uint64_t m = 1; m <= code.message_count(); ++m) {
        BitWord xm = code.encode(m);
        if (!partition.contains(psi, xm)) continue;
        ++denom;
        BitWord y = xm ^ e;
        // Direct path: order rebuilt with positional distances and an explicit
        // stable sort; membership by linear scans.
        std::vector<std::pair<int, uint64_t>> order;
        order.reserve(W);
        for (uint64_t j = 1; j <= W; ++j) order.emplace_back(slow_distance(inner.codeword(j), y), j);
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        auto [dist, j_i] = order[i - 1];
        BitWord wi = inner.index_word(j_i);
        bool in_competitors = false;
        for (uint64_t m2 = 1; m2 <= code.message_count(); ++m2) {
            if (m2 != m && outer.word(m2) == wi) {
                in_competitors = true;
                break;
            }
        }
        if (in_competitors && slow_distance(inner.codeword_of(wi), y) <= pn) ++num;
    }
    if (denom == 0) throw UsageError("compute_q: conditioning cell holds no codewords");
    // Identity against the Phi route, as integers (common denominator cancels).
    PhiResult pr = compute_phi(code, partition, psi, e, i);
    if (num != pr.Phi)
        throw VerificationError("compute_q: direct count " + std::to_string(num) +
                                " != Phi " + std::to_string(pr.Phi));
    return Rational(num, denom);
}

TypicalityReport typicality(const ConcatenatedCode& code, const ObservationPartition& partition,
                            const BitWord& psi) {
    const SystemParams& sp = code.params();
    TypicalityReport rep;
    auto cell = partition.cell_id(psi);
    rep.cell_size = cell ? partition.cell_size(*cell) : 0;
    rep.cell_count = count_in_cell(code, partition, psi);
    if (rep.cell_size == 0) return rep;

    double threshold_exp = (sp.n - sp.Rn) + sp.delta0 * sp.n;
    double log_cell = std::log2(static_cast<double>(rep.cell_size));
    double rounded = std::round(threshold_exp);
    if (std::abs(threshold_exp - rounded) < 1e-9 && rounded >= 0)
        rep.applicable = BigInt(rep.cell_size) >= (BigInt(1) << static_cast<unsigned>(rounded));
    else
        rep.applicable = log_cell >= threshold_exp;
    if (!rep.applicable) return rep;

    rep.delta0_prime = (log_cell - (sp.n - sp.Rn)) / sp.n;
    double dn = rep.delta0_prime * sp.n;
    rep.ell = std::exp2(4 * dn / 13);
    rep.t_lower = std::exp2(dn) - std::exp2(0.75 * dn);
    rep.t_upper = std::exp2(dn) + std::exp2(0.75 * dn);
    rep.k_lipschitz = rep.t_lower > 1
                          ? (2 * rep.ell + 3) / (rep.t_lower - 1)
                          : std::numeric_limits<double>::quiet_NaN();
    uint64_t ell_floor = static_cast<uint64_t>(std::floor(rep.ell));
    rep.list_decodable = code.inner().is_list_decodable(ell_floor, sp.pn_budget);
    rep.count_in_range = rep.t_lower <= static_cast<double>(rep.cell_count) &&
                         static_cast<double>(rep.cell_count) <= rep.t_upper;
    rep.typical = rep.applicable && rep.list_decodable && rep.count_in_range;
    return rep;
}

QPrimeResult compute_q_prime(const ConcatenatedCode& code, const ObservationPartition& partition,
                             const BitWord& psi, const BitWord& e, uint64_t i) {
    check_phi_inputs(code, e, i);
    TypicalityReport typ = typicality(code, partition, psi);
    if (!typ.applicable) throw UsageError("compute_q_prime: cell below applicability threshold");
    PhiResult pr = compute_phi(code, partition, psi, e, i);
    QPrimeResult out;
    out.Phi = pr.Phi;
    out.t = std::max<long double>(static_cast<long double>(typ.cell_count), typ.t_lower);
    if (out.t <= 0) throw UsageError("compute_q_prime: degenerate denominator");
    out.value = static_cast<long double>(pr.Phi) / out.t;
    out.exact = static_cast<long double>(typ.cell_count) >= typ.t_lower && typ.cell_count > 0;
    if (out.exact) out.exact_value = Rational(pr.Phi, typ.cell_count);
    return out;
}

VariationReport compute_variation(const ConcatenatedCode& code,
                                  const ObservationPartition& partition, const BitWord& psi,
                                  const BitWord& e, uint64_t i) {
    check_sweep_guards(code);
    check_phi_inputs(code, e, i);
    const SystemParams& sp = code.params();
    TypicalityReport typ = typicality(code, partition, psi);
    if (!typ.applicable) throw UsageError("compute_variation: cell below applicability threshold");
    auto cell = partition.cell_id(psi);
    VariationReport rep;
    rep.q_prime = q_prime_value(code.outer(), code.inner(), partition, cell, typ.t_lower, e, i,
                                sp.pn_budget);
    uint64_t W = code.inner().size();
    uint64_t zs = 1ull << sp.n;
    long double inv = std::exp2(static_cast<long double>(-sp.n));
    for (uint64_t j = 1; j <= W; ++j) {
        long double acc = 0;
        for (uint64_t zmask = 0; zmask < zs; ++zmask) {
            InnerCodebook variant = code.inner().replaced(j, BitWord::from_mask(zmask, sp.n));
            long double qv = q_prime_value(code.outer(), variant, partition, cell, typ.t_lower, e,
                                           i, sp.pn_budget);
            long double delta = rep.q_prime >= qv ? rep.q_prime - qv : qv - rep.q_prime;
            acc += delta * delta;
            rep.max_delta = std::max(rep.max_delta, delta);
            ++rep.pairs;
        }
        rep.v_prime += inv * acc;
    }
    return rep;
}

ClaimSweepResult verify_claims(const ConcatenatedCode& code, const ObservationPartition& partition,
                               const BitWord& psi, const BitWord& e, std::span<const uint64_t> is) {
    check_sweep_guards(code);
    if (is.empty()) throw UsageError("verify_claims: need at least one i");
    for (uint64_t i : is) check_phi_inputs(code, e, i);
    const SystemParams& sp = code.params();
    const auto& outer = code.outer();
    const auto& inner = code.inner();
    const int pn = sp.pn_budget;
    const uint64_t W = inner.size();
    const uint64_t zs = 1ull << sp.n;
    auto cell = partition.cell_id(psi);
    ClaimSweepResult res;

    auto in_cell = [&](const BitWord& x) { return cell && partition.cell_of(x) == *cell; };
    auto indicator = [&](const InnerCodebook& book, const std::pair<int, uint64_t>& wi_entry,
                         uint64_t m) {
        auto owner = outer.message_of(book.index_word(wi_entry.second));
        return owner && *owner != m && wi_entry.first <= pn;
    };

    for (uint64_t m = 1; m <= code.message_count(); ++m) {
        const BitWord xm = code.encode(m);
        const BitWord ym = xm ^ e;
        const uint64_t ym_mask = ym.low_mask();
        auto base = rank_words(inner, ym);
        std::vector<int> dist_of(W + 1, 0);
        for (const auto& [d, j] : base) dist_of[j] = d;
        const uint64_t m_label = outer.word(m).int_label();

        for (uint64_t k = 1; k <= W; ++k) {
            const uint64_t j_k = base[k - 1].second;
            const bool wk_is_own = j_k == m_label;
            const bool jk_outside = dist_of[j_k] > pn;
            for (uint64_t zmask = 0; zmask < zs; ++zmask) {
                const int zdist = std::popcount(zmask ^ ym_mask);
                const bool z_outside = zdist > pn;
                // Shared lazily-built replacement state for this (m, k, z).
                bool built = false;
                InnerCodebook variant;
                BitWord ym2;
                std::vector<std::pair<int, uint64_t>> rank2;
                auto build = [&] {
                    if (built) return;
                    built = true;
                    variant = inner.replaced(j_k, BitWord::from_mask(zmask, sp.n));
                    ym2 = variant.codeword_of(outer.word(m)) ^ e;
                    rank2 = rank_words(variant, ym2);
                };
                for (uint64_t i : is) {
                    const auto wi_base = base[i - 1];
                    const bool wi_outside = wi_base.first > pn;

                    if (z_outside && jk_outside && wi_outside) {
                        build();
                        ++res.checked[1];
                        if (rank2[i - 1].first <= pn)
                            res.violations.push_back(
                                {1, m, k, i, zmask, "replacement codeword entered the ball"});
                    }
                    if (k > i && !wk_is_own && wi_base.first < zdist) {
                        build();
                        ++res.checked[2];
                        if (base[i - 1].second != rank2[i - 1].second)
                            res.violations.push_back({2, m, k, i, zmask, "w_i moved"});
                    }
                    if (z_outside && !wk_is_own && (k > i || jk_outside)) {
                        build();
                        ++res.checked[3];
                        if (indicator(inner, base[i - 1], m) != indicator(variant, rank2[i - 1], m))
                            res.violations.push_back({3, m, k, i, zmask, "indicator flipped"});
                        ++res.checked[4];
                        uint8_t phi_base =
                            in_cell(xm) && indicator(inner, base[i - 1], m) ? 1 : 0;
                        uint8_t phi_var = in_cell(variant.codeword_of(outer.word(m))) &&
                                                  indicator(variant, rank2[i - 1], m)
                                              ? 1
                                              : 0;
                        if (phi_base != phi_var)
                            res.violations.push_back({4, m, k, i, zmask, "phi changed"});
                    }
                }
            }
        }
    }
    return res;
}

VariationBoundsReport verify_variation_bounds(std::span<const VariationInstance> instances,
                                              uint64_t i) {
    VariationBoundsReport rep;
    for (size_t idx = 0; idx < instances.size(); ++idx) {
        const VariationInstance& inst = instances[idx];
        const ConcatenatedCode& code = *inst.code;
        const ObservationPartition& partition = *inst.partition;
        check_sweep_guards(code);
        check_phi_inputs(code, inst.e, i);
        const SystemParams& sp = code.params();
        const auto& outer = code.outer();
        const auto& inner = code.inner();
        const int pn = sp.pn_budget;
        const uint64_t W = inner.size();
        const uint64_t zs = 1ull << sp.n;
        auto cell = partition.cell_id(inst.psi);

        // (a) hard: for every m and every z outside the ball at y_m,
        //     sum_j |phi_m(C) - phi_m(C(j,z))| <= i + 1.
        for (uint64_t m = 1; m <= code.message_count(); ++m) {
            BitWord ym = code.encode(m) ^ inst.e;
            uint64_t ym_mask = ym.low_mask();
            uint8_t base_phi = phi_one(outer, inner, partition, cell, m, inst.e, i, pn);
            for (uint64_t zmask = 0; zmask < zs; ++zmask) {
                if (std::popcount(zmask ^ ym_mask) <= pn) continue;
                uint64_t total = 0;
                for (uint64_t j = 1; j <= W; ++j) {
                    InnerCodebook variant = inner.replaced(j, BitWord::from_mask(zmask, sp.n));
                    uint8_t var_phi = phi_one(outer, variant, partition, cell, m, inst.e, i, pn);
                    total += base_phi >= var_phi ? base_phi - var_phi : var_phi - base_phi;
                }
                ++rep.sum_checked;
                if (total > i + 1) ++rep.sum_violations;
            }
        }

        // (b) hard on typical instances: every replacement moves q' by at most
        //     K_T. Atypical instances (or t_L <= 1, where the constant is
        //     undefined) are skipped and counted.
        TypicalityReport typ = typicality(code, partition, inst.psi);
        VariationBoundsReport::Diagnostic diag;
        diag.instance = idx;
        diag.typical = typ.typical;
        diag.global_rhs = 5.0 * static_cast<double>(i) + 14.0;
        if (typ.typical && typ.t_lower > 1) {
            long double base_q = q_prime_value(outer, inner, partition, cell, typ.t_lower, inst.e,
                                               i, pn);
            long double v_prime = 0;
            long double inv = std::exp2(static_cast<long double>(-sp.n));
            for (uint64_t j = 1; j <= W; ++j) {
                long double acc = 0;
                for (uint64_t zmask = 0; zmask < zs; ++zmask) {
                    InnerCodebook variant = inner.replaced(j, BitWord::from_mask(zmask, sp.n));
                    long double qv = q_prime_value(outer, variant, partition, cell, typ.t_lower,
                                                   inst.e, i, pn);
                    long double delta = base_q >= qv ? base_q - qv : qv - base_q;
                    ++rep.lipschitz_checked;
                    if (delta > typ.k_lipschitz) ++rep.lipschitz_violations;
                    acc += delta * delta;
                }
                v_prime += inv * acc;
            }
            diag.v_prime = v_prime;
            double dn = typ.delta0_prime * sp.n;
            diag.typical_coefficient_rhs =
                (typ.t_upper * (typ.ell + 1) + std::exp2(dn + sp.eps_R * sp.n)) *
                typ.k_lipschitz * typ.k_lipschitz;
        } else {
            ++rep.skipped_atypical;
        }
        rep.diagnostics.push_back(diag);
    }
    return rep;
}

std::vector<BinomialCheckRow> binomial_concentration_check(std::span<const int> ns,
                                                           std::span<const int> Rns,
                                                           std::span<const int> shifts,
                                                           std::span<const double> sigmas) {
    std::vector<BinomialCheckRow> rows;
    for (int Rn : Rns) {
        if (Rn < 1 || Rn > 12)
            throw CapacityError("binomial_concentration_check: Rn must be in [1, 12]");
        uint64_t M = 1ull << Rn;
        for (int n : ns) {
            for (int shift : shifts) {
                if (shift < 1 || shift > n) continue;  // a proper sub-cube
                if (Rn - shift < 2) continue;          // mu = 2^(Rn - shift) >= 4
                double mu = std::exp2(Rn - shift);
                // Exact CDF of Bin(M, 2^-shift): common denominator 2^(shift M),
                // numerator term_t = C(M, t) (2^shift - 1)^(M - t).
                BigInt denom = BigInt(1) << (static_cast<unsigned>(shift) * M);
                BigInt odds = (BigInt(1) << shift) - 1;
                auto cdf_numerator = [&](long long j) {
                    BigInt acc = 0;
                    if (j < 0) return acc;
                    BigInt binom = 1;
                    BigInt power = boost::multiprecision::pow(odds, static_cast<unsigned>(M));
                    for (long long t = 0; t <= j; ++t) {
                        acc += binom * power;
                        binom = binom * (M - static_cast<uint64_t>(t)) /
                                (static_cast<uint64_t>(t) + 1);
                        power /= odds;
                    }
                    return acc;
                };
                for (double sigma : sigmas) {
                    if (sigma < 2)
                        throw UsageError("binomial_concentration_check: sigma grid must be >= 2");
                    BinomialCheckRow row;
                    row.n = n;
                    row.Rn = Rn;
                    row.cell_size = BigInt(1) << static_cast<unsigned>(n - shift);
                    row.sigma = sigma;
                    row.mu = mu;
                    row.t_lower = mu - sigma * std::sqrt(mu);
                    row.t_upper = mu + sigma * std::sqrt(mu);
                    long long j_lo = static_cast<long long>(std::ceil(row.t_lower)) - 1;
                    long long j_hi = static_cast<long long>(std::floor(row.t_upper));
                    Rational lower_tail =
                        j_lo < 0 ? Rational(0) : Rational(cdf_numerator(j_lo), denom);
                    Rational upper_tail = Rational(denom - cdf_numerator(j_hi), denom);
                    row.lower_tail = lower_tail.convert_to<double>();
                    row.upper_tail = upper_tail.convert_to<double>();
                    double dl = mu - row.t_lower;
                    double du = row.t_upper - mu;
                    row.lower_bound = 2 * std::exp(-dl * dl / (4 * mu));
                    row.upper_bound = 2 * std::exp(-du * du / (4 * (row.t_upper + mu)));
                    row.pass = row.lower_tail <= row.lower_bound && row.upper_tail <= row.upper_bound;
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

std::vector<TrendPoint> expectation_q_trend(std::span<const SystemParams> params_list, uint64_t i,
                                            uint64_t samples, uint64_t seed) {
    if (samples < 2) throw UsageError("expectation_q_trend: need samples >= 2");
    std::vector<TrendPoint> out;
    for (size_t pi = 0; pi < params_list.size(); ++pi) {
        const SystemParams& sp = params_list[pi];
        std::vector<int> idx;
        for (int j = 1; j <= sp.obs_width; ++j) idx.push_back(j);
        Circuit f = Circuit::projection(sp.n, idx);
        ObservationPartition partition(f);
        BitWord e(sp.n);
        for (int j = 1; j <= sp.pn_budget; ++j) e.set(j, true);
        double sum = 0, sumsq = 0;
        for (uint64_t t = 0; t < samples; ++t) {
            Rng rng = Rng::substream(seed, (static_cast<uint64_t>(pi) << 40) | t);
            ConcatenatedCode code = ConcatenatedCode::concatenated(sp, rng.next_u64());
            BitWord psi = f.evaluate(code.encode(1));
            double q = compute_q(code, partition, psi, e, i).convert_to<double>();
            sum += q;
            sumsq += q * q;
        }
        TrendPoint pt;
        pt.n = sp.n;
        pt.samples = samples;
        pt.mean = sum / static_cast<double>(samples);
        double var = std::max(0.0, sumsq / static_cast<double>(samples) - pt.mean * pt.mean);
        pt.ci_half = 1.96 * std::sqrt(var / static_cast<double>(samples));
        out.push_back(pt);
    }
    return out;
}

UnionBoundResult union_bound_pe(const ConcatenatedCode& code, std::span<const Circuit> family,
                                uint64_t L) {
    check_sweep_guards(code);
    if (family.empty()) throw UsageError("union_bound_pe: empty circuit family");
    if (L < 1) throw UsageError("union_bound_pe: need L >= 1");
    const SystemParams& sp = code.params();
    const uint64_t W = code.inner().size();
    const uint64_t M = code.message_count();
    UnionBoundResult res;
    res.L = std::min(L, W);

    // Largest inner list size any (m, e) produces; independent of the circuit.
    {
        BallMaskEnumerator en(sp.n, sp.pn_budget);
        std::vector<uint64_t> masks;
        while (auto mk = en.next()) masks.push_back(*mk);
        for (uint64_t m = 1; m <= M; ++m) {
            for (uint64_t mk : masks) {
                BitWord y = code.encode(m) ^ BitWord::from_mask(mk, sp.n);
                res.max_list = std::max<uint64_t>(res.max_list,
                                                  code.list_decode_inner(y, sp.pn_budget).size());
            }
        }
    }

    res.upper = 0;
    for (const Circuit& f : family) {
        ObservationPartition partition(f);
        std::vector<std::vector<uint64_t>> bucket(partition.cell_count());
        for (uint64_t m = 1; m <= M; ++m) bucket[partition.cell_of(code.encode(m))].push_back(m);
        Rational total = 0;
        for (uint32_t cell = 0; cell < partition.cell_count(); ++cell) {
            if (bucket[cell].empty()) continue;
            uint64_t count = bucket[cell].size();
            std::vector<Rational> best(res.L, Rational(0));
            BallMaskEnumerator en(sp.n, sp.pn_budget);
            while (auto mk = en.next()) {
                BitWord e = BitWord::from_mask(*mk, sp.n);
                std::vector<uint64_t> phi(res.L, 0);
                for (uint64_t m : bucket[cell]) {
                    BitWord y = code.encode(m) ^ e;
                    auto ranked = rank_words(code.inner(), y);
                    for (uint64_t i = 1; i <= res.L; ++i) {
                        auto [dist, j] = ranked[i - 1];
                        auto owner = code.outer().message_of(code.inner().index_word(j));
                        if (owner && *owner != m && dist <= sp.pn_budget) ++phi[i - 1];
                    }
                }
                for (uint64_t i = 0; i < res.L; ++i)
                    best[i] = std::max(best[i], Rational(phi[i], count));
            }
            Rational cell_sum = 0;
            for (const Rational& b : best) cell_sum += b;
            total += Rational(count, M) * cell_sum;
        }
        res.upper = std::max(res.upper, total);
    }

    res.exact_pe = exact_error_probability(code, family);
    res.dominates = res.upper >= res.exact_pe;
    if (res.L >= res.max_list && !res.dominates)
        throw VerificationError("union_bound_pe: bound failed to dominate with covering L");
    return res;
}

std::vector<TailDiagnosticRow> concentration_tail_diagnostic(const SystemParams& params,
                                                             std::span<const double> lambdas,
                                                             uint64_t i, uint64_t samples,
                                                             uint64_t seed) {
    if (samples < 2) throw UsageError("concentration_tail_diagnostic: need samples >= 2");
    std::vector<int> idx;
    for (int j = 1; j <= params.obs_width; ++j) idx.push_back(j);
    Circuit f = Circuit::projection(params.n, idx);
    ObservationPartition partition(f);
    BitWord e(params.n);
    for (int j = 1; j <= params.pn_budget; ++j) e.set(j, true);
    std::vector<double> values;
    for (uint64_t t = 0; t < samples; ++t) {
        Rng rng = Rng::substream(seed, t);
        ConcatenatedCode code = ConcatenatedCode::concatenated(params, rng.next_u64());
        BitWord psi = f.evaluate(code.encode(1));
        TypicalityReport typ = typicality(code, partition, psi);
        if (!typ.applicable) continue;
        auto cell = partition.cell_id(psi);
        values.push_back(static_cast<double>(q_prime_value(code.outer(), code.inner(), partition,
                                                           cell, typ.t_lower, e, i,
                                                           params.pn_budget)));
    }
    double mean = 0;
    for (double v : values) mean += v;
    if (!values.empty()) mean /= static_cast<double>(values.size());
    double a_T = std::exp2(-params.delta0 * params.n / 30.0);
    double application =
        2 * std::exp(-std::exp2(params.delta0 * params.n / 30.0) /
                     (8.0 * params.n * params.n));
    std::vector<TailDiagnosticRow> rows;
    for (double lambda : lambdas) {
        TailDiagnosticRow row;
        row.lambda = lambda;
        row.samples = values.size();
        uint64_t hits = 0;
        for (double v : values)
            if (v - mean > lambda) ++hits;
        row.empirical = values.empty() ? 0 : static_cast<double>(hits) / values.size();
        row.generic_bound = std::exp(-lambda * lambda / (8 * a_T));
        row.application_bound = application;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace obschan
