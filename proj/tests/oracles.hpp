#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here recomputes results from first principles with deliberately
// naive loops; none of it calls the library routine it is checking.

#include <cstdint>
#include <span>
#include <vector>

#include "obschan/circuit.hpp"
#include "obschan/code.hpp"

namespace oracle {

double entropy(double x);

/// Bisection inverse of `entropy` on [0, 1/2].
double inverse_entropy(double h);

/// C(n, k) via Pascal's rule.
obschan::BigInt binomial(int n, int k);

/// max over all y in {0,1}^n of the number of rows within distance pn,
/// counted per index. Full 2^n scan; n <= 20.
uint64_t list_size(const obschan::InnerCodebook& inner, int pn);

/// The i-th index word in the (distance to encode(m) ^ e, label) order,
/// recomputed with positional distances and a selection scan.
obschan::BitWord nearest_word(const obschan::ConcatenatedCode& code, uint64_t m,
                              const obschan::BitWord& e, uint64_t i);

/// Exact adversarial error probability by triple loop: circuits, then errors
/// (all 2^n masks filtered by weight), then messages grouped by observation,
/// with its own decode. n <= 12.
obschan::Rational exact_pe(const obschan::ConcatenatedCode& code,
                           std::span<const obschan::Circuit> family);

/// P(Bin(M, 2^-shift) <= j) via the term recurrence
/// P(X = t+1) = P(X = t) * (M - t) / (t + 1) * p / (1 - p), exact.
obschan::Rational binomial_cdf(uint64_t M, int shift, long long j);

/// Distinct single-output functions over n inputs computable with at most
/// `budget` gates (budget <= 2), by direct enumeration of gate assemblies.
uint64_t circuit_function_count(int n, int budget);

}  // namespace oracle
