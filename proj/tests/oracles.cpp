#include "oracles.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace oracle {

using obschan::BigInt;
using obschan::BitWord;
using obschan::Circuit;
using obschan::ConcatenatedCode;
using obschan::InnerCodebook;
using obschan::Rational;

double entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double ln2 = std::log(2.0);
    return -(x * std::log(x) + (1.0 - x) * std::log(1.0 - x)) / ln2;
}

double inverse_entropy(double h) {
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        if (entropy(mid) < h)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::vector<BigInt> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[j] += row[j - 1];
    return row[k];
}

uint64_t list_size(const InnerCodebook& inner, int pn) {
    int n = inner.n();
    if (n > 20) throw std::runtime_error("oracle::list_size: n too large");
    uint64_t best = 0;
    for (uint64_t ymask = 0; ymask < (1ull << n); ++ymask) {
        uint64_t hits = 0;
        for (uint64_t j = 1; j <= inner.size(); ++j)
            if (std::popcount(inner.codeword(j).low_mask() ^ ymask) <= pn) ++hits;
        best = std::max(best, hits);
    }
    return best;
}

namespace {

int pos_distance(const BitWord& a, const BitWord& b) {
    int d = 0;
    for (int j = 1; j <= a.length(); ++j)
        if (a.get(j) != b.get(j)) ++d;
    return d;
}

}  // namespace

BitWord nearest_word(const ConcatenatedCode& code, uint64_t m, const BitWord& e, uint64_t i) {
    const InnerCodebook& inner = code.inner();
    BitWord y = code.encode(m) ^ e;
    uint64_t W = inner.size();
    std::vector<bool> taken(W + 1, false);
    uint64_t pick = 0;
    for (uint64_t round = 0; round < i; ++round) {
        int best_d = -1;
        pick = 0;
        for (uint64_t j = 1; j <= W; ++j) {
            if (taken[j]) continue;
            int d = pos_distance(inner.codeword(j), y);
            if (best_d < 0 || d < best_d || (d == best_d && j < pick)) {
                best_d = d;
                pick = j;
            }
        }
        taken[pick] = true;
    }
    return inner.index_word(pick);
}

Rational exact_pe(const ConcatenatedCode& code, std::span<const Circuit> family) {
    const int n = code.params().n;
    const int pn = code.params().pn_budget;
    if (n > 12) throw std::runtime_error("oracle::exact_pe: n too large");
    const uint64_t M = code.message_count();

    auto decode_is = [&](const BitWord& y, uint64_t m) {
        // Survivors: outer words whose inner image lies within pn of y.
        std::vector<uint64_t> survivors;
        for (uint64_t m2 = 1; m2 <= M; ++m2) {
            const BitWord& w = code.outer().word(m2);
            if (pos_distance(code.inner().codeword_of(w), y) <= pn) survivors.push_back(m2);
        }
        return survivors.size() == 1 && survivors[0] == m;
    };

    Rational best = 0;
    for (const Circuit& f : family) {
        std::map<uint64_t, std::vector<uint64_t>> groups;
        for (uint64_t m = 1; m <= M; ++m)
            groups[f.evaluate(code.encode(m)).low_mask()].push_back(m);
        Rational total = 0;
        for (const auto& [psi, members] : groups) {
            uint64_t worst = 0;
            for (uint64_t emask = 0; emask < (1ull << n); ++emask) {
                if (std::popcount(emask) > pn) continue;
                uint64_t fails = 0;
                for (uint64_t m : members)
                    if (!decode_is(code.encode(m) ^ BitWord::from_mask(emask, n), m)) ++fails;
                worst = std::max(worst, fails);
            }
            total += Rational(worst, M);
        }
        if (total > best) best = total;
    }
    return best;
}

Rational binomial_cdf(uint64_t M, int shift, long long j) {
    if (j < 0) return 0;
    Rational p(1, BigInt(1) << shift);
    Rational q = Rational(1) - p;
    Rational term = 1;
    for (uint64_t t = 0; t < M; ++t) term *= q;  // q^M
    Rational acc = 0;
    Rational ratio = p / q;
    for (long long t = 0; t <= j && t <= static_cast<long long>(M); ++t) {
        acc += term;
        term *= Rational(M - static_cast<uint64_t>(t), static_cast<uint64_t>(t) + 1) * ratio;
    }
    return acc;
}

namespace {

uint8_t apply_tt(int n_points, uint8_t tt, uint8_t va, uint8_t vb) {
    uint8_t out = 0;
    for (int k = 0; k < n_points; ++k) {
        int l = (va >> k) & 1;
        int r = (vb >> k) & 1;
        if ((tt >> (l * 2 + r)) & 1) out |= static_cast<uint8_t>(1u << k);
    }
    return out;
}

}  // namespace

uint64_t circuit_function_count(int n, int budget) {
    if (n < 1 || n > 3 || budget < 0 || budget > 2)
        throw std::runtime_error("oracle::circuit_function_count: out of range");
    const int points = 1 << n;
    std::vector<uint8_t> base;
    for (int i = 0; i < n; ++i) {
        uint8_t v = 0;
        for (int k = 0; k < points; ++k)
            if ((k >> i) & 1) v |= static_cast<uint8_t>(1u << k);
        base.push_back(v);
    }
    base.push_back(0);
    uint8_t ones = static_cast<uint8_t>((1u << points) - 1);
    base.push_back(ones);

    std::set<uint8_t> seen(base.begin(), base.end());
    if (budget >= 1) {
        for (int tt = 0; tt < 16; ++tt)
            for (uint8_t a : base)
                for (uint8_t b : base)
                    seen.insert(apply_tt(points, static_cast<uint8_t>(tt), a, b));
    }
    if (budget >= 2) {
        // Every two-gate assembly: pick the first gate, then the second draws
        // operands from the base pool plus that one first gate.
        for (int t1 = 0; t1 < 16; ++t1) {
            for (uint8_t a : base) {
                for (uint8_t b : base) {
                    uint8_t g1 = apply_tt(points, static_cast<uint8_t>(t1), a, b);
                    std::vector<uint8_t> pool = base;
                    pool.push_back(g1);
                    for (int t2 = 0; t2 < 16; ++t2)
                        for (uint8_t u : pool)
                            for (uint8_t v : pool)
                                seen.insert(apply_tt(points, static_cast<uint8_t>(t2), u, v));
                }
            }
        }
    }
    return seen.size();
}

}  // namespace oracle
