#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obschan/common.hpp"

namespace obschan {

/// Fixed-length binary word. Positions are 1-based: position j is bit j-1 of
/// the packed storage, so position 1 is the least significant bit of word 0.
/// The integer label of a word a is 1 + sum_j a_j 2^{j-1}; all orderings that
/// say "smaller label" compare that value.
class BitWord {
public:
    BitWord() = default;
    explicit BitWord(int len);

    /// ASCII '0'/'1'; the first character is position 1.
    static BitWord from_string(std::string_view s);

    /// Inverse of int_label: k in [1, 2^len], len <= 63.
    static BitWord from_int(uint64_t k, int len);

    /// Low 'len' bits of mask become the word (bit j-1 -> position j). len <= 64.
    static BitWord from_mask(uint64_t mask, int len);

    int length() const { return len_; }
    bool get(int pos) const;
    void set(int pos, bool v);
    int weight() const;
    bool is_zero() const;

    /// 1 + sum_j a_j 2^{j-1}. Guarded to len <= 63 so the result fits u64.
    uint64_t int_label() const;

    /// Packed value of the first 64 bits (whole word when len <= 64).
    uint64_t low_mask() const;

    std::string to_string() const;

    BitWord operator^(const BitWord& o) const;
    bool operator==(const BitWord& o) const = default;

    /// Strict order by integer label; valid for any length (positions past the
    /// 63rd compare via the packed words, which agrees with the label order).
    static bool int_less(const BitWord& a, const BitWord& b);

    const std::vector<uint64_t>& words() const { return w_; }

private:
    int len_ = 0;
    std::vector<uint64_t> w_;
};

int hamming_distance(const BitWord& a, const BitWord& b);

/// |B_t(0)| = sum_{k<=t} C(n,k), exact.
BigInt ball_volume(int n, int t);

/// Flip masks of weight 0..t over n <= 63 positions, in canonical order:
/// weight ascending, then numeric mask value ascending (equivalently the flip
/// pattern's integer label). This order is load-bearing: exhaustive error
/// searches define "first failing error" by it.
class BallMaskEnumerator {
public:
    BallMaskEnumerator(int n, int t);
    std::optional<uint64_t> next();

private:
    int n_;
    int t_;
    int w_ = 0;
    uint64_t mask_ = 0;
    bool started_ = false;
    bool done_ = false;
};

/// All words within distance t of center, in canonical flip order. center.length() <= 63.
std::vector<BitWord> enumerate_ball(const BitWord& center, int t);

template <class Fn>
void for_each_in_ball(const BitWord& center, int t, Fn&& fn) {
    BallMaskEnumerator en(center.length(), t);
    while (auto m = en.next()) fn(center ^ BitWord::from_mask(*m, center.length()));
}

/// Uniform word of exactly weight w among the C(n,w) candidates.
BitWord sample_exact_weight(int n, int w, Rng& rng);

/// Uniform word of length n.
BitWord sample_uniform(int n, Rng& rng);

}  // namespace obschan
