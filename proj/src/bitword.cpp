#include "obschan/bitword.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace obschan {

BitWord::BitWord(int len) : len_(len) {
    if (len < 0) throw UsageError("BitWord: negative length");
    w_.assign((static_cast<size_t>(len) + 63) / 64, 0);
}

BitWord BitWord::from_string(std::string_view s) {
    BitWord b(static_cast<int>(s.size()));
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c != '0' && c != '1') throw UsageError("BitWord::from_string: expected '0' or '1'");
        if (c == '1') b.w_[i / 64] |= 1ull << (i % 64);
    }
    return b;
}

BitWord BitWord::from_int(uint64_t k, int len) {
    if (len < 0 || len > 63) throw CapacityError("BitWord::from_int: length must be in [0, 63]");
    if (k < 1 || k > (1ull << len)) throw UsageError("BitWord::from_int: label out of [1, 2^len]");
    return from_mask(k - 1, len);
}

BitWord BitWord::from_mask(uint64_t mask, int len) {
    if (len < 0 || len > 64) throw CapacityError("BitWord::from_mask: length must be in [0, 64]");
    if (len < 64 && (mask >> len) != 0) throw UsageError("BitWord::from_mask: mask has bits past length");
    BitWord b(len);
    if (len > 0) b.w_[0] = mask;
    return b;
}

bool BitWord::get(int pos) const {
    if (pos < 1 || pos > len_) throw UsageError("BitWord::get: position out of range");
    size_t i = static_cast<size_t>(pos - 1);
    return (w_[i / 64] >> (i % 64)) & 1ull;
}

void BitWord::set(int pos, bool v) {
    if (pos < 1 || pos > len_) throw UsageError("BitWord::set: position out of range");
    size_t i = static_cast<size_t>(pos - 1);
    uint64_t bit = 1ull << (i % 64);
    if (v)
        w_[i / 64] |= bit;
    else
        w_[i / 64] &= ~bit;
}

int BitWord::weight() const {
    int c = 0;
    for (uint64_t x : w_) c += std::popcount(x);
    return c;
}

bool BitWord::is_zero() const {
    for (uint64_t x : w_)
        if (x) return false;
    return true;
}

uint64_t BitWord::int_label() const {
    if (len_ > 63) throw CapacityError("BitWord::int_label: length must be <= 63");
    return (len_ == 0 ? 0 : w_[0]) + 1;
}

uint64_t BitWord::low_mask() const {
    if (len_ > 64) throw CapacityError("BitWord::low_mask: length must be <= 64");
    return len_ == 0 ? 0 : w_[0];
}

std::string BitWord::to_string() const {
    std::string s(static_cast<size_t>(len_), '0');
    for (int j = 1; j <= len_; ++j)
        if (get(j)) s[static_cast<size_t>(j - 1)] = '1';
    return s;
}

BitWord BitWord::operator^(const BitWord& o) const {
    if (len_ != o.len_) throw UsageError("BitWord::operator^: length mismatch");
    BitWord r(len_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] ^ o.w_[i];
    return r;
}

bool BitWord::int_less(const BitWord& a, const BitWord& b) {
    if (a.len_ != b.len_) throw UsageError("BitWord::int_less: length mismatch");
    // Label order == value of sum a_j 2^{j-1}: compare packed words high to low.
    for (size_t i = a.w_.size(); i-- > 0;)
        if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
    return false;
}

int hamming_distance(const BitWord& a, const BitWord& b) {
    if (a.length() != b.length()) throw UsageError("hamming_distance: length mismatch");
    const auto& wa = a.words();
    const auto& wb = b.words();
    int d = 0;
    for (size_t i = 0; i < wa.size(); ++i) d += std::popcount(wa[i] ^ wb[i]);
    return d;
}

BigInt ball_volume(int n, int t) {
    if (n < 0 || t < 0 || t > n) throw UsageError("ball_volume: need 0 <= t <= n");
    BigInt total = 0;
    BigInt binom = 1;  // C(n, 0)
    for (int k = 0; k <= t; ++k) {
        total += binom;
        binom = binom * (n - k) / (k + 1);
    }
    return total;
}

BallMaskEnumerator::BallMaskEnumerator(int n, int t) : n_(n), t_(t) {
    if (n < 0 || n > 63) throw CapacityError("BallMaskEnumerator: n must be in [0, 63]");
    if (t < 0 || t > n) throw UsageError("BallMaskEnumerator: need 0 <= t <= n");
}

std::optional<uint64_t> BallMaskEnumerator::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
        mask_ = 0;
        return mask_;  // weight 0
    }
    uint64_t limit = (n_ == 63) ? (1ull << 63) : (1ull << n_);
    for (;;) {
        if (w_ == 0) {
            w_ = 1;
            mask_ = (w_ <= n_) ? ((1ull << w_) - 1) : 0;
        } else {
            // Gosper's hack: next mask of the same weight.
            uint64_t c = mask_ & (0 - mask_);
            uint64_t r = mask_ + c;
            mask_ = (((r ^ mask_) >> 2) / c) | r;
        }
        if (w_ > t_) {
            done_ = true;
            return std::nullopt;
        }
        if (mask_ != 0 && mask_ < limit) return mask_;
        ++w_;
        if (w_ > t_) {
            done_ = true;
            return std::nullopt;
        }
        mask_ = (1ull << w_) - 1;
        if (mask_ < limit) return mask_;
        // w_ > n_ can't happen: t_ <= n_ bounds w_.
    }
}

std::vector<BitWord> enumerate_ball(const BitWord& center, int t) {
    if (center.length() > 63) throw CapacityError("enumerate_ball: center length must be <= 63");
    std::vector<BitWord> out;
    for_each_in_ball(center, t, [&](BitWord w) { out.push_back(std::move(w)); });
    return out;
}

BitWord sample_exact_weight(int n, int w, Rng& rng) {
    if (w < 0 || w > n) throw UsageError("sample_exact_weight: need 0 <= w <= n");
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 1);
    BitWord out(n);
    // Partial Fisher-Yates: the first w entries are a uniform w-subset.
    for (int i = 0; i < w; ++i) {
        uint64_t j = i + rng.below(static_cast<uint64_t>(n - i));
        std::swap(idx[static_cast<size_t>(i)], idx[j]);
        out.set(idx[static_cast<size_t>(i)], true);
    }
    return out;
}

BitWord sample_uniform(int n, Rng& rng) {
    BitWord out(n);
    for (int j = 1; j <= n; ++j)
        if (rng.coin()) out.set(j, true);
    return out;
}

}  // namespace obschan
