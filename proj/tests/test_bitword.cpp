#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <set>

#include "doctest.h"
#include "obschan/bitword.hpp"
#include "oracles.hpp"

using namespace obschan;

TEST_CASE("label round trip covers the whole range") {
    for (int len = 1; len <= 10; ++len) {
        for (uint64_t k = 1; k <= (1ull << len); ++k) {
            BitWord w = BitWord::from_int(k, len);
            CHECK(w.length() == len);
            CHECK(w.int_label() == k);
        }
    }
    CHECK_THROWS_AS(BitWord::from_int(0, 4), UsageError);
    CHECK_THROWS_AS(BitWord::from_int(17, 4), UsageError);
}

TEST_CASE("string and mask constructors agree") {
    BitWord a = BitWord::from_string("1101");
    CHECK(a.get(1));
    CHECK(a.get(2));
    CHECK(!a.get(3));
    CHECK(a.get(4));
    CHECK(a.int_label() == 1 + 1 + 2 + 8);
    CHECK(a.low_mask() == 0b1011u);  // position 1 is the low bit
    CHECK(BitWord::from_mask(0b1011u, 4) == a);
    CHECK(a.to_string() == "1101");
    CHECK(a.weight() == 3);
}

TEST_CASE("xor requires equal lengths") {
    BitWord a(4), b(5);
    CHECK_THROWS_AS(a ^ b, UsageError);
    BitWord c = BitWord::from_string("1100") ^ BitWord::from_string("1010");
    CHECK(c == BitWord::from_string("0110"));
}

TEST_CASE("int_less matches label order on short words") {
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        int len = 1 + static_cast<int>(rng.below(12));
        BitWord a = sample_uniform(len, rng);
        BitWord b = sample_uniform(len, rng);
        CHECK(BitWord::int_less(a, b) == (a.int_label() < b.int_label()));
    }
}

TEST_CASE("int_less works past 64 positions") {
    // Differ only at position 70: the word with that bit set is larger.
    BitWord a(80), b(80);
    b.set(70, true);
    CHECK(BitWord::int_less(a, b));
    CHECK(!BitWord::int_less(b, a));
    // A high bit outweighs any low bits.
    a.set(1, true);
    a.set(64, true);
    CHECK(BitWord::int_less(a, b));
    CHECK(!BitWord::int_less(a, a));
}

TEST_CASE("ball volume equals the Pascal sum") {
    for (int n = 1; n <= 16; ++n) {
        for (int t = 0; t <= n; ++t) {
            BigInt expect = 0;
            for (int k = 0; k <= t; ++k) expect += oracle::binomial(n, k);
            CHECK(ball_volume(n, t) == expect);
        }
    }
}

TEST_CASE("ball masks come out in canonical order, exactly once") {
    const int n = 8, t = 4;
    BallMaskEnumerator en(n, t);
    std::vector<uint64_t> masks;
    while (auto m = en.next()) masks.push_back(*m);
    CHECK(BigInt(masks.size()) == ball_volume(n, t));
    std::set<uint64_t> distinct(masks.begin(), masks.end());
    CHECK(distinct.size() == masks.size());
    for (size_t i = 1; i < masks.size(); ++i) {
        int w0 = std::popcount(masks[i - 1]);
        int w1 = std::popcount(masks[i]);
        bool ordered = w0 < w1 || (w0 == w1 && masks[i - 1] < masks[i]);
        CHECK(ordered);
    }
    for (uint64_t m : masks) CHECK(std::popcount(m) <= t);
}

TEST_CASE("enumerate_ball stays within distance and hits everything") {
    BitWord center = BitWord::from_string("101100");
    auto ball = enumerate_ball(center, 2);
    CHECK(BigInt(ball.size()) == ball_volume(6, 2));
    for (const BitWord& w : ball) CHECK(hamming_distance(center, w) <= 2);
    CHECK(ball.front() == center);  // weight-0 flip comes first
}

TEST_CASE("hamming distance equals positional disagreement count") {
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        int len = 1 + static_cast<int>(rng.below(90));
        BitWord a = sample_uniform(len, rng);
        BitWord b = sample_uniform(len, rng);
        int d = 0;
        for (int j = 1; j <= len; ++j)
            if (a.get(j) != b.get(j)) ++d;
        CHECK(hamming_distance(a, b) == d);
    }
}

TEST_CASE("exact weight sampler is exact and roughly uniform") {
    Rng rng(17);
    const int n = 6, w = 2;  // 15 candidates
    std::map<uint64_t, int> freq;
    const int draws = 15000;
    for (int t = 0; t < draws; ++t) {
        BitWord s = sample_exact_weight(n, w, rng);
        CHECK(s.weight() == w);
        ++freq[s.low_mask()];
    }
    CHECK(freq.size() == 15);
    // Each candidate expects 1000 draws, sd ~= 30.6; 5 sigma leaves no room
    // for flakiness at a fixed seed.
    for (const auto& [mask, count] : freq) CHECK(std::abs(count - 1000) < 155);
}

TEST_CASE("uniform sampler covers words evenly") {
    Rng rng(23);
    std::map<uint64_t, int> freq;
    const int draws = 16000;
    for (int t = 0; t < draws; ++t) ++freq[sample_uniform(4, rng).low_mask()];
    CHECK(freq.size() == 16);
    for (const auto& [mask, count] : freq) CHECK(std::abs(count - 1000) < 155);
}
