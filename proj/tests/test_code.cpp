#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "obschan/code.hpp"
#include "oracles.hpp"

using namespace obschan;

namespace {

SystemParams tiny_params() {
    return SystemParams::create(10, 0.15, 0.4, 1, 2, 0.2, 0.4, 0.2, 0.05, 0.01, 0.01);
}

}  // namespace

TEST_CASE("floored integer rates avoid representation error") {
    CHECK(floor_rate(0.3, 20) == 6);
    CHECK(floor_rate(0.1, 10) == 1);
    CHECK(floor_rate(1.0 / 3, 6) == 2);
    CHECK(floor_rate(0.35, 24) == 8);
    CHECK(floor_rate(0.25, 10) == 2);
}

TEST_CASE("parameter validation rejects broken rates") {
    CHECK_THROWS_AS(SystemParams::create(8, 0.6, 0.5, 1, 1, 0.25, 0.5), UsageError);
    CHECK_THROWS_AS(SystemParams::create(8, 0.1, 1.5, 1, 1, 0.25, 0.5), UsageError);
    CHECK_THROWS_AS(SystemParams::create(8, 0.1, 0.5, 1, 1, 0.5, 0.25), UsageError);  // R > rho
    CHECK_THROWS_AS(SystemParams::create(8, 0.1, 0.5, 1, 1, 0.05, 0.5), UsageError);  // Rn = 0
    SystemParams sp = tiny_params();
    CHECK(sp.Rn == 2);
    CHECK(sp.rho_n == 4);
    CHECK(sp.pn_budget == 1);
    CHECK(sp.M == 4);
    CHECK(sp.W == 16);
}

TEST_CASE("inner codebook indexing is by integer label") {
    Rng rng(3);
    InnerCodebook inner = InnerCodebook::sample(10, 4, rng);
    CHECK(inner.size() == 16);
    for (uint64_t j = 1; j <= 16; ++j) {
        BitWord w = inner.index_word(j);
        CHECK(w.int_label() == j);
        CHECK(inner.codeword_of(w) == inner.codeword(j));
        CHECK(inner.codeword(j).length() == 10);
    }
    CHECK_THROWS_AS(inner.codeword(0), UsageError);
    CHECK_THROWS_AS(inner.codeword(17), UsageError);
}

TEST_CASE("replacement changes exactly one row") {
    Rng rng(5);
    InnerCodebook inner = InnerCodebook::sample(8, 3, rng);
    BitWord z = sample_uniform(8, rng);
    InnerCodebook swapped = inner.replaced(5, z);
    for (uint64_t j = 1; j <= 8; ++j) {
        if (j == 5)
            CHECK(swapped.codeword(j) == z);
        else
            CHECK(swapped.codeword(j) == inner.codeword(j));
    }
}

TEST_CASE("list size counts repeated rows per index") {
    std::vector<BitWord> rows(8, BitWord::from_string("110010"));
    InnerCodebook inner = InnerCodebook::from_rows(6, 3, rows);
    CHECK(inner.max_list_size(0) == 8);
    CHECK(inner.max_list_size(1) == 8);
    CHECK(!inner.is_list_decodable(7, 0));
    CHECK(inner.is_list_decodable(8, 0));
}

TEST_CASE("both list-size branches match the full-scan oracle") {
    Rng rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 8 + static_cast<int>(rng.below(4));     // 8..11
        int rho_n = 2 + static_cast<int>(rng.below(4)); // 4..32 rows
        InnerCodebook inner = InnerCodebook::sample(n, rho_n, rng);
        for (int pn = 0; pn <= 3; ++pn)
            CHECK(inner.max_list_size(pn) == oracle::list_size(inner, pn));
    }
}

TEST_CASE("planted list violations are found by sampling") {
    std::vector<BitWord> rows;
    Rng rng(9);
    for (int i = 0; i < 8; ++i) rows.push_back(BitWord::from_string("11110000"));
    InnerCodebook inner = InnerCodebook::from_rows(8, 3, rows);
    auto hit = inner.sampled_list_violation(3, 1, 200, rng);
    REQUIRE(hit.has_value());
    // The witness must actually exhibit the violation.
    uint64_t count = 0;
    for (uint64_t j = 1; j <= 8; ++j)
        if (hamming_distance(inner.codeword(j), *hit) <= 1) ++count;
    CHECK(count > 3);
}

TEST_CASE("outer codebook is injective and invertible") {
    Rng rng(11);
    OuterCodebook outer = OuterCodebook::sample(8, 5, rng);
    CHECK(outer.size() == 8);
    std::set<uint64_t> labels;
    for (uint64_t m = 1; m <= 8; ++m) {
        labels.insert(outer.word(m).int_label());
        auto back = outer.message_of(outer.word(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK(labels.size() == 8);  // distinct words
    CHECK_THROWS_AS(OuterCodebook::sample(33, 5, rng), UsageError);  // M > 2^rho_n

    std::vector<BitWord> dup = {BitWord::from_string("101"), BitWord::from_string("101")};
    CHECK_THROWS_AS(OuterCodebook::from_words(3, dup), UsageError);
}

TEST_CASE("identity outer maps label m to the word with label m") {
    OuterCodebook outer = OuterCodebook::identity(8, 3);
    for (uint64_t m = 1; m <= 8; ++m) CHECK(outer.word(m).int_label() == m);
}

TEST_CASE("encode goes through outer then inner") {
    Rng rng(13);
    SystemParams sp = tiny_params();
    ConcatenatedCode code = ConcatenatedCode::concatenated(sp, 77);
    for (uint64_t m = 1; m <= code.message_count(); ++m)
        CHECK(code.encode(m) == code.inner().codeword_of(code.outer().word(m)));
}

TEST_CASE("plain random mode shares the decode path") {
    SystemParams sp = tiny_params();
    ConcatenatedCode code = ConcatenatedCode::plain_random(sp, 99);
    CHECK(code.mode() == CodeMode::PlainRandom);
    CHECK(code.inner().rho_n() == sp.Rn);  // index words are the messages themselves
    for (uint64_t m = 1; m <= code.message_count(); ++m) {
        CHECK(code.outer().word(m).int_label() == m);
        DecodeOutcome out = code.decode(code.encode(m));
        bool present = std::find(out.refined_list.begin(), out.refined_list.end(),
                                 code.outer().word(m)) != out.refined_list.end();
        CHECK(present);
    }
}

TEST_CASE("decoder always keeps the true outer word in the refined list") {
    Rng rng(17);
    SystemParams sp = tiny_params();
    for (int trial = 0; trial < 200; ++trial) {
        ConcatenatedCode code = ConcatenatedCode::concatenated(sp, rng.next_u64());
        uint64_t m = 1 + rng.below(sp.M);
        int w = static_cast<int>(rng.below(sp.pn_budget + 1));
        BitWord e = sample_exact_weight(sp.n, w, rng);
        DecodeOutcome out = code.decode(code.encode(m) ^ e);
        bool in_inner = std::find(out.inner_list.begin(), out.inner_list.end(),
                                  code.outer().word(m)) != out.inner_list.end();
        bool in_refined = std::find(out.refined_list.begin(), out.refined_list.end(),
                                    code.outer().word(m)) != out.refined_list.end();
        CHECK(in_inner);
        CHECK(in_refined);
        if (out.ok()) CHECK(!out.refined_list.empty());
    }
}

TEST_CASE("inner list is ordered and complete") {
    Rng rng(19);
    SystemParams sp = tiny_params();
    ConcatenatedCode code = ConcatenatedCode::concatenated(sp, 123);
    BitWord y = sample_uniform(sp.n, rng);
    auto list = code.list_decode_inner(y, 2);
    // Complete: exactly the index words within distance 2.
    uint64_t expect = 0;
    for (uint64_t j = 1; j <= sp.W; ++j)
        if (hamming_distance(code.inner().codeword(j), y) <= 2) ++expect;
    CHECK(list.size() == expect);
    for (const BitWord& w : list)
        CHECK(hamming_distance(code.inner().codeword_of(w), y) <= 2);
}

TEST_CASE("nearest words agree with the selection oracle, ties included") {
    Rng rng(23);
    SystemParams sp = tiny_params();
    for (int trial = 0; trial < 10; ++trial) {
        ConcatenatedCode code = ConcatenatedCode::concatenated(sp, rng.next_u64());
        uint64_t m = 1 + rng.below(sp.M);
        BitWord e = sample_exact_weight(sp.n, sp.pn_budget, rng);
        auto words = code.nearest_words(m, e, sp.W);
        REQUIRE(words.size() == sp.W);
        for (uint64_t i = 1; i <= sp.W; ++i) CHECK(words[i - 1] == oracle::nearest_word(code, m, e, i));
    }
}

TEST_CASE("codebook files round trip and validate their header") {
    SystemParams sp = tiny_params();
    ConcatenatedCode code = ConcatenatedCode::concatenated(sp, 2024);
    std::stringstream ss;
    code.write(ss);
    ConcatenatedCode back = ConcatenatedCode::read(ss, sp);
    CHECK(back.mode() == code.mode());
    CHECK(back.seed() == code.seed());
    for (uint64_t m = 1; m <= sp.M; ++m) CHECK(back.encode(m) == code.encode(m));
    for (uint64_t j = 1; j <= sp.W; ++j) CHECK(back.inner().codeword(j) == code.inner().codeword(j));

    // Mismatched parameters must be rejected.
    std::stringstream ss2;
    code.write(ss2);
    SystemParams other = SystemParams::create(10, 0.15, 0.4, 1, 2, 0.2, 0.3, 0.2, 0.05, 0.01, 0.01);
    CHECK_THROWS_AS(ConcatenatedCode::read(ss2, other), UsageError);

    // Truncation must be rejected.
    std::string text = ss.str();
    std::stringstream ss3(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(ConcatenatedCode::read(ss3, sp), UsageError);
}

TEST_CASE("mode strings round trip") {
    CHECK(to_string(CodeMode::Concatenated) == "concat");
    CHECK(to_string(CodeMode::PlainRandom) == "plain");
    CHECK(code_mode_from_string("concat") == CodeMode::Concatenated);
    CHECK(code_mode_from_string("plain") == CodeMode::PlainRandom);
    CHECK_THROWS_AS(code_mode_from_string("noise"), UsageError);
}
