#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "obschan/bitword.hpp"
#include "obschan/common.hpp"

namespace obschan {

/// Block-level parameters. The real-valued rates are kept, but every integer
/// derived from them (Rn, rho_n, obs_width, pn_budget) is floored exactly once
/// here and used consistently everywhere downstream.
struct SystemParams {
    int n = 0;
    double p = 0;        // error fraction, 0 < p < 1/2
    double r = 0;        // observation rate, 0 <= r <= 1
    int c = 1, s = 1;    // circuit size budget c * n^s
    double R = 0;        // message rate
    double rho = 0;      // inner rate, R <= rho
    double delta0 = 0, delta1 = 0, eps_rho = 0, eps_R = 0;

    int Rn = 0;          // floor(R * n)
    int rho_n = 0;       // floor(rho * n)
    int obs_width = 0;   // floor(r * n)
    int pn_budget = 0;   // floor(p * n)
    uint64_t M = 0;      // 2^Rn messages
    uint64_t W = 0;      // 2^rho_n inner words

    static SystemParams create(int n, double p, double r, int c, int s, double R, double rho,
                               double delta0 = 0, double delta1 = 0, double eps_rho = 0,
                               double eps_R = 0);
};

/// floor(rate * n) with a nudge against binary representation error
/// (0.3 * 20 must floor to 6, not 5).
int floor_rate(double rate, int n);

/// W = 2^rho_n words of length n indexed by the integer label of their rho_n-bit
/// index word: codeword(j) is the image of the word w with int_label(w) = j.
class InnerCodebook {
public:
    /// I.i.d. uniform rows. Guard: rho_n <= 26.
    static InnerCodebook sample(int n, int rho_n, Rng& rng);
    static InnerCodebook from_rows(int n, int rho_n, std::vector<BitWord> rows);

    uint64_t size() const { return rows_.size(); }
    int n() const { return n_; }
    int rho_n() const { return rho_n_; }

    const BitWord& codeword(uint64_t j) const;         // j in [1, W]
    const BitWord& codeword_of(const BitWord& w) const;
    BitWord index_word(uint64_t j) const { return BitWord::from_int(j, rho_n_); }

    /// Copy with row j replaced by z.
    InnerCodebook replaced(uint64_t j, const BitWord& z) const;

    /// max over y of |{j : d(codeword(j), y) <= pn}|, counting repeated rows
    /// per index. Exhaustive over y (n <= 24 guard); switches to enumerating
    /// balls around the rows when that is the smaller job.
    uint64_t max_list_size(int pn) const;
    bool is_list_decodable(uint64_t L, int pn) const { return max_list_size(pn) <= L; }

    /// One-sided sampled check: a returned y certifies |list(y)| > L; nullopt
    /// proves nothing.
    std::optional<BitWord> sampled_list_violation(uint64_t L, int pn, uint64_t samples, Rng& rng) const;

private:
    int n_ = 0;
    int rho_n_ = 0;
    std::vector<BitWord> rows_;
};

/// Injective map [M] -> {0,1}^rho_n.
class OuterCodebook {
public:
    /// M distinct words sampled uniformly (without replacement), order shuffled.
    static OuterCodebook sample(uint64_t M, int rho_n, Rng& rng);
    /// word(m) = the rho_n-bit word with label m; requires M <= 2^rho_n.
    static OuterCodebook identity(uint64_t M, int rho_n);
    static OuterCodebook from_words(int rho_n, std::vector<BitWord> words);

    uint64_t size() const { return words_.size(); }
    int rho_n() const { return rho_n_; }
    const BitWord& word(uint64_t m) const;  // m in [1, M]
    std::optional<uint64_t> message_of(const BitWord& w) const;

private:
    int rho_n_ = 0;
    std::vector<BitWord> words_;
    std::unordered_map<uint64_t, uint64_t> index_;  // int_label -> m
};

struct DecodeOutcome {
    std::vector<BitWord> inner_list;   // L_in: index words within pn of y
    std::vector<BitWord> refined_list; // L_out: the outer-consistent survivors
    std::optional<uint64_t> message;   // set iff |L_out| == 1
    bool ok() const { return message.has_value(); }
};

enum class CodeMode { Concatenated, PlainRandom };

std::string to_string(CodeMode m);
CodeMode code_mode_from_string(const std::string& s);

/// Inner random codebook composed with an injective outer codebook. Plain
/// random mode stores the direct map [M] -> {0,1}^n as an identity outer code
/// over Rn-bit words so that both modes share one decode path.
class ConcatenatedCode {
public:
    static ConcatenatedCode concatenated(const SystemParams& params, uint64_t seed);
    static ConcatenatedCode plain_random(const SystemParams& params, uint64_t seed);
    static ConcatenatedCode from_parts(const SystemParams& params, CodeMode mode, uint64_t seed,
                                       OuterCodebook outer, InnerCodebook inner);

    const SystemParams& params() const { return params_; }
    CodeMode mode() const { return mode_; }
    uint64_t seed() const { return seed_; }
    const OuterCodebook& outer() const { return outer_; }
    const InnerCodebook& inner() const { return inner_; }
    uint64_t message_count() const { return outer_.size(); }

    const BitWord& encode(uint64_t m) const;  // m in [1, M]

    std::vector<BitWord> list_decode_inner(const BitWord& y, int pn) const;
    std::vector<BitWord> refine(std::span<const BitWord> inner_list) const;
    DecodeOutcome decode(const BitWord& y, int pn) const;
    DecodeOutcome decode(const BitWord& y) const { return decode(y, params_.pn_budget); }

    /// First i_max index words in the per-message order: ascending distance to
    /// y_m = encode(m) ^ e, ties by smaller integer label. The order is total,
    /// so the result is unique.
    std::vector<BitWord> nearest_words(uint64_t m, const BitWord& e, uint64_t i_max) const;

    /// Copy of this code with a different inner codebook (replacement studies).
    ConcatenatedCode with_inner(InnerCodebook inner) const;

    void write(std::ostream& os) const;
    static ConcatenatedCode read(std::istream& is, const SystemParams& params);

private:
    SystemParams params_;
    CodeMode mode_ = CodeMode::Concatenated;
    uint64_t seed_ = 0;
    OuterCodebook outer_;
    InnerCodebook inner_;
};

}  // namespace obschan
