#include "obschan/code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace obschan {

int floor_rate(double rate, int n) {
    return static_cast<int>(std::floor(rate * n + 1e-9));
}

SystemParams SystemParams::create(int n, double p, double r, int c, int s, double R, double rho,
                                  double delta0, double delta1, double eps_rho, double eps_R) {
    if (n < 1) throw UsageError("SystemParams: need n >= 1");
    if (!(p > 0 && p < 0.5)) throw UsageError("SystemParams: need 0 < p < 1/2");
    if (!(r >= 0 && r <= 1)) throw UsageError("SystemParams: need 0 <= r <= 1");
    if (c < 1 || s < 1) throw UsageError("SystemParams: need c >= 1, s >= 1");
    if (!(R > 0 && rho > 0 && R <= rho && rho < 1))
        throw UsageError("SystemParams: need 0 < R <= rho < 1");
    if (delta0 < 0 || delta1 < 0 || eps_rho < 0 || eps_R < 0)
        throw UsageError("SystemParams: slack terms must be >= 0");
    SystemParams sp;
    sp.n = n;
    sp.p = p;
    sp.r = r;
    sp.c = c;
    sp.s = s;
    sp.R = R;
    sp.rho = rho;
    sp.delta0 = delta0;
    sp.delta1 = delta1;
    sp.eps_rho = eps_rho;
    sp.eps_R = eps_R;
    sp.Rn = floor_rate(R, n);
    sp.rho_n = floor_rate(rho, n);
    sp.obs_width = floor_rate(r, n);
    sp.pn_budget = floor_rate(p, n);
    if (sp.Rn < 1) throw UsageError("SystemParams: floor(R*n) must be >= 1");
    if (sp.rho_n < sp.Rn) throw UsageError("SystemParams: floor(rho*n) must be >= floor(R*n)");
    if (sp.rho_n > 62) throw CapacityError("SystemParams: floor(rho*n) must be <= 62");
    sp.M = 1ull << sp.Rn;
    sp.W = 1ull << sp.rho_n;
    return sp;
}

InnerCodebook InnerCodebook::sample(int n, int rho_n, Rng& rng) {
    if (rho_n < 0 || rho_n > 26) throw CapacityError("InnerCodebook::sample: rho_n must be <= 26");
    if (n < 1) throw UsageError("InnerCodebook::sample: need n >= 1");
    std::vector<BitWord> rows;
    uint64_t W = 1ull << rho_n;
    rows.reserve(W);
    for (uint64_t j = 0; j < W; ++j) rows.push_back(sample_uniform(n, rng));
    return from_rows(n, rho_n, std::move(rows));
}

InnerCodebook InnerCodebook::from_rows(int n, int rho_n, std::vector<BitWord> rows) {
    if (rows.size() != (1ull << rho_n)) throw UsageError("InnerCodebook: need exactly 2^rho_n rows");
    for (const auto& row : rows)
        if (row.length() != n) throw UsageError("InnerCodebook: row length mismatch");
    InnerCodebook cb;
    cb.n_ = n;
    cb.rho_n_ = rho_n;
    cb.rows_ = std::move(rows);
    return cb;
}

const BitWord& InnerCodebook::codeword(uint64_t j) const {
    if (j < 1 || j > rows_.size()) throw UsageError("InnerCodebook::codeword: index out of [1, W]");
    return rows_[j - 1];
}

const BitWord& InnerCodebook::codeword_of(const BitWord& w) const {
    if (w.length() != rho_n_) throw UsageError("InnerCodebook::codeword_of: index word length mismatch");
    return rows_[w.int_label() - 1];
}

InnerCodebook InnerCodebook::replaced(uint64_t j, const BitWord& z) const {
    if (j < 1 || j > rows_.size()) throw UsageError("InnerCodebook::replaced: index out of [1, W]");
    if (z.length() != n_) throw UsageError("InnerCodebook::replaced: replacement length mismatch");
    InnerCodebook cb = *this;
    cb.rows_[j - 1] = z;
    return cb;
}

uint64_t InnerCodebook::max_list_size(int pn) const {
    if (n_ > 24) throw CapacityError("InnerCodebook::max_list_size: exhaustive check needs n <= 24");
    if (pn < 0 || pn > n_) throw UsageError("InnerCodebook::max_list_size: bad radius");
    uint64_t W = rows_.size();
    BigInt ball = ball_volume(n_, pn);
    // Either scan all y, or collect the balls around the rows and take the
    // deepest overlap; both compute the same maximum.
    if (BigInt(W) * ball <= (BigInt(1) << n_)) {
        std::vector<uint64_t> hits;
        hits.reserve((BigInt(W) * ball).convert_to<size_t>());
        std::vector<uint64_t> masks;
        BallMaskEnumerator en(n_, pn);
        while (auto m = en.next()) masks.push_back(*m);
        for (const auto& row : rows_) {
            uint64_t base = row.low_mask();
            for (uint64_t m : masks) hits.push_back(base ^ m);
        }
        std::sort(hits.begin(), hits.end());
        uint64_t best = 0, run = 0;
        for (size_t i = 0; i < hits.size(); ++i) {
            run = (i > 0 && hits[i] == hits[i - 1]) ? run + 1 : 1;
            best = std::max(best, run);
        }
        return best;
    }
    std::vector<uint64_t> packed;
    packed.reserve(W);
    for (const auto& row : rows_) packed.push_back(row.low_mask());
    uint64_t best = 0;
    uint64_t total = 1ull << n_;
    for (uint64_t y = 0; y < total; ++y) {
        uint64_t count = 0;
        for (uint64_t rowv : packed)
            if (std::popcount(rowv ^ y) <= pn) ++count;
        best = std::max(best, count);
    }
    return best;
}

std::optional<BitWord> InnerCodebook::sampled_list_violation(uint64_t L, int pn, uint64_t samples,
                                                             Rng& rng) const {
    for (uint64_t t = 0; t < samples; ++t) {
        BitWord y = sample_uniform(n_, rng);
        uint64_t count = 0;
        for (const auto& row : rows_)
            if (hamming_distance(row, y) <= pn) ++count;
        if (count > L) return y;
    }
    return std::nullopt;
}

OuterCodebook OuterCodebook::sample(uint64_t M, int rho_n, Rng& rng) {
    if (rho_n < 1 || rho_n > 62) throw CapacityError("OuterCodebook::sample: rho_n must be in [1, 62]");
    uint64_t W = 1ull << rho_n;
    if (M < 1 || M > W) throw UsageError("OuterCodebook::sample: need 1 <= M <= 2^rho_n");
    // Floyd's sampling gives M distinct labels; the shuffle makes the m -> word
    // assignment itself uniform.
    std::unordered_set<uint64_t> chosen;
    std::vector<uint64_t> picks;
    picks.reserve(M);
    for (uint64_t i = W - M; i < W; ++i) {
        uint64_t t = rng.below(i + 1);
        if (chosen.insert(t).second)
            picks.push_back(t);
        else {
            chosen.insert(i);
            picks.push_back(i);
        }
    }
    for (uint64_t i = M; i-- > 1;) std::swap(picks[i], picks[rng.below(i + 1)]);
    std::vector<BitWord> words;
    words.reserve(M);
    for (uint64_t v : picks) words.push_back(BitWord::from_int(v + 1, rho_n));
    return from_words(rho_n, std::move(words));
}

OuterCodebook OuterCodebook::identity(uint64_t M, int rho_n) {
    if (rho_n < 1 || rho_n > 62) throw CapacityError("OuterCodebook::identity: rho_n must be in [1, 62]");
    if (M < 1 || M > (1ull << rho_n)) throw UsageError("OuterCodebook::identity: need 1 <= M <= 2^rho_n");
    std::vector<BitWord> words;
    words.reserve(M);
    for (uint64_t m = 1; m <= M; ++m) words.push_back(BitWord::from_int(m, rho_n));
    return from_words(rho_n, std::move(words));
}

OuterCodebook OuterCodebook::from_words(int rho_n, std::vector<BitWord> words) {
    OuterCodebook cb;
    cb.rho_n_ = rho_n;
    cb.words_ = std::move(words);
    for (uint64_t m = 1; m <= cb.words_.size(); ++m) {
        const BitWord& w = cb.words_[m - 1];
        if (w.length() != rho_n) throw UsageError("OuterCodebook: word length mismatch");
        if (!cb.index_.emplace(w.int_label(), m).second)
            throw UsageError("OuterCodebook: repeated word breaks injectivity");
    }
    return cb;
}

const BitWord& OuterCodebook::word(uint64_t m) const {
    if (m < 1 || m > words_.size()) throw UsageError("OuterCodebook::word: message out of [1, M]");
    return words_[m - 1];
}

std::optional<uint64_t> OuterCodebook::message_of(const BitWord& w) const {
    if (w.length() != rho_n_) return std::nullopt;
    auto it = index_.find(w.int_label());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string to_string(CodeMode m) {
    return m == CodeMode::Concatenated ? "concat" : "plain";
}

CodeMode code_mode_from_string(const std::string& s) {
    if (s == "concat") return CodeMode::Concatenated;
    if (s == "plain") return CodeMode::PlainRandom;
    throw UsageError("unknown code mode '" + s + "'");
}

ConcatenatedCode ConcatenatedCode::concatenated(const SystemParams& params, uint64_t seed) {
    Rng rng(seed);
    OuterCodebook outer = OuterCodebook::sample(params.M, params.rho_n, rng);
    InnerCodebook inner = InnerCodebook::sample(params.n, params.rho_n, rng);
    return from_parts(params, CodeMode::Concatenated, seed, std::move(outer), std::move(inner));
}

ConcatenatedCode ConcatenatedCode::plain_random(const SystemParams& params, uint64_t seed) {
    // Direct i.i.d. map [M] -> {0,1}^n, decoded through the shared path by
    // widening it to an identity outer code over Rn-bit index words.
    Rng rng(seed);
    InnerCodebook inner = InnerCodebook::sample(params.n, params.Rn, rng);
    OuterCodebook outer = OuterCodebook::identity(params.M, params.Rn);
    return from_parts(params, CodeMode::PlainRandom, seed, std::move(outer), std::move(inner));
}

ConcatenatedCode ConcatenatedCode::from_parts(const SystemParams& params, CodeMode mode,
                                              uint64_t seed, OuterCodebook outer,
                                              InnerCodebook inner) {
    if (inner.n() != params.n) throw UsageError("ConcatenatedCode: inner length != n");
    if (outer.rho_n() != inner.rho_n())
        throw UsageError("ConcatenatedCode: outer word length != inner index length");
    // Plain random mode stores the direct map through an identity outer code
    // over Rn-bit words, so its expected index width differs from concat mode.
    int want_rho = (mode == CodeMode::PlainRandom) ? params.Rn : params.rho_n;
    if (inner.rho_n() != want_rho)
        throw UsageError("ConcatenatedCode: inner index width disagrees with the mode");
    if (outer.size() != params.M) throw UsageError("ConcatenatedCode: outer size != M");
    ConcatenatedCode code;
    code.params_ = params;
    code.mode_ = mode;
    code.seed_ = seed;
    code.outer_ = std::move(outer);
    code.inner_ = std::move(inner);
    return code;
}

const BitWord& ConcatenatedCode::encode(uint64_t m) const {
    return inner_.codeword_of(outer_.word(m));
}

std::vector<BitWord> ConcatenatedCode::list_decode_inner(const BitWord& y, int pn) const {
    if (y.length() != params_.n) throw UsageError("list_decode_inner: received word length mismatch");
    if (pn < 0) throw UsageError("list_decode_inner: negative radius");
    std::vector<BitWord> out;
    uint64_t W = inner_.size();
    for (uint64_t j = 1; j <= W; ++j)
        if (hamming_distance(inner_.codeword(j), y) <= pn) out.push_back(inner_.index_word(j));
    return out;
}

std::vector<BitWord> ConcatenatedCode::refine(std::span<const BitWord> inner_list) const {
    std::vector<BitWord> out;
    for (const auto& w : inner_list)
        if (outer_.message_of(w)) out.push_back(w);
    return out;
}

DecodeOutcome ConcatenatedCode::decode(const BitWord& y, int pn) const {
    DecodeOutcome out;
    out.inner_list = list_decode_inner(y, pn);
    out.refined_list = refine(out.inner_list);
    if (out.refined_list.size() == 1) out.message = outer_.message_of(out.refined_list.front());
    return out;
}

std::vector<BitWord> ConcatenatedCode::nearest_words(uint64_t m, const BitWord& e,
                                                     uint64_t i_max) const {
    if (e.length() != params_.n) throw UsageError("nearest_words: error length mismatch");
    if (e.weight() > params_.pn_budget) throw UsageError("nearest_words: error weight over budget");
    uint64_t W = inner_.size();
    if (i_max < 1 || i_max > W) throw UsageError("nearest_words: need 1 <= i_max <= W");
    BitWord y = encode(m) ^ e;
    std::vector<std::pair<int, uint64_t>> ranked;  // (distance, index j); j orders ties
    ranked.reserve(W);
    for (uint64_t j = 1; j <= W; ++j)
        ranked.emplace_back(hamming_distance(inner_.codeword(j), y), j);
    if (i_max < W)
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<ptrdiff_t>(i_max),
                          ranked.end());
    else
        std::sort(ranked.begin(), ranked.end());
    std::vector<BitWord> out;
    out.reserve(i_max);
    for (uint64_t i = 0; i < i_max; ++i) out.push_back(inner_.index_word(ranked[i].second));
    return out;
}

ConcatenatedCode ConcatenatedCode::with_inner(InnerCodebook inner) const {
    ConcatenatedCode code = *this;
    if (inner.n() != params_.n || inner.rho_n() != inner_.rho_n())
        throw UsageError("with_inner: shape mismatch");
    code.inner_ = std::move(inner);
    return code;
}

void ConcatenatedCode::write(std::ostream& os) const {
    os << "codebook n=" << params_.n << " rho_n=" << inner_.rho_n() << " R_n=" << params_.Rn
       << " mode=" << to_string(mode_) << " seed=" << seed_ << "\n";
    for (uint64_t j = 1; j <= inner_.size(); ++j) os << inner_.codeword(j).to_string() << "\n";
    for (uint64_t m = 1; m <= outer_.size(); ++m)
        os << "m " << m << " -> " << outer_.word(m).to_string() << "\n";
}

ConcatenatedCode ConcatenatedCode::read(std::istream& is, const SystemParams& params) {
    std::string line;
    if (!std::getline(is, line)) throw UsageError("codebook file: missing header");
    int n = -1, rho_n = -1, Rn = -1;
    std::string mode_s;
    uint64_t seed = 0;
    {
        std::istringstream hs(line);
        std::string tag;
        hs >> tag;
        if (tag != "codebook") throw UsageError("codebook file: bad header");
        std::string kv;
        while (hs >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("codebook file: bad header field '" + kv + "'");
            std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "n")
                n = std::stoi(val);
            else if (key == "rho_n")
                rho_n = std::stoi(val);
            else if (key == "R_n")
                Rn = std::stoi(val);
            else if (key == "mode")
                mode_s = val;
            else if (key == "seed")
                seed = std::stoull(val);
            else
                throw UsageError("codebook file: unknown header field '" + key + "'");
        }
    }
    if (n != params.n || Rn != params.Rn)
        throw UsageError("codebook file: header disagrees with parameters");
    CodeMode mode = code_mode_from_string(mode_s);
    if (rho_n < 1 || rho_n > 26) throw CapacityError("codebook file: rho_n out of range");
    uint64_t W = 1ull << rho_n;
    std::vector<BitWord> rows;
    rows.reserve(W);
    for (uint64_t j = 0; j < W; ++j) {
        if (!std::getline(is, line)) throw UsageError("codebook file: truncated inner rows");
        rows.push_back(BitWord::from_string(line));
        if (rows.back().length() != n) throw UsageError("codebook file: row length mismatch");
    }
    std::vector<BitWord> words(params.M);
    std::vector<bool> seen(params.M, false);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag, arrow, bits, extra;
        uint64_t m = 0;
        ls >> tag >> m >> arrow >> bits;
        if (tag != "m" || arrow != "->" || bits.empty() || (ls >> extra) || m < 1 || m > params.M)
            throw UsageError("codebook file: bad outer line '" + line + "'");
        if (seen[m - 1]) throw UsageError("codebook file: duplicate outer entry");
        seen[m - 1] = true;
        words[m - 1] = BitWord::from_string(bits);
    }
    for (bool b : seen)
        if (!b) throw UsageError("codebook file: missing outer entries");
    return from_parts(params, mode, seed, OuterCodebook::from_words(rho_n, std::move(words)),
                      InnerCodebook::from_rows(n, rho_n, std::move(rows)));
}

}  // namespace obschan
