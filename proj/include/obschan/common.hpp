#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace obschan {

inline constexpr const char* kVersion = "0.1.0";

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Caller violated an operation precondition (bad argument, mismatched lengths, ...).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An enumeration guard was exceeded; the message names the guard.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A hard internal cross-check failed (these indicate a bug, not bad input).
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seeded random stream. All draws go through next_u64/below so results are
/// reproducible across platforms (std::mt19937_64 output is specified by the
/// standard; the distributions in <random> are not).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(splitmix64(seed)) {}

    /// Independent stream derived from (seed, index); used for per-trial streams.
    static Rng substream(uint64_t seed, uint64_t index) {
        return Rng(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ull)));
    }

    uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, bound). Rejection sampling, no modulo bias.
    uint64_t below(uint64_t bound) {
        if (bound == 0) throw UsageError("Rng::below: bound must be positive");
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = eng_();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool coin() { return (eng_() & 1ull) != 0; }

private:
    std::mt19937_64 eng_;
};

/// Run fn(begin, end) over [0, total) split into contiguous chunks across up to
/// `threads` workers (0 = hardware concurrency). fn must be safe to run
/// concurrently on disjoint ranges.
template <class Fn>
void parallel_for(uint64_t total, int threads, Fn&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned k = threads > 0 ? static_cast<unsigned>(threads) : (hw ? hw : 1);
    if (k <= 1 || total < 2) {
        fn(uint64_t{0}, total);
        return;
    }
    if (k > total) k = static_cast<unsigned>(total);
    std::vector<std::thread> pool;
    pool.reserve(k);
    uint64_t chunk = (total + k - 1) / k;
    for (unsigned t = 0; t < k; ++t) {
        uint64_t begin = t * chunk;
        uint64_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace obschan
