#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "obschan/bitword.hpp"
#include "obschan/common.hpp"

namespace obschan {

/// Operand reference inside a circuit: >= 0 is a node index (0..n-1 are the
/// inputs x1..xn, then gates in evaluation order); OPERAND_CONST0/1 are the
/// two free constant nodes, which do not count toward size.
constexpr int32_t OPERAND_CONST0 = -1;
constexpr int32_t OPERAND_CONST1 = -2;

/// DAG of 2-input boolean gates over inputs x1..xn plus free constants.
/// Gates are stored in a valid evaluation order (every operand precedes its
/// user). Truth tables are 4 bits with bit (l*2 + r) = output on left value l,
/// right value r, matching the textual form tt:<t00 t01 t10 t11>.
struct Circuit {
    struct Gate {
        std::string id;
        uint8_t tt = 0;
        int32_t left = OPERAND_CONST0;
        int32_t right = OPERAND_CONST0;
        bool operator==(const Gate&) const = default;
    };

    int n_inputs = 0;
    std::vector<Gate> gates;
    std::vector<int32_t> outputs;

    bool operator==(const Circuit&) const = default;

    /// Inputs and gates both count; the constants are free.
    int size() const { return n_inputs + static_cast<int>(gates.size()); }
    int output_width() const { return static_cast<int>(outputs.size()); }

    BitWord evaluate(const BitWord& x) const;

    /// Packed fast path: bit j-1 of xmask is x_j; bit t-1 of the result is
    /// output t. Requires n_inputs <= 64 and output_width <= 64.
    uint64_t evaluate_mask(uint64_t xmask) const;

    std::string serialize() const;
    static Circuit parse(std::string_view text);

    /// Width-|indices| projection x -> (x_{j1}, ..., x_{jk}); no gates.
    static Circuit projection(int n, std::span<const int> indices);

    /// Constant circuit: `width` outputs, all const0; no gates.
    static Circuit constant(int n, int width);

    /// Identity observation x -> x.
    static Circuit identity(int n);

    /// Random DAG with `n_gates` gates and `width` outputs (diagnostic inputs
    /// for partition and round-trip tests).
    static Circuit random(int n, int n_gates, int width, Rng& rng);

    /// If every output reads an input directly and there are no gates, the
    /// observed index list; otherwise nullopt.
    std::optional<std::vector<int>> projection_indices() const;
};

struct BudgetReport {
    bool ok = false;
    bool width_ok = false;
    bool size_ok = false;
    int width = 0;
    int expected_width = 0;
    int size = 0;
    long long size_budget = 0;
};

/// Width must equal floor(r * n_inputs); size (inputs + gates) at most c * n^s.
BudgetReport validate_budget(const Circuit& f, double r, int c, int s);

/// Partition of {0,1}^n by observation value. Input words are addressed by
/// label-1 (so word index k holds x with int_label(x) = k + 1).
class ObservationPartition {
public:
    ObservationPartition(const Circuit& f);  // n_inputs <= 24 guard

    int n() const { return n_; }
    int width() const { return width_; }
    uint32_t cell_count() const { return static_cast<uint32_t>(cell_psi_.size()); }

    uint32_t cell_of_x_index(uint64_t x_index) const { return cell_of_x_[x_index]; }
    uint32_t cell_of(const BitWord& x) const;
    std::optional<uint32_t> cell_id(const BitWord& psi) const;
    uint64_t cell_size(uint32_t cell) const { return cell_size_[cell]; }
    const BitWord& cell_psi(uint32_t cell) const { return cell_psi_[cell]; }

    /// 1{x in O_psi}; false when psi labels no cell.
    bool contains(const BitWord& psi, const BitWord& x) const;

    /// Input-word indices (label-1) of one cell, ascending.
    std::vector<uint64_t> cell_members(uint32_t cell) const;

private:
    int n_ = 0;
    int width_ = 0;
    std::vector<uint32_t> cell_of_x_;
    std::vector<BitWord> cell_psi_;
    std::vector<uint64_t> cell_size_;
    std::unordered_map<uint64_t, uint32_t> cell_by_psi_;  // psi label -> cell
};

inline ObservationPartition observation_partition(const Circuit& f) { return ObservationPartition(f); }

/// Distinct single-output functions over n inputs realizable with at most
/// gate_budget gates (any node, input, or constant may serve as the output).
/// Exhaustive; guarded to n <= 3, gate_budget <= 2.
uint64_t count_circuit_functions(int n, int gate_budget);

struct CircuitCountReport {
    uint64_t realized = 0;
    BigInt appendix_bound;        // (16 (n + B + 1)^2)^B with B = c * n^s
    bool within_bound = false;    // realized <= appendix_bound
    BigInt function_family_bound; // 2^(n^(s+2))
    BigInt observation_set_bound; // 2^(n^(s+3))
};

/// Exhaustive count at budget B = c * n^s (guarded as above) against the
/// counting-formula bound.
CircuitCountReport circuit_count_report(int n, int c, int s);

}  // namespace obschan
