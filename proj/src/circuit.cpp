#include "obschan/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>
#include <sstream>

namespace obschan {

namespace {

bool valid_id(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

/// "x<k>" with digits only after the x.
std::optional<int> input_ref(std::string_view tok) {
    if (tok.size() < 2 || tok[0] != 'x') return std::nullopt;
    int k = 0;
    for (size_t i = 1; i < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
        k = k * 10 + (tok[i] - '0');
        if (k > 1'000'000) return std::nullopt;
    }
    return k;
}

[[noreturn]] void syntax_error(int line, const std::string& what) {
    throw UsageError("netlist syntax error (line " + std::to_string(line) + "): " + what);
}

std::string operand_text(const Circuit& c, int32_t ref) {
    if (ref == OPERAND_CONST0) return "const0";
    if (ref == OPERAND_CONST1) return "const1";
    if (ref < c.n_inputs) return "x" + std::to_string(ref + 1);
    return c.gates[static_cast<size_t>(ref - c.n_inputs)].id;
}

uint8_t apply_tt(uint8_t tt, bool l, bool r) {
    return (tt >> ((l ? 2 : 0) | (r ? 1 : 0))) & 1;
}

}  // namespace

BitWord Circuit::evaluate(const BitWord& x) const {
    if (x.length() != n_inputs) throw UsageError("Circuit::evaluate: input width mismatch");
    std::vector<uint8_t> val(static_cast<size_t>(size()));
    for (int j = 0; j < n_inputs; ++j) val[static_cast<size_t>(j)] = x.get(j + 1);
    auto ref_val = [&](int32_t ref) -> uint8_t {
        if (ref == OPERAND_CONST0) return 0;
        if (ref == OPERAND_CONST1) return 1;
        return val[static_cast<size_t>(ref)];
    };
    for (size_t g = 0; g < gates.size(); ++g)
        val[static_cast<size_t>(n_inputs) + g] =
            apply_tt(gates[g].tt, ref_val(gates[g].left), ref_val(gates[g].right));
    BitWord out(output_width());
    for (size_t t = 0; t < outputs.size(); ++t)
        if (ref_val(outputs[t])) out.set(static_cast<int>(t) + 1, true);
    return out;
}

uint64_t Circuit::evaluate_mask(uint64_t xmask) const {
    std::vector<uint8_t> val(static_cast<size_t>(size()));
    for (int j = 0; j < n_inputs; ++j) val[static_cast<size_t>(j)] = (xmask >> j) & 1ull;
    auto ref_val = [&](int32_t ref) -> uint8_t {
        if (ref == OPERAND_CONST0) return 0;
        if (ref == OPERAND_CONST1) return 1;
        return val[static_cast<size_t>(ref)];
    };
    for (size_t g = 0; g < gates.size(); ++g)
        val[static_cast<size_t>(n_inputs) + g] =
            apply_tt(gates[g].tt, ref_val(gates[g].left), ref_val(gates[g].right));
    uint64_t out = 0;
    for (size_t t = 0; t < outputs.size(); ++t)
        if (ref_val(outputs[t])) out |= 1ull << t;
    return out;
}

std::string Circuit::serialize() const {
    std::ostringstream os;
    os << "inputs " << n_inputs << "\n";
    for (const auto& g : gates) {
        os << "gate " << g.id << " tt:";
        for (int k = 0; k < 4; ++k) os << ((g.tt >> k) & 1 ? '1' : '0');
        os << ' ' << operand_text(*this, g.left) << ' ' << operand_text(*this, g.right) << "\n";
    }
    os << "out";
    for (int32_t ref : outputs) os << ' ' << operand_text(*this, ref);
    os << "\n";
    return os.str();
}

Circuit Circuit::parse(std::string_view text) {
    struct RawGate {
        std::string id;
        uint8_t tt = 0;
        std::string left, right;
        int line = 0;
    };
    int n_inputs = -1;
    std::vector<RawGate> raw;
    std::vector<std::string> out_tokens;
    int out_line = 0;
    std::unordered_map<std::string, size_t> by_id;

    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "inputs") {
            if (n_inputs >= 0) syntax_error(lineno, "duplicate 'inputs' directive");
            if (tok.size() != 2) syntax_error(lineno, "expected 'inputs <n>'");
            try {
                n_inputs = std::stoi(tok[1]);
            } catch (...) {
                syntax_error(lineno, "bad input count '" + tok[1] + "'");
            }
            if (n_inputs < 1) syntax_error(lineno, "input count must be >= 1");
        } else if (tok[0] == "gate") {
            if (n_inputs < 0) syntax_error(lineno, "'gate' before 'inputs'");
            if (tok.size() != 5) syntax_error(lineno, "expected 'gate <id> tt:<4bits> <op> <op>'");
            RawGate g;
            g.id = tok[1];
            g.line = lineno;
            if (!valid_id(g.id)) syntax_error(lineno, "bad gate id '" + g.id + "'");
            if (g.id == "const0" || g.id == "const1" || input_ref(g.id))
                syntax_error(lineno, "reserved node id '" + g.id + "'");
            if (tok[2].size() != 7 || tok[2].substr(0, 3) != "tt:")
                syntax_error(lineno, "expected tt:<4bits>");
            for (int k = 0; k < 4; ++k) {
                char c = tok[2][static_cast<size_t>(3 + k)];
                if (c != '0' && c != '1') syntax_error(lineno, "truth table bits must be 0/1");
                if (c == '1') g.tt |= static_cast<uint8_t>(1u << k);
            }
            g.left = tok[3];
            g.right = tok[4];
            if (by_id.count(g.id))
                throw UsageError("netlist error (line " + std::to_string(lineno) +
                                 "): duplicate node id '" + g.id + "'");
            by_id[g.id] = raw.size();
            raw.push_back(std::move(g));
        } else if (tok[0] == "out") {
            if (n_inputs < 0) syntax_error(lineno, "'out' before 'inputs'");
            if (out_line) syntax_error(lineno, "duplicate 'out' directive");
            if (tok.size() < 2) syntax_error(lineno, "expected 'out <operand> [...]'");
            out_tokens.assign(tok.begin() + 1, tok.end());
            out_line = lineno;
        } else {
            syntax_error(lineno, "unknown directive '" + tok[0] + "'");
        }
    }
    if (n_inputs < 0) throw UsageError("netlist error: missing 'inputs' directive");
    if (!out_line) throw UsageError("netlist error: missing 'out' directive");

    size_t G = raw.size();
    std::vector<std::vector<size_t>> users(G);
    std::vector<int> pending(G, 0);
    auto gate_dep = [&](const std::string& tok, int line) -> std::optional<size_t> {
        if (tok == "const0" || tok == "const1") return std::nullopt;
        if (auto k = input_ref(tok)) {
            if (*k < 1 || *k > n_inputs)
                throw UsageError("netlist error (line " + std::to_string(line) +
                                 "): dangling node reference '" + tok + "'");
            return std::nullopt;
        }
        auto it = by_id.find(tok);
        if (it == by_id.end())
            throw UsageError("netlist error (line " + std::to_string(line) +
                             "): dangling node reference '" + tok + "'");
        return it->second;
    };
    for (size_t g = 0; g < G; ++g) {
        for (const std::string* t : {&raw[g].left, &raw[g].right}) {
            if (auto dep = gate_dep(*t, raw[g].line)) {
                users[*dep].push_back(g);
                ++pending[g];
            }
        }
    }
    // Kahn's algorithm, always taking the earliest-declared ready gate: a file
    // whose gates are already topologically ordered parses back in file order,
    // which keeps parse(serialize(c)) == c.
    std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
    for (size_t g = 0; g < G; ++g)
        if (!pending[g]) ready.push(g);
    std::vector<size_t> order;
    order.reserve(G);
    while (!ready.empty()) {
        size_t g = ready.top();
        ready.pop();
        order.push_back(g);
        for (size_t u : users[g])
            if (--pending[u] == 0) ready.push(u);
    }
    if (order.size() != G) {
        for (size_t g = 0; g < G; ++g)
            if (pending[g])
                throw UsageError("netlist error: cycle detected involving gate '" + raw[g].id + "'");
    }

    Circuit c;
    c.n_inputs = n_inputs;
    std::unordered_map<std::string, int32_t> node_ref;
    auto resolve = [&](const std::string& tok, int line) -> int32_t {
        if (tok == "const0") return OPERAND_CONST0;
        if (tok == "const1") return OPERAND_CONST1;
        if (auto k = input_ref(tok)) {
            if (*k < 1 || *k > n_inputs)
                throw UsageError("netlist error (line " + std::to_string(line) +
                                 "): dangling node reference '" + tok + "'");
            return *k - 1;
        }
        auto it = node_ref.find(tok);
        if (it == node_ref.end())
            throw UsageError("netlist error (line " + std::to_string(line) +
                             "): dangling node reference '" + tok + "'");
        return it->second;
    };
    for (size_t pos = 0; pos < order.size(); ++pos) {
        const RawGate& g = raw[order[pos]];
        Circuit::Gate out;
        out.id = g.id;
        out.tt = g.tt;
        out.left = resolve(g.left, g.line);
        out.right = resolve(g.right, g.line);
        node_ref[g.id] = n_inputs + static_cast<int32_t>(pos);
        c.gates.push_back(std::move(out));
    }
    for (const auto& t : out_tokens) c.outputs.push_back(resolve(t, out_line));
    return c;
}

Circuit Circuit::projection(int n, std::span<const int> indices) {
    if (n < 1) throw UsageError("Circuit::projection: need n >= 1");
    Circuit c;
    c.n_inputs = n;
    for (int j : indices) {
        if (j < 1 || j > n) throw UsageError("Circuit::projection: index out of [1, n]");
        c.outputs.push_back(j - 1);
    }
    return c;
}

Circuit Circuit::constant(int n, int width) {
    if (n < 1 || width < 0) throw UsageError("Circuit::constant: bad dimensions");
    Circuit c;
    c.n_inputs = n;
    c.outputs.assign(static_cast<size_t>(width), OPERAND_CONST0);
    return c;
}

Circuit Circuit::identity(int n) {
    std::vector<int> idx(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) idx[static_cast<size_t>(j)] = j + 1;
    return projection(n, idx);
}

Circuit Circuit::random(int n, int n_gates, int width, Rng& rng) {
    if (n < 1 || n_gates < 0 || width < 0) throw UsageError("Circuit::random: bad dimensions");
    Circuit c;
    c.n_inputs = n;
    auto pick_operand = [&](int gates_so_far) -> int32_t {
        uint64_t pool = static_cast<uint64_t>(n + gates_so_far) + 2;
        uint64_t k = rng.below(pool);
        if (k == pool - 2) return OPERAND_CONST0;
        if (k == pool - 1) return OPERAND_CONST1;
        return static_cast<int32_t>(k);
    };
    for (int g = 0; g < n_gates; ++g) {
        Circuit::Gate gate;
        gate.id = "g" + std::to_string(g + 1);
        gate.tt = static_cast<uint8_t>(rng.below(16));
        gate.left = pick_operand(g);
        gate.right = pick_operand(g);
        c.gates.push_back(std::move(gate));
    }
    for (int t = 0; t < width; ++t) c.outputs.push_back(pick_operand(n_gates));
    return c;
}

std::optional<std::vector<int>> Circuit::projection_indices() const {
    if (!gates.empty()) return std::nullopt;
    std::vector<int> idx;
    for (int32_t ref : outputs) {
        if (ref < 0 || ref >= n_inputs) return std::nullopt;
        idx.push_back(ref + 1);
    }
    return idx;
}

BudgetReport validate_budget(const Circuit& f, double r, int c, int s) {
    if (r < 0 || r > 1) throw UsageError("validate_budget: r must be in [0, 1]");
    if (c < 1 || s < 1) throw UsageError("validate_budget: need c >= 1, s >= 1");
    BudgetReport rep;
    rep.width = f.output_width();
    rep.expected_width = static_cast<int>(std::floor(r * f.n_inputs + 1e-9));
    rep.width_ok = rep.width == rep.expected_width;
    rep.size = f.size();
    double budget = static_cast<double>(c) * std::pow(static_cast<double>(f.n_inputs), s);
    rep.size_budget = static_cast<long long>(budget);
    rep.size_ok = static_cast<double>(rep.size) <= budget;
    rep.ok = rep.width_ok && rep.size_ok;
    return rep;
}

ObservationPartition::ObservationPartition(const Circuit& f) {
    n_ = f.n_inputs;
    width_ = f.output_width();
    if (n_ > 24) throw CapacityError("ObservationPartition: n_inputs must be <= 24");
    if (width_ > 63) throw CapacityError("ObservationPartition: output width must be <= 63");
    uint64_t total = 1ull << n_;
    cell_of_x_.resize(total);
    for (uint64_t x = 0; x < total; ++x) {
        uint64_t psi = f.evaluate_mask(x);
        uint64_t label = psi + 1;
        auto [it, inserted] = cell_by_psi_.try_emplace(label, cell_count());
        if (inserted) {
            cell_psi_.push_back(BitWord::from_mask(psi, width_));
            cell_size_.push_back(0);
        }
        cell_of_x_[x] = it->second;
        ++cell_size_[it->second];
    }
}

uint32_t ObservationPartition::cell_of(const BitWord& x) const {
    if (x.length() != n_) throw UsageError("ObservationPartition::cell_of: width mismatch");
    return cell_of_x_[x.low_mask()];
}

std::optional<uint32_t> ObservationPartition::cell_id(const BitWord& psi) const {
    if (psi.length() != width_) throw UsageError("ObservationPartition::cell_id: width mismatch");
    auto it = cell_by_psi_.find(psi.int_label());
    if (it == cell_by_psi_.end()) return std::nullopt;
    return it->second;
}

bool ObservationPartition::contains(const BitWord& psi, const BitWord& x) const {
    auto cell = cell_id(psi);
    if (!cell) return false;
    return cell_of(x) == *cell;
}

std::vector<uint64_t> ObservationPartition::cell_members(uint32_t cell) const {
    std::vector<uint64_t> out;
    for (uint64_t x = 0; x < cell_of_x_.size(); ++x)
        if (cell_of_x_[x] == cell) out.push_back(x);
    return out;
}

namespace {

uint8_t tt_combine(uint8_t tt, uint8_t fa, uint8_t fb, int points) {
    uint8_t out = 0;
    for (int p = 0; p < points; ++p) {
        bool l = (fa >> p) & 1;
        bool r = (fb >> p) & 1;
        if (apply_tt(tt, l, r)) out |= static_cast<uint8_t>(1u << p);
    }
    return out;
}

void enumerate_functions(std::vector<uint8_t>& pool, int depth, int budget, int points,
                         std::vector<bool>& realized) {
    for (uint8_t v : pool) realized[v] = true;
    if (depth == budget) return;
    size_t base = pool.size();
    for (size_t a = 0; a < base; ++a) {
        for (size_t b = 0; b < base; ++b) {
            for (int tt = 0; tt < 16; ++tt) {
                uint8_t v = tt_combine(static_cast<uint8_t>(tt), pool[a], pool[b], points);
                pool.push_back(v);
                enumerate_functions(pool, depth + 1, budget, points, realized);
                pool.pop_back();
            }
        }
    }
}

}  // namespace

uint64_t count_circuit_functions(int n, int gate_budget) {
    if (n < 1 || n > 3) throw CapacityError("count_circuit_functions: n must be in [1, 3]");
    if (gate_budget < 0 || gate_budget > 2)
        throw CapacityError("count_circuit_functions: gate_budget must be in [0, 2]");
    int points = 1 << n;
    std::vector<uint8_t> pool;
    for (int j = 0; j < n; ++j) {
        uint8_t f = 0;
        for (int x = 0; x < points; ++x)
            if ((x >> j) & 1) f |= static_cast<uint8_t>(1u << x);
        pool.push_back(f);
    }
    pool.push_back(0);                                            // const0
    pool.push_back(static_cast<uint8_t>((1u << points) - 1));     // const1
    std::vector<bool> realized(256, false);
    enumerate_functions(pool, 0, gate_budget, points, realized);
    uint64_t count = 0;
    for (int v = 0; v < (1 << points); ++v)
        if (realized[static_cast<size_t>(v)]) ++count;
    return count;
}

CircuitCountReport circuit_count_report(int n, int c, int s) {
    if (n < 1 || n > 3) throw CapacityError("circuit_count_report: n must be in [1, 3]");
    if (c < 1 || s < 0 || s > 10) throw UsageError("circuit_count_report: need c >= 1, s in [0, 10]");
    long long budget = c;
    for (int k = 0; k < s; ++k) budget *= n;
    if (budget > 2) throw CapacityError("circuit_count_report: budget c*n^s must be <= 2 for enumeration");
    CircuitCountReport rep;
    rep.realized = count_circuit_functions(n, static_cast<int>(budget));
    BigInt base = BigInt(16) * BigInt(n + budget + 1) * BigInt(n + budget + 1);
    rep.appendix_bound = boost::multiprecision::pow(base, static_cast<unsigned>(budget));
    rep.within_bound = BigInt(rep.realized) <= rep.appendix_bound;
    uint64_t e1 = 1, e2 = 1;
    for (int k = 0; k < s + 2; ++k) e1 *= static_cast<uint64_t>(n);
    for (int k = 0; k < s + 3; ++k) e2 *= static_cast<uint64_t>(n);
    rep.function_family_bound = BigInt(1) << e1;
    rep.observation_set_bound = BigInt(1) << e2;
    return rep;
}

}  // namespace obschan
