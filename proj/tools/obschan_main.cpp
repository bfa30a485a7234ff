// obschan: adversarial-channel simulator with a budget-limited observer.
#include <cstdio>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "obschan/analysis.hpp"
#include "obschan/bounds.hpp"
#include "obschan/experiment.hpp"

namespace {

using namespace obschan;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + out_path + "'");
    out << text;
}

std::string hex64(uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// "# obschan <version> seed=<seed> config_hash=<hex>" comment line stamped on
/// top of every CSV so a file is traceable to its run.
std::string csv_meta(uint64_t seed, uint64_t hash) {
    return "# obschan " + std::string(kVersion) + " seed=" + std::to_string(seed) +
           " config_hash=" + hex64(hash) + "\n";
}

struct ConfigFlags {
    ExperimentConfig cfg;
    std::vector<std::string> config_files;
    std::string mode_text = "concat";
    std::map<std::string, CLI::Option*> opts;

    void attach(CLI::App* cmd, bool with_trials) {
        cmd->add_option("--config", config_files,
                        "JSON config file (repeatable; explicit flags override its values)");
        opts["n"] = cmd->add_option("-n,--n", cfg.n, "block length");
        opts["p"] = cmd->add_option("--p", cfg.p, "error fraction");
        opts["r"] = cmd->add_option("--r", cfg.r, "observation rate");
        opts["c"] = cmd->add_option("--c", cfg.c, "circuit size coefficient");
        opts["s"] = cmd->add_option("--s", cfg.s, "circuit size exponent");
        opts["R"] = cmd->add_option("--R", cfg.R, "message rate");
        opts["rho"] = cmd->add_option("--rho", cfg.rho, "inner rate");
        opts["delta0"] = cmd->add_option("--delta0", cfg.delta0, "typicality slack");
        opts["delta1"] = cmd->add_option("--delta1", cfg.delta1, "informative-observation slack");
        opts["eps_rho"] = cmd->add_option("--eps-rho", cfg.eps_rho, "inner rate slack");
        opts["eps_R"] = cmd->add_option("--eps-R", cfg.eps_R, "message rate slack");
        opts["mode"] = cmd->add_option("--mode", mode_text, "concat | plain")->capture_default_str();
        opts["strategy"] = cmd->add_option("--strategy", cfg.strategy, "adversary strategy spec")
                               ->capture_default_str();
        opts["seed"] = cmd->add_option("--seed", cfg.seed, "root seed")->capture_default_str();
        if (with_trials)
            opts["trials"] =
                cmd->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
    }

    bool passed(const char* key) const {
        auto it = opts.find(key);
        return it != opts.end() && it->second->count() > 0;
    }

    std::vector<ExperimentConfig> resolve() {
        cfg.mode = code_mode_from_string(mode_text);
        std::vector<ExperimentConfig> out;
        for (const std::string& path : config_files) {
            ExperimentConfig c = ExperimentConfig::from_json_text(read_file(path));
            if (passed("n")) c.n = cfg.n;
            if (passed("p")) c.p = cfg.p;
            if (passed("r")) c.r = cfg.r;
            if (passed("c")) c.c = cfg.c;
            if (passed("s")) c.s = cfg.s;
            if (passed("R")) c.R = cfg.R;
            if (passed("rho")) c.rho = cfg.rho;
            if (passed("delta0")) c.delta0 = cfg.delta0;
            if (passed("delta1")) c.delta1 = cfg.delta1;
            if (passed("eps_rho")) c.eps_rho = cfg.eps_rho;
            if (passed("eps_R")) c.eps_R = cfg.eps_R;
            if (passed("mode")) c.mode = cfg.mode;
            if (passed("strategy")) c.strategy = cfg.strategy;
            if (passed("seed")) c.seed = cfg.seed;
            if (passed("trials")) c.trials = cfg.trials;
            out.push_back(std::move(c));
        }
        if (out.empty()) out.push_back(cfg);
        return out;
    }
};

int cmd_simulate(ConfigFlags& flags, const std::string& out_path, const std::string& format,
                 int threads) {
    std::vector<ExperimentConfig> configs = flags.resolve();
    std::vector<ExperimentResult> results = sweep(configs, threads);
    std::ostringstream os;
    if (format == "json") {
        os << "{\n  \"_meta\": {\"tool\": \"obschan\", \"version\": \"" << kVersion
           << "\", \"seed\": " << configs.front().seed << ", \"config_hash\": \""
           << hex64(configs.front().config_hash()) << "\"},\n  \"results\": [\n";
        for (size_t i = 0; i < results.size(); ++i)
            os << results[i].to_json_text() << (i + 1 < results.size() ? ",\n" : "\n");
        os << "  ]\n}\n";
    } else {
        os << csv_meta(configs.front().seed, configs.front().config_hash());
        os << ExperimentResult::csv_header() << "\n";
        for (const ExperimentResult& res : results) os << res.csv_row() << "\n";
    }
    write_output(out_path, os.str());
    return 0;
}

int cmd_exact_pe(ConfigFlags& flags, const std::vector<std::string>& family_specs,
                 const std::string& out_path, const std::string& format) {
    std::vector<ExperimentConfig> configs = flags.resolve();
    std::ostringstream os;
    bool csv = format != "json";
    if (csv) {
        os << csv_meta(configs.front().seed, configs.front().config_hash());
        os << ExperimentResult::csv_header() << "\n";
    } else {
        os << "{\n  \"_meta\": {\"tool\": \"obschan\", \"version\": \"" << kVersion
           << "\", \"seed\": " << configs.front().seed << ", \"config_hash\": \""
           << hex64(configs.front().config_hash()) << "\"},\n  \"results\": [\n";
    }
    for (size_t ci = 0; ci < configs.size(); ++ci) {
        const ExperimentConfig& cfg = configs[ci];
        SystemParams sp = cfg.system();
        std::vector<Circuit> family;
        for (const std::string& spec : family_specs) {
            if (!spec.empty() && spec.front() == '@')
                family.push_back(Circuit::parse(read_file(spec.substr(1))));
            else
                for (Circuit& f : named_circuit_family(spec, sp)) family.push_back(std::move(f));
        }
        ExperimentResult res = run_exact_pe(cfg, family);
        if (csv)
            os << res.csv_row() << "\n";
        else
            os << res.to_json_text() << (ci + 1 < configs.size() ? ",\n" : "\n");
    }
    if (!csv) os << "  ]\n}\n";
    write_output(out_path, os.str());
    return 0;
}

SystemParams small_sweep_params() {
    // Small enough for the exhaustive replacement sweeps, large enough that
    // every quantity is nondegenerate: W = 8 rows, M = 4 messages, pn = 1.
    return SystemParams::create(6, 0.2, 0.5, 1, 2, 1.0 / 3, 0.5, 0.25, 0.05, 0.01, 0.01);
}

bool suite_claims(uint64_t seed, std::string& detail) {
    SystemParams sp = small_sweep_params();
    std::vector<int> idx;
    for (int j = 1; j <= sp.obs_width; ++j) idx.push_back(j);
    Circuit f = Circuit::projection(sp.n, idx);
    ObservationPartition partition(f);
    uint64_t checked = 0, violations = 0;
    for (uint64_t t = 0; t < 5; ++t) {
        Rng rng = Rng::substream(seed, t);
        ConcatenatedCode code = ConcatenatedCode::concatenated(sp, rng.next_u64());
        BitWord psi = f.evaluate(code.encode(1 + rng.below(sp.M)));
        BitWord e = sample_exact_weight(sp.n, sp.pn_budget, rng);
        std::vector<uint64_t> is = {1, 2};
        ClaimSweepResult res = verify_claims(code, partition, psi, e, is);
        for (int claim = 1; claim <= 4; ++claim) checked += res.checked[claim];
        violations += res.violations.size();
    }
    detail = std::to_string(checked) + " tuples, " + std::to_string(violations) + " violations";
    return violations == 0 && checked > 0;
}

bool suite_variation(uint64_t seed, std::string& detail) {
    SystemParams sp = small_sweep_params();
    std::vector<int> idx;
    for (int j = 1; j <= sp.obs_width; ++j) idx.push_back(j);
    Circuit f = Circuit::projection(sp.n, idx);
    ObservationPartition partition(f);
    std::deque<ConcatenatedCode> codes;
    std::vector<VariationInstance> instances;
    for (uint64_t t = 0; t < 3; ++t) {
        Rng rng = Rng::substream(seed, 100 + t);
        codes.push_back(ConcatenatedCode::concatenated(sp, rng.next_u64()));
        VariationInstance inst;
        inst.code = &codes.back();
        inst.partition = &partition;
        inst.psi = f.evaluate(codes.back().encode(1 + rng.below(sp.M)));
        inst.e = sample_exact_weight(sp.n, sp.pn_budget, rng);
        instances.push_back(inst);
    }
    // A second family where the typicality predicate can actually hold: the
    // constant circuit's cell is the whole cube, and inner rows pairwise at
    // distance >= 4 make the codebook [1, 1] list decodable.
    SystemParams wide =
        SystemParams::create(8, 0.125, 0.25, 1, 2, 0.25, 0.375, 0.25, 0.05, 0.01, 0.01);
    Circuit cf = Circuit::constant(wide.n, wide.obs_width);
    ObservationPartition cpart(cf);
    {
        std::vector<std::string> rows = {
            "00000000", "11110000", "00111100", "11001100",
            "00001111", "11111111", "00110011", "11000011",
        };
        std::vector<BitWord> words;
        for (const auto& s : rows) words.push_back(BitWord::from_string(s));
        Rng rng = Rng::substream(seed, 200);
        OuterCodebook outer = OuterCodebook::sample(wide.M, wide.rho_n, rng);
        codes.push_back(ConcatenatedCode::from_parts(wide, CodeMode::Concatenated, seed,
                                                     std::move(outer),
                                                     InnerCodebook::from_rows(8, 3, std::move(words))));
        VariationInstance inst;
        inst.code = &codes.back();
        inst.partition = &cpart;
        inst.psi = BitWord(wide.obs_width);
        inst.e = sample_exact_weight(wide.n, wide.pn_budget, rng);
        instances.push_back(inst);
    }
    for (uint64_t t = 0; t < 2; ++t) {
        Rng rng = Rng::substream(seed, 300 + t);
        codes.push_back(ConcatenatedCode::concatenated(wide, rng.next_u64()));
        VariationInstance inst;
        inst.code = &codes.back();
        inst.partition = &cpart;
        inst.psi = BitWord(wide.obs_width);
        inst.e = sample_exact_weight(wide.n, wide.pn_budget, rng);
        instances.push_back(inst);
    }
    VariationBoundsReport rep = verify_variation_bounds(instances, 1);
    detail = std::to_string(rep.sum_checked) + " sum checks (" +
             std::to_string(rep.sum_violations) + " bad), " +
             std::to_string(rep.lipschitz_checked) + " Lipschitz checks (" +
             std::to_string(rep.lipschitz_violations) + " bad), " +
             std::to_string(rep.skipped_atypical) + " skipped";
    return rep.sum_violations == 0 && rep.lipschitz_violations == 0 && rep.sum_checked > 0 &&
           rep.lipschitz_checked > 0;
}

bool suite_binomial(std::string& detail) {
    std::vector<int> ns = {16};
    std::vector<int> Rns = {8, 10};
    std::vector<int> shifts = {2, 3};
    std::vector<double> sigmas = {2, 3};
    auto rows = binomial_concentration_check(ns, Rns, shifts, sigmas);
    uint64_t bad = 0;
    for (const auto& row : rows)
        if (!row.pass) ++bad;
    detail = std::to_string(rows.size()) + " grid points, " + std::to_string(bad) + " failures";
    return bad == 0 && !rows.empty();
}

bool suite_listdecode(uint64_t seed, std::string& detail) {
    int n = 20, rho_n = 6, pn = 2;
    uint64_t L = static_cast<uint64_t>(n) * n;
    uint64_t bad = 0, total = 50;
    for (uint64_t t = 0; t < total; ++t) {
        Rng rng = Rng::substream(seed, 200 + t);
        InnerCodebook inner = InnerCodebook::sample(n, rho_n, rng);
        if (!inner.is_list_decodable(L, pn)) ++bad;
    }
    detail = std::to_string(total) + " codebooks at L = " + std::to_string(L) + ", " +
             std::to_string(bad) + " over";
    return bad == 0;
}

bool suite_identity(uint64_t seed, std::string& detail) {
    SystemParams sp = small_sweep_params();
    std::vector<int> idx;
    for (int j = 1; j <= sp.obs_width; ++j) idx.push_back(j);
    Circuit f = Circuit::projection(sp.n, idx);
    ObservationPartition partition(f);
    uint64_t total = 50;
    for (uint64_t t = 0; t < total; ++t) {
        Rng rng = Rng::substream(seed, 300 + t);
        ConcatenatedCode code = ConcatenatedCode::concatenated(sp, rng.next_u64());
        BitWord psi = f.evaluate(code.encode(1 + rng.below(sp.M)));
        BitWord e = sample_exact_weight(sp.n, sp.pn_budget, rng);
        uint64_t i = 1 + rng.below(sp.W);
        compute_q(code, partition, psi, e, i);  // throws on any mismatch
    }
    detail = std::to_string(total) + " instances, direct count == Phi/count on all";
    return true;
}

int cmd_verify(const std::string& suite, uint64_t seed, const std::string& out_path) {
    bool all = suite == "all";
    bool ok = true;
    std::ostringstream csv;
    csv << "# obschan " << kVersion << " seed=" << seed << "\nsuite,result,detail\n";
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        std::cout << "suite " << name << ": " << (pass ? "PASS" : "FAIL") << " (" << detail
                  << ")\n";
        csv << name << ',' << (pass ? "PASS" : "FAIL") << ",\"" << detail << "\"\n";
        ok = ok && pass;
    };
    std::string detail;
    if (all || suite == "claims") report("claims", suite_claims(seed, detail), detail);
    if (all || suite == "variation") report("variation", suite_variation(seed, detail), detail);
    if (all || suite == "binomial") report("binomial", suite_binomial(detail), detail);
    if (all || suite == "listdecode") report("listdecode", suite_listdecode(seed, detail), detail);
    if (all || suite == "identity") report("identity", suite_identity(seed, detail), detail);
    if (!out_path.empty()) write_output(out_path, csv.str());
    return ok ? 0 : 1;
}

int cmd_bounds(double p, double r, std::optional<double> q, bool curve, double p_min, double p_max,
               int steps, const std::string& out_path) {
    std::ostringstream os;
    if (curve) {
        std::vector<double> grid;
        for (int i = 0; i <= steps; ++i)
            grid.push_back(p_min + (p_max - p_min) * i / static_cast<double>(steps));
        BoundCurve bc = figure_curve(r, grid);
        os << "# obschan " << kVersion << " r=" << r << " p_star=" << bc.p_star << "\n";
        os << "p,shannon,gv,langberg,mrrw1,theorem_regime\n";
        for (const BoundCurvePoint& pt : bc.points) {
            os << pt.p << ',' << pt.shannon << ',' << pt.gv << ',';
            if (pt.langberg) os << *pt.langberg;
            os << ',' << pt.mrrw1 << ',' << (pt.theorem_regime ? 1 : 0) << "\n";
        }
    } else {
        CapacitySummary cs = capacities(p, r, q);
        os << "shannon   " << cs.shannon << "\n";
        os << "gv        " << cs.gv << "\n";
        os << "langberg  ";
        if (cs.langberg)
            os << *cs.langberg << "\n";
        else
            os << "n/a (needs r < shannon/3)\n";
        os << "mrrw1     " << cs.mrrw1 << "\n";
        if (cs.stochastic) os << "stochastic " << *cs.stochastic << "\n";
        os << "p_star    " << inverse_entropy(1 - r) << "\n";
    }
    write_output(out_path, os.str());
    return 0;
}

int cmd_circuit_validate(const std::string& path, double r, int c, int s, bool have_budget) {
    Circuit f = Circuit::parse(read_file(path));
    std::cout << "inputs " << f.n_inputs << ", gates " << f.gates.size() << ", width "
              << f.output_width() << ", size " << f.size() << "\n";
    if (have_budget) {
        BudgetReport rep = validate_budget(f, r, c, s);
        std::cout << "width " << rep.width << " vs required " << rep.expected_width
                  << (rep.width_ok ? " ok" : " MISMATCH") << "\n";
        std::cout << "size " << rep.size << " vs budget " << rep.size_budget
                  << (rep.size_ok ? " ok" : " OVER") << "\n";
        return rep.ok ? 0 : 1;
    }
    return 0;
}

int cmd_circuit_eval(const std::string& path, const std::string& input_bits) {
    Circuit f = Circuit::parse(read_file(path));
    BitWord x = BitWord::from_string(input_bits);
    if (x.length() != f.n_inputs) throw UsageError("input length != circuit arity");
    std::cout << f.evaluate(x).to_string() << "\n";
    return 0;
}

int cmd_circuit_partition(const std::string& path, uint64_t max_cells) {
    Circuit f = Circuit::parse(read_file(path));
    ObservationPartition partition(f);
    std::cout << "cells " << partition.cell_count() << " over 2^" << partition.n()
              << " inputs\n";
    for (uint32_t cell = 0; cell < partition.cell_count() && cell < max_cells; ++cell)
        std::cout << partition.cell_psi(cell).to_string() << " size " << partition.cell_size(cell)
                  << "\n";
    if (partition.cell_count() > max_cells)
        std::cout << "... (" << (partition.cell_count() - max_cells) << " more)\n";
    return 0;
}

int cmd_gen_codebook(ConfigFlags& flags, const std::string& out_path) {
    std::vector<ExperimentConfig> configs = flags.resolve();
    const ExperimentConfig& cfg = configs.front();
    SystemParams sp = cfg.system();
    Rng code_rng = Rng::substream(cfg.seed, 0);
    ConcatenatedCode code = cfg.mode == CodeMode::Concatenated
                                ? ConcatenatedCode::concatenated(sp, code_rng.next_u64())
                                : ConcatenatedCode::plain_random(sp, code_rng.next_u64());
    std::ostringstream os;
    code.write(os);
    write_output(out_path, os.str());
    return 0;
}

int cmd_gen_circuit(int n, int gates, int width, uint64_t seed, const std::string& out_path) {
    Rng rng(seed);
    Circuit f = Circuit::random(n, gates, width, rng);
    write_output(out_path, f.serialize());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial channel with a computationally bounded observer"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for independent runs")
        ->capture_default_str();

    ConfigFlags sim_flags;
    std::string sim_out, sim_format = "csv";
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo decoding runs");
    sim_flags.cfg.trials = 1000;
    sim_flags.attach(sim, true);
    sim->add_option("--out", sim_out, "output file (default stdout)");
    sim->add_option("--format", sim_format, "csv | json")->capture_default_str();

    ConfigFlags exact_flags;
    std::string exact_out, exact_format = "csv";
    std::vector<std::string> family_specs;
    CLI::App* exact = app.add_subcommand("exact-pe", "exact adversarial error probability");
    exact_flags.attach(exact, false);
    exact->add_option("--family", family_specs,
                      "circuit family: identity, constant, or @file (repeatable; empty = "
                      "the strategy's own circuit)");
    exact->add_option("--out", exact_out, "output file (default stdout)");
    exact->add_option("--format", exact_format, "csv | json")->capture_default_str();

    std::string verify_suite = "all";
    uint64_t verify_seed = 7;
    CLI::App* verify = app.add_subcommand("verify", "internal identity and bound suites");
    verify->add_option("--suite", verify_suite, "claims | variation | binomial | listdecode | identity | all")
        ->capture_default_str();
    verify->add_option("--seed", verify_seed, "suite seed")->capture_default_str();
    std::string verify_out;
    verify->add_option("--out", verify_out, "also write suite results as CSV");

    double b_p = 0.1, b_r = 0.1, b_pmin = 0.001, b_pmax = 0.4;
    std::optional<double> b_q;
    double b_q_raw = -1;
    bool b_curve = false;
    int b_steps = 100;
    std::string b_out;
    CLI::App* bounds = app.add_subcommand("bounds", "reference rate bounds");
    bounds->add_option("--p", b_p, "error fraction")->capture_default_str();
    bounds->add_option("--r", b_r, "observation rate")->capture_default_str();
    bounds->add_option("--q", b_q_raw, "stochastic channel flip rate (optional)");
    bounds->add_flag("--curve", b_curve, "emit a CSV curve over p");
    bounds->add_option("--p-min", b_pmin, "curve start")->capture_default_str();
    bounds->add_option("--p-max", b_pmax, "curve end")->capture_default_str();
    CLI::Option* b_grid_opt =
        bounds->add_option("--grid,--steps", b_steps, "curve points")->capture_default_str();
    bounds->add_option("--out", b_out, "output file (default stdout)");

    CLI::App* circuit = app.add_subcommand("circuit", "circuit file utilities");
    circuit->require_subcommand(1);
    std::string cv_path;
    double cv_r = 0;
    int cv_c = 1, cv_s = 1;
    CLI::App* cvalidate = circuit->add_subcommand("validate", "parse and optionally budget-check");
    cvalidate->add_option("--file", cv_path, "circuit file")->required();
    CLI::Option* cv_r_opt = cvalidate->add_option("--r", cv_r, "observation rate");
    cvalidate->add_option("--c", cv_c, "size coefficient")->capture_default_str();
    cvalidate->add_option("--s", cv_s, "size exponent")->capture_default_str();
    std::string ce_path, ce_input;
    CLI::App* ceval = circuit->add_subcommand("eval", "evaluate on an input word");
    ceval->add_option("--file", ce_path, "circuit file")->required();
    ceval->add_option("--input", ce_input, "input bits, position 1 first")->required();
    std::string cp_path;
    uint64_t cp_max = 32;
    CLI::App* cpart = circuit->add_subcommand("partition", "observation cells");
    cpart->add_option("--file", cp_path, "circuit file")->required();
    cpart->add_option("--max-cells", cp_max, "cells to list")->capture_default_str();

    CLI::App* gen = app.add_subcommand("gen", "generate artifacts");
    gen->require_subcommand(1);
    ConfigFlags gen_flags;
    std::string gcb_out;
    CLI::App* gcodebook = gen->add_subcommand("codebook", "sample and write a codebook");
    gen_flags.attach(gcodebook, false);
    gcodebook->add_option("--out", gcb_out, "output file (default stdout)");
    int gc_n = 6, gc_gates = 4, gc_width = 3;
    uint64_t gc_seed = 1;
    std::string gc_out;
    CLI::App* gcircuit = gen->add_subcommand("circuit", "sample and write a random circuit");
    gcircuit->add_option("-n,--n", gc_n, "inputs")->capture_default_str();
    gcircuit->add_option("--gates", gc_gates, "gate count")->capture_default_str();
    gcircuit->add_option("--width", gc_width, "outputs")->capture_default_str();
    gcircuit->add_option("--seed", gc_seed, "seed")->capture_default_str();
    gcircuit->add_option("--out", gc_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
        if (b_q_raw >= 0) b_q = b_q_raw;
        if (sim->parsed()) return cmd_simulate(sim_flags, sim_out, sim_format, threads);
        if (exact->parsed()) return cmd_exact_pe(exact_flags, family_specs, exact_out, exact_format);
        if (verify->parsed()) return cmd_verify(verify_suite, verify_seed, verify_out);
        if (bounds->parsed()) {
            // A grid request is a curve request.
            b_curve = b_curve || b_grid_opt->count() > 0;
            return cmd_bounds(b_p, b_r, b_q, b_curve, b_pmin, b_pmax, b_steps, b_out);
        }
        if (circuit->parsed()) {
            if (cvalidate->parsed())
                return cmd_circuit_validate(cv_path, cv_r, cv_c, cv_s, cv_r_opt->count() > 0);
            if (ceval->parsed()) return cmd_circuit_eval(ce_path, ce_input);
            if (cpart->parsed()) return cmd_circuit_partition(cp_path, cp_max);
        }
        if (gen->parsed()) {
            if (gcodebook->parsed()) return cmd_gen_codebook(gen_flags, gcb_out);
            if (gcircuit->parsed())
                return cmd_gen_circuit(gc_n, gc_gates, gc_width, gc_seed, gc_out);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
