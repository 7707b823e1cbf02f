// cli.hpp
// Command-line front end. Four subcommands:
//   verify      stage-by-stage check of the two-site transmission protocol
//   repeater    closed-form chain figures, one row per chain order
//   montecarlo  sampled chain trials against the closed-form rate
//   sweep       Cartesian parameter scan over the closed-form figures
// Reports go to stdout by default as json, csv or text. Exit codes:
// 0 all checks passed, 1 a check failed, 2 usage or configuration error.

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfnet/density.hpp"
#include "cfnet/protocol.hpp"
#include "cfnet/repeater.hpp"

namespace cfnet {

using ordered_json = nlohmann::ordered_json;

struct CliResult {
    int exit_code = 0;
    std::string output;    // full report, newline-terminated
    std::string out_path;  // empty means stdout
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// shortest decimal form that parses back to the same double
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace cli_detail {

inline std::string format_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("divergent");
}

inline ordered_json json_cell(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

inline double parse_number(const std::string& text, const std::string& name) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--" + name + ": '" + text + "' is not a number");
    }
}

// scalar, or `start..end` / `start..end:step` expanded inclusively
struct ValueSet {
    std::vector<double> values;
    bool ranged = false;
};

inline ValueSet parse_value_set(const std::string& text, const std::string& name) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {{parse_number(text, name)}, false};

    const std::string start_s = text.substr(0, dots);
    std::string rest = text.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = parse_number(rest.substr(colon + 1), name);
        rest = rest.substr(0, colon);
    }
    const double start = parse_number(start_s, name);
    const double end = parse_number(rest, name);
    if (!(step > 0.0))
        throw UsageError("--" + name + ": range step must be positive");
    if (end < start)
        throw UsageError("--" + name + ": empty range '" + text + "'");

    ValueSet out;
    out.ranged = true;
    const double slack = 1e-9 * std::max(1.0, std::abs(end));
    for (double v = start; v <= end + slack; v += step)
        out.values.push_back(std::min(v, end));
    if (out.values.size() > 1000000)
        throw UsageError("--" + name + ": range expands to too many values");
    return out;
}

inline std::size_t to_order(double v, const std::string& name) {
    if (v < 0.0 || v != std::floor(v))
        throw UsageError("--" + name + ": chain order must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

// scalar broadcast or comma-separated list
struct ProbList {
    std::vector<double> entries;  // size 1 means broadcast
    bool is_list = false;
};

inline ProbList parse_prob_list(const std::string& text, const std::string& name) {
    ProbList out;
    if (text.find(',') != std::string::npos) {
        out.is_list = true;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ','))
            out.entries.push_back(parse_number(tok, name));
        if (out.entries.empty()) throw UsageError("--" + name + ": empty list");
    } else {
        out.entries.push_back(parse_number(text, name));
    }
    for (double p : out.entries)
        if (!(p >= 0.0 && p <= 1.0))
            throw UsageError("--" + name + ": probabilities must lie in [0,1]");
    return out;
}

inline std::vector<double> expand_probs(const ProbList& g, std::size_t want,
                                        const std::string& name) {
    if (!g.is_list) return std::vector<double>(want, g.entries[0]);
    if (g.entries.size() != want)
        throw UsageError("--" + name + ": list needs exactly " + std::to_string(want) +
                         " entries for this order");
    return g.entries;
}

// one entry per gate placement
inline std::vector<double> gate_probs_for(const ProbList& g, std::size_t n) {
    return expand_probs(g, 2 * n + 2, "gate-p");
}

// one entry per interior node
inline std::vector<double> node_probs_for(const ProbList& g, std::size_t n) {
    return expand_probs(g, 2 * n + 1, "node-p");
}

inline void check_eta(double eta, const std::string& name) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw UsageError("--" + name + ": efficiencies must lie in [0,1]");
}

inline std::string ket_string(std::size_t index, std::size_t width) {
    std::string bits(width, '0');
    for (std::size_t q = 0; q < width; ++q)
        if ((index >> (width - 1 - q)) & 1u) bits[q] = '1';
    return "|" + bits + ">";
}

inline ordered_json amplitude_list(const StateVector& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& b : s.computational_branches())
        arr.push_back({b.index, b.amplitude.real(), b.amplitude.imag()});
    return arr;
}

struct Check {
    std::string name;
    bool pass = false;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
};

inline Check make_check(std::string name, double expected, double actual,
                        double tolerance) {
    const bool pass = std::abs(actual - expected) <= tolerance;
    return {std::move(name), pass, expected, actual, tolerance};
}

inline ordered_json checks_json(const std::vector<Check>& checks) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"expected", c.expected},
                       {"actual", c.actual},
                       {"tolerance", c.tolerance}});
    return arr;
}

inline bool all_pass(const std::vector<Check>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

inline std::string checks_csv(const std::vector<Check>& checks) {
    std::string out = "name,pass,expected,actual,tolerance\n";
    for (const auto& c : checks)
        out += c.name + "," + (c.pass ? "true" : "false") + "," +
               format_double(c.expected) + "," + format_double(c.actual) + "," +
               format_double(c.tolerance) + "\n";
    return out;
}

inline void checks_text(std::string& out, const std::vector<Check>& checks) {
    for (const auto& c : checks)
        out += std::string(c.pass ? "PASS" : "FAIL") + "  " + c.name +
               "  expected " + format_double(c.expected) + "  actual " +
               format_double(c.actual) + "  tol " + format_double(c.tolerance) + "\n";
}

enum class Format { json, csv, text };

inline Format parse_format(const std::string& f) {
    if (f == "json") return Format::json;
    if (f == "csv") return Format::csv;
    if (f == "text") return Format::text;
    throw UsageError("--format: expected json, csv or text");
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::string pol;
    std::uint64_t seed = 0;
    std::size_t trials = 10000;
    Format format = Format::text;
};

inline CliResult cmd_verify(const VerifyArgs& a) {
    if (a.pol.size() != 2 ||
        (a.pol[0] != 'H' && a.pol[0] != 'V') ||
        (a.pol[1] != 'H' && a.pol[1] != 'V'))
        throw UsageError("--pol: expected a two-letter token over {H,V}, e.g. HH");
    const ProtocolConfig cfg(a.pol[0] == 'V' ? PhotonPolarization::vertical
                                             : PhotonPolarization::horizontal,
                             a.pol[1] == 'V' ? PhotonPolarization::vertical
                                             : PhotonPolarization::horizontal);

    const CheckpointStates computed = checkpoint_states(cfg);
    const CheckpointStates expected = expected_checkpoints(cfg);
    std::vector<Check> checks;

    const double d0 = phase_aligned_deviation(expected.t0, computed.t0);
    const double d1 = phase_aligned_deviation(expected.t1, computed.t1);
    const double d2 = phase_aligned_deviation(expected.t2, computed.t2);
    checks.push_back(make_check("t0_amplitude_deviation", 0.0, d0, kAmpTol));
    checks.push_back(make_check("t1_amplitude_deviation", 0.0, d1, kAmpTol));
    checks.push_back(make_check("t2_amplitude_deviation", 0.0, d2, kAmpTol));
    checks.push_back(make_check("t3_branch_count", 2.0,
                                static_cast<double>(computed.t3.size()), 0.0));

    const StateVector target = protocol_target(cfg);
    ordered_json branches_json = ordered_json::array();
    for (const auto& branch : computed.t3) {
        const std::string tag = "t3_" + std::string(bell_name(branch.outcome));
        checks.push_back(make_check(tag + "_probability", 0.5, branch.probability,
                                    kAmpTol));
        for (const auto& exp_branch : expected.t3) {
            if (exp_branch.outcome != branch.outcome) continue;
            checks.push_back(make_check(
                tag + "_amplitude_deviation", 0.0,
                phase_aligned_deviation(exp_branch.state, branch.state), kAmpTol));
        }
        const Eigen::MatrixXcd rho = reduced_density(branch.state, {2, 3});
        const double conc = concurrence(rho);
        checks.push_back(make_check(tag + "_concurrence", 1.0, conc, 1e-9));

        StateVector corrected = branch.state;
        apply_frame(corrected, 2, frame_from_outcome(branch.outcome));
        const double fid = fidelity(target, reduced_density(corrected, {2, 3}));
        checks.push_back(make_check(tag + "_corrected_fidelity", 1.0, fid, 1e-9));

        branches_json.push_back({{"outcome", std::string(bell_name(branch.outcome))},
                                 {"probability", branch.probability},
                                 {"concurrence", conc},
                                 {"corrected_fidelity", fid},
                                 {"state", amplitude_list(branch.state)}});
    }

    // sampled outcome statistics under ideal gates
    std::array<std::size_t, 4> counts{};
    std::size_t lost = 0;
    bool structure = true;
    for (std::size_t i = 0; i < a.trials; ++i) {
        RandomStream rng(derive_seed(a.seed, i));
        const ProtocolResult r = run_transmission(cfg, CfGateModel{1.0}, rng);
        if (r.lost) {
            ++lost;
            continue;
        }
        if (i == 0)
            structure = protocol_structure_ok(r.log) &&
                        protocol_counterfactual_ok(r.log, 2);
        for (std::size_t k = 0; k < 4; ++k)
            if (kBellStates[k] == r.outcome) ++counts[k];
    }
    checks.push_back(make_check("run_structure", 1.0, structure ? 1.0 : 0.0, 0.0));
    ordered_json freq = ordered_json::object();
    if (a.trials > 0) {
        const double sigma3 =
            3.0 * std::sqrt(0.25 / static_cast<double>(a.trials));
        for (std::size_t k = 0; k < 4; ++k)
            freq[std::string(bell_name(kBellStates[k]))] =
                static_cast<double>(counts[k]) / static_cast<double>(a.trials);
        checks.push_back(make_check(
            "freq_psi+_3sigma", 0.5,
            static_cast<double>(counts[0]) / static_cast<double>(a.trials), sigma3));
        checks.push_back(make_check(
            "freq_psi-_3sigma", 0.5,
            static_cast<double>(counts[1]) / static_cast<double>(a.trials), sigma3));
        checks.push_back(
            make_check("lost_trials", 0.0, static_cast<double>(lost), 0.0));
    }

    ordered_json report;
    report["command"] = "verify";
    report["parameters"] = {{"pol", a.pol}, {"trials", a.trials}, {"seed", a.seed}};
    report["results"] = {
        {"checkpoints",
         {{"t0",
           {{"expected", amplitude_list(expected.t0)},
            {"computed", amplitude_list(computed.t0)}}},
          {"t1",
           {{"expected", amplitude_list(expected.t1)},
            {"computed", amplitude_list(computed.t1)}}},
          {"t2",
           {{"expected", amplitude_list(expected.t2)},
            {"computed", amplitude_list(computed.t2)}}}}},
        {"branches", branches_json},
        {"statistics", {{"trials", a.trials}, {"lost", lost}, {"frequencies", freq}}}};
    report["checks"] = checks_json(checks);

    CliResult res;
    res.exit_code = all_pass(checks) ? 0 : 1;
    if (a.format == Format::json) {
        res.output = report.dump(2) + "\n";
    } else if (a.format == Format::csv) {
        res.output = checks_csv(checks);
    } else {
        std::string out = "verify pol=" + a.pol + " seed=" + std::to_string(a.seed) +
                          " trials=" + std::to_string(a.trials) + "\n";
        const auto dump_state = [&](const char* name, const StateVector& e,
                                    const StateVector& c) {
            out += std::string(name) + " expected:";
            for (const auto& b : e.computational_branches())
                out += " " + ket_string(b.index, e.num_qubits()) + " " +
                       format_double(b.amplitude.real());
            out += "\n" + std::string(name) + " computed:";
            for (const auto& b : c.computational_branches())
                out += " " + ket_string(b.index, c.num_qubits()) + " " +
                       format_double(b.amplitude.real());
            out += "\n";
        };
        dump_state("t0", expected.t0, computed.t0);
        dump_state("t1", expected.t1, computed.t1);
        dump_state("t2", expected.t2, computed.t2);
        for (const auto& branch : computed.t3) {
            out += "t3 " + std::string(bell_name(branch.outcome)) + " p=" +
                   format_double(branch.probability) + ":";
            for (const auto& b : branch.state.computational_branches())
                out += " " + ket_string(b.index, branch.state.num_qubits()) + " " +
                       format_double(b.amplitude.real());
            out += "\n";
        }
        checks_text(out, checks);
        out += std::string("RESULT ") + (all_pass(checks) ? "PASS" : "FAIL") + "\n";
        res.output = out;
    }
    return res;
}

// ---- repeater / sweep rows ----------------------------------------------------

struct ChainRow {
    std::size_t n = 0;
    double gate_p_scalar = 1.0;  // representative values for sweep output
    double node_p_scalar = 1.0;
    std::vector<double> gate_probs;  // 2n+2 entries
    std::vector<double> node_probs;  // 2n+1 entries
    double eta_d = 1.0, eta_m = 1.0, eta_t = 1.0;
    double L0 = 1.0, c = 1.0;

    std::optional<double> p_eff_v, t_nodes_v, t_eff_v, residual_v;

    void evaluate() {
        try {
            p_eff_v = p_eff(n, gate_probs);
        } catch (const std::exception&) {
            p_eff_v.reset();
        }
        try {
            t_nodes_v = t_tot_nodes(n, node_probs, L0, c);
        } catch (const std::exception&) {
            t_nodes_v.reset();
        }
        try {
            t_eff_v = t_tot_eff(n, eta_d, eta_m, eta_t, L0, c);
        } catch (const std::exception&) {
            t_eff_v.reset();
        }
        try {
            residual_v = time_formula_residual(n, eta_d, eta_m, eta_t, L0, c);
        } catch (const std::exception&) {
            residual_v.reset();
        }
    }
};

struct RepeaterArgs {
    std::string n = "1";
    std::string gate_p = "1";
    std::string node_p = "1";
    std::string eta = "1";
    std::string eta_d, eta_m, eta_t;  // empty means use the broadcast value
    double L0 = 1.0;
    double c = 1.0;
    Format format = Format::text;
};

inline CliResult cmd_repeater(const RepeaterArgs& a) {
    const ValueSet n_set = parse_value_set(a.n, "n");
    const ProbList gp = parse_prob_list(a.gate_p, "gate-p");
    const ProbList np = parse_prob_list(a.node_p, "node-p");
    const double eta_all = parse_number(a.eta, "eta");
    check_eta(eta_all, "eta");
    const double eta_d = a.eta_d.empty() ? eta_all : parse_number(a.eta_d, "etaD");
    const double eta_m = a.eta_m.empty() ? eta_all : parse_number(a.eta_m, "etaM");
    const double eta_t = a.eta_t.empty() ? eta_all : parse_number(a.eta_t, "etaT");
    check_eta(eta_d, "etaD");
    check_eta(eta_m, "etaM");
    check_eta(eta_t, "etaT");
    if (!(a.L0 > 0.0) || !(a.c > 0.0))
        throw UsageError("--L0 and --c must be positive");

    std::vector<ChainRow> rows;
    for (double nv : n_set.values) {
        ChainRow row;
        row.n = to_order(nv, "n");
        if (row.n > kMaxAnalyticOrder)
            throw UsageError("--n: order exceeds the analytic cap of " +
                             std::to_string(kMaxAnalyticOrder));
        row.gate_probs = gate_probs_for(gp, row.n);
        row.node_probs = node_probs_for(np, row.n);
        row.gate_p_scalar = gp.entries[0];
        row.node_p_scalar = np.entries[0];
        row.eta_d = eta_d;
        row.eta_m = eta_m;
        row.eta_t = eta_t;
        row.L0 = a.L0;
        row.c = a.c;
        row.evaluate();
        rows.push_back(std::move(row));
    }

    ordered_json report;
    report["command"] = "repeater";
    report["parameters"] = {{"n", a.n},
                            {"gate_p", a.gate_p},
                            {"node_p", a.node_p},
                            {"eta_D", eta_d},
                            {"eta_M", eta_m},
                            {"eta_t", eta_t},
                            {"L0", a.L0},
                            {"c", a.c}};
    ordered_json jrows = ordered_json::array();
    for (const auto& r : rows)
        jrows.push_back({{"n", r.n},
                         {"p_eff", json_cell(r.p_eff_v)},
                         {"t_tot_nodes", json_cell(r.t_nodes_v)},
                         {"t_tot_eff", json_cell(r.t_eff_v)},
                         {"consistency_residual", json_cell(r.residual_v)}});
    report["results"] = {{"rows", jrows}};
    report["checks"] = ordered_json::array();

    CliResult res;
    res.exit_code = 0;
    if (a.format == Format::json) {
        res.output = report.dump(2) + "\n";
        return res;
    }
    std::string out;
    const char* header = "n,p_eff,t_tot_nodes,t_tot_eff,consistency_residual";
    if (a.format == Format::csv) {
        out = std::string(header) + "\n";
        for (const auto& r : rows)
            out += std::to_string(r.n) + "," + format_cell(r.p_eff_v) + "," +
                   format_cell(r.t_nodes_v) + "," + format_cell(r.t_eff_v) + "," +
                   format_cell(r.residual_v) + "\n";
    } else {
        out = std::string(header) + "\n";
        for (const auto& r : rows)
            out += std::to_string(r.n) + " " + format_cell(r.p_eff_v) + " " +
                   format_cell(r.t_nodes_v) + " " + format_cell(r.t_eff_v) + " " +
                   format_cell(r.residual_v) + "\n";
    }
    res.output = out;
    return res;
}

// ---- montecarlo ----------------------------------------------------------------

struct MonteCarloArgs {
    std::string n = "1";
    std::string gate_p = "1";
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    Format format = Format::text;
};

inline CliResult cmd_montecarlo(const MonteCarloArgs& a) {
    const ValueSet n_set = parse_value_set(a.n, "n");
    if (n_set.ranged || n_set.values.size() != 1)
        throw UsageError("--n: montecarlo takes a single chain order");
    const std::size_t n = to_order(n_set.values[0], "n");
    if (n > kMaxChainOrder)
        throw UsageError("--n: sampled trials keep the whole chain in one dense "
                         "register, capped at order " +
                         std::to_string(kMaxChainOrder));
    if (a.trials == 0) throw UsageError("--trials: at least one trial required");
    if (a.threads == 0 || a.threads > 256)
        throw UsageError("--threads: must lie in [1,256]");
    const ProbList gp = parse_prob_list(a.gate_p, "gate-p");
    const std::vector<double> probs = gate_probs_for(gp, n);

    const MonteCarloStats stats =
        monte_carlo(n, probs, LobmModel{}, a.trials, a.seed, a.threads);
    std::vector<Check> checks;
    checks.push_back(make_check("z_within_3sigma", 0.0, stats.z_score, 3.0));

    // the report never mentions the thread count: output is a function of
    // (n, gate probabilities, trials, seed) alone
    ordered_json report;
    report["command"] = "montecarlo";
    ordered_json jp = gp.is_list ? ordered_json(gp.entries)
                                 : ordered_json(gp.entries[0]);
    report["parameters"] = {
        {"n", n}, {"gate_p", jp}, {"trials", a.trials}, {"seed", a.seed}};
    report["results"] = {
        {"success_rate", stats.success_rate},
        {"std_error", stats.std_error},
        {"p_eff", stats.expected_rate},
        {"z_score", stats.z_score},
        {"breakdown",
         {{"successes", stats.successes},
          {"gate_failures", stats.gate_failures},
          {"lobm_failures", stats.lobm_failures}}},
        {"mean_fidelity_given_success", stats.mean_fidelity}};
    report["checks"] = checks_json(checks);

    CliResult res;
    res.exit_code = all_pass(checks) ? 0 : 1;
    if (a.format == Format::json) {
        res.output = report.dump(2) + "\n";
    } else if (a.format == Format::csv) {
        res.output =
            "n,trials,seed,success_rate,std_error,p_eff,z_score,"
            "successes,gate_failures,lobm_failures,mean_fidelity_given_success\n" +
            std::to_string(n) + "," + std::to_string(a.trials) + "," +
            std::to_string(a.seed) + "," +
            format_double(stats.success_rate) + "," +
            format_double(stats.std_error) + "," +
            format_double(stats.expected_rate) + "," +
            format_double(stats.z_score) + "," + std::to_string(stats.successes) +
            "," + std::to_string(stats.gate_failures) + "," +
            std::to_string(stats.lobm_failures) + "," +
            format_double(stats.mean_fidelity) + "\n";
    } else {
        std::string out;
        out += "montecarlo n=" + std::to_string(n) + " trials=" +
               std::to_string(a.trials) + " seed=" + std::to_string(a.seed) + "\n";
        out += "success_rate " + format_double(stats.success_rate) + "\n";
        out += "std_error " + format_double(stats.std_error) + "\n";
        out += "p_eff " + format_double(stats.expected_rate) + "\n";
        out += "z_score " + format_double(stats.z_score) + "\n";
        out += "successes " + std::to_string(stats.successes) + "\n";
        out += "gate_failures " + std::to_string(stats.gate_failures) + "\n";
        out += "lobm_failures " + std::to_string(stats.lobm_failures) + "\n";
        out += "mean_fidelity_given_success " + format_double(stats.mean_fidelity) +
               "\n";
        checks_text(out, checks);
        out += std::string("RESULT ") + (all_pass(checks) ? "PASS" : "FAIL") + "\n";
        res.output = out;
    }
    return res;
}

// ---- sweep ---------------------------------------------------------------------

struct SweepArgs {
    std::string n = "1";
    std::string gate_p = "1";
    std::string node_p = "1";
    std::string eta = "1";
    std::string eta_d, eta_m, eta_t;
    std::string L0 = "1";
    std::string c = "1";
    Format format = Format::text;
};

inline CliResult cmd_sweep(const SweepArgs& a) {
    if (a.gate_p.find(',') != std::string::npos)
        throw UsageError("--gate-p: sweep takes a scalar or range, not a list");
    if (a.node_p.find(',') != std::string::npos)
        throw UsageError("--node-p: sweep takes a scalar or range, not a list");
    const ValueSet n_set = parse_value_set(a.n, "n");
    const ValueSet gate_set = parse_value_set(a.gate_p, "gate-p");
    const ValueSet node_set = parse_value_set(a.node_p, "node-p");
    const ValueSet eta_set = parse_value_set(a.eta, "eta");
    const bool have_d = !a.eta_d.empty();
    const bool have_m = !a.eta_m.empty();
    const bool have_t = !a.eta_t.empty();
    const ValueSet eta_d_set =
        have_d ? parse_value_set(a.eta_d, "etaD") : ValueSet{{1.0}, false};
    const ValueSet eta_m_set =
        have_m ? parse_value_set(a.eta_m, "etaM") : ValueSet{{1.0}, false};
    const ValueSet eta_t_set =
        have_t ? parse_value_set(a.eta_t, "etaT") : ValueSet{{1.0}, false};
    const ValueSet L0_set = parse_value_set(a.L0, "L0");
    const ValueSet c_set = parse_value_set(a.c, "c");

    const bool any_ranged = n_set.ranged || gate_set.ranged || node_set.ranged ||
                            eta_set.ranged || eta_d_set.ranged ||
                            eta_m_set.ranged || eta_t_set.ranged ||
                            L0_set.ranged || c_set.ranged;
    if (!any_ranged)
        throw UsageError("sweep: at least one parameter must use range syntax "
                         "start..end[:step]");

    for (double g : gate_set.values)
        if (!(g >= 0.0 && g <= 1.0))
            throw UsageError("--gate-p: probabilities must lie in [0,1]");
    for (double g : node_set.values)
        if (!(g >= 0.0 && g <= 1.0))
            throw UsageError("--node-p: probabilities must lie in [0,1]");
    for (double e : eta_set.values) check_eta(e, "eta");
    for (double e : eta_d_set.values) check_eta(e, "etaD");
    for (double e : eta_m_set.values) check_eta(e, "etaM");
    for (double e : eta_t_set.values) check_eta(e, "etaT");

    // axis order, outermost first: n, gate_p, node_p, eta, etaD, etaM, etaT,
    // L0, c; the broadcast eta axis fills whichever components have no axis
    // of their own
    std::vector<ChainRow> rows;
    for (double nv : n_set.values) {
        const std::size_t n = to_order(nv, "n");
        if (n > kMaxAnalyticOrder)
            throw UsageError("--n: order exceeds the analytic cap of " +
                             std::to_string(kMaxAnalyticOrder));
        for (double g : gate_set.values)
         for (double np : node_set.values)
          for (double e : eta_set.values)
           for (double ed : eta_d_set.values)
            for (double em : eta_m_set.values)
             for (double et : eta_t_set.values)
              for (double l0 : L0_set.values)
               for (double cc : c_set.values) {
                   if (!(l0 > 0.0) || !(cc > 0.0))
                       throw UsageError("--L0 and --c must be positive");
                   ChainRow row;
                   row.n = n;
                   row.gate_p_scalar = g;
                   row.node_p_scalar = np;
                   row.gate_probs = uniform_gate_probs(n, g);
                   row.node_probs = uniform_node_probs(n, np);
                   row.eta_d = have_d ? ed : e;
                   row.eta_m = have_m ? em : e;
                   row.eta_t = have_t ? et : e;
                   row.L0 = l0;
                   row.c = cc;
                   row.evaluate();
                   rows.push_back(std::move(row));
               }
    }

    ordered_json report;
    report["command"] = "sweep";
    report["parameters"] = {{"n", a.n},          {"gate_p", a.gate_p},
                            {"node_p", a.node_p}, {"eta", a.eta},
                            {"eta_D", a.eta_d},  {"eta_M", a.eta_m},
                            {"eta_t", a.eta_t},  {"L0", a.L0},
                            {"c", a.c}};
    ordered_json jrows = ordered_json::array();
    for (const auto& r : rows)
        jrows.push_back({{"n", r.n},
                         {"gate_p", r.gate_p_scalar},
                         {"node_p", r.node_p_scalar},
                         {"eta_D", r.eta_d},
                         {"eta_M", r.eta_m},
                         {"eta_t", r.eta_t},
                         {"L0", r.L0},
                         {"c", r.c},
                         {"p_eff", json_cell(r.p_eff_v)},
                         {"t_tot_nodes", json_cell(r.t_nodes_v)},
                         {"t_tot_eff", json_cell(r.t_eff_v)},
                         {"consistency_residual", json_cell(r.residual_v)}});
    report["results"] = {{"rows", jrows}};
    report["checks"] = ordered_json::array();

    CliResult res;
    res.exit_code = 0;
    if (a.format == Format::json) {
        res.output = report.dump(2) + "\n";
        return res;
    }
    const char* header =
        "n,gate_p,node_p,eta_D,eta_M,eta_t,L0,c,p_eff,t_tot_nodes,t_tot_eff,"
        "consistency_residual";
    std::string out = std::string(header) + "\n";
    const char sep = a.format == Format::csv ? ',' : ' ';
    for (const auto& r : rows) {
        out += std::to_string(r.n);
        out += sep;
        out += format_double(r.gate_p_scalar);
        out += sep;
        out += format_double(r.node_p_scalar);
        out += sep;
        out += format_double(r.eta_d);
        out += sep;
        out += format_double(r.eta_m);
        out += sep;
        out += format_double(r.eta_t);
        out += sep;
        out += format_double(r.L0);
        out += sep;
        out += format_double(r.c);
        out += sep;
        out += format_cell(r.p_eff_v);
        out += sep;
        out += format_cell(r.t_nodes_v);
        out += sep;
        out += format_cell(r.t_eff_v);
        out += sep;
        out += format_cell(r.residual_v);
        out += "\n";
    }
    res.output = out;
    return res;
}

} // namespace cli_detail

// parse and execute one invocation; pure aside from the computation itself.
// args excludes the program name.
inline CliResult run_cli(const std::vector<std::string>& args) {
    CLI::App app{"counterfactual entanglement chain toolkit"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "text";

    cli_detail::VerifyArgs va;
    CLI::App* verify = app.add_subcommand(
        "verify", "check the two-site transmission stage by stage");
    verify->add_option("--pol", va.pol, "photon polarizations, two of {H,V}")
        ->required();
    verify->add_option("--seed", va.seed, "rng seed")->required();
    verify->add_option("--trials", va.trials, "sampled runs for outcome statistics");
    verify->add_option("--format", format, "json, csv or text");
    verify->add_option("--out", out_path, "write the report to a file");

    cli_detail::RepeaterArgs ra;
    CLI::App* repeater =
        app.add_subcommand("repeater", "closed-form chain figures per order");
    repeater->add_option("--n", ra.n, "chain order, scalar or start..end[:step]");
    repeater->add_option("--gate-p", ra.gate_p,
                         "gate success, scalar broadcast or per-gate list");
    repeater->add_option("--node-p", ra.node_p,
                         "node success, scalar broadcast or per-node list");
    repeater->add_option("--eta", ra.eta, "broadcast efficiency");
    repeater->add_option("--etaD", ra.eta_d, "detector efficiency");
    repeater->add_option("--etaM", ra.eta_m, "memory efficiency");
    repeater->add_option("--etaT", ra.eta_t, "coupling efficiency");
    repeater->add_option("--L0", ra.L0, "segment length, meters");
    repeater->add_option("--c", ra.c, "signal speed, meters per second");
    repeater->add_option("--format", format, "json, csv or text");
    repeater->add_option("--out", out_path, "write the report to a file");

    cli_detail::MonteCarloArgs ma;
    CLI::App* montecarlo =
        app.add_subcommand("montecarlo", "sampled chain trials vs the closed form");
    montecarlo->add_option("--n", ma.n, "chain order");
    montecarlo->add_option("--gate-p", ma.gate_p,
                           "gate success, scalar broadcast or per-gate list");
    montecarlo->add_option("--trials", ma.trials, "trial count");
    montecarlo->add_option("--seed", ma.seed, "rng seed")->required();
    montecarlo->add_option("--threads", ma.threads, "worker threads");
    montecarlo->add_option("--format", format, "json, csv or text");
    montecarlo->add_option("--out", out_path, "write the report to a file");

    cli_detail::SweepArgs sa;
    CLI::App* sweep =
        app.add_subcommand("sweep", "Cartesian scan over the closed-form figures");
    sweep->add_option("--n", sa.n, "chain order, scalar or range");
    sweep->add_option("--gate-p", sa.gate_p, "gate success, scalar or range");
    sweep->add_option("--node-p", sa.node_p, "node success, scalar or range");
    sweep->add_option("--eta", sa.eta, "broadcast efficiency, scalar or range");
    sweep->add_option("--etaD", sa.eta_d, "detector efficiency, scalar or range");
    sweep->add_option("--etaM", sa.eta_m, "memory efficiency, scalar or range");
    sweep->add_option("--etaT", sa.eta_t, "coupling efficiency, scalar or range");
    sweep->add_option("--L0", sa.L0, "segment length, scalar or range");
    sweep->add_option("--c", sa.c, "signal speed, scalar or range");
    sweep->add_option("--format", format, "json, csv or text");
    sweep->add_option("--out", out_path, "write the report to a file");

    std::vector<const char*> argv;
    argv.push_back("cfnet");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        return {0, app.help(), ""};
    } catch (const CLI::ParseError& e) {
        return {2, std::string("usage error: ") + e.what() + "\n", ""};
    }

    try {
        CliResult res;
        const cli_detail::Format fmt = cli_detail::parse_format(format);
        if (verify->parsed()) {
            va.format = fmt;
            res = cli_detail::cmd_verify(va);
        } else if (repeater->parsed()) {
            ra.format = fmt;
            res = cli_detail::cmd_repeater(ra);
        } else if (montecarlo->parsed()) {
            ma.format = fmt;
            res = cli_detail::cmd_montecarlo(ma);
        } else {
            sa.format = fmt;
            res = cli_detail::cmd_sweep(sa);
        }
        res.out_path = out_path;
        return res;
    } catch (const UsageError& e) {
        return {2, std::string("usage error: ") + e.what() + "\n", ""};
    } catch (const std::exception& e) {
        return {2, std::string("error: ") + e.what() + "\n", ""};
    }
}

} // namespace cfnet
