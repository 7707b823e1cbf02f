// Front-end contract: exit codes, report schemas, byte determinism, range
// grammar, and the documented example invocations.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "cfnet/cli.hpp"

using namespace cfnet;
using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

} // namespace

TEST_CASE("shortest round-trip decimal formatting") {
    for (double v : {0.1, 0.5, 1.0 / 3.0, 3.375e-05, 0.40725312499999994,
                     23.899766589937002, 1e300, -2.5e-8}) {
        const std::string text = format_double(v);
        REQUIRE(std::stod(text) == v);
    }
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(1.0) == "1");
}

TEST_CASE("stage verification passes for every polarization pattern") {
    for (const char* pol : {"HH", "VV", "HV", "VH"}) {
        const CliResult res =
            run_cli({"verify", "--pol", pol, "--seed", "3", "--trials", "4000",
                     "--format", "json"});
        CAPTURE(pol);
        REQUIRE(res.exit_code == 0);
        const json report = json::parse(res.output);
        REQUIRE(report["command"] == "verify");
        REQUIRE(report["parameters"]["pol"] == pol);
        for (const auto& check : report["checks"]) REQUIRE(check["pass"] == true);
        REQUIRE(report["results"]["branches"].size() == 2);
        for (const auto& branch : report["results"]["branches"]) {
            REQUIRE(std::abs(branch["concurrence"].get<double>() - 1.0) <= 1e-9);
            REQUIRE(std::abs(branch["corrected_fidelity"].get<double>() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("emitted JSON re-serializes to identical bytes") {
    const CliResult res = run_cli(
        {"verify", "--pol", "HH", "--seed", "11", "--trials", "2000", "--format",
         "json"});
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    REQUIRE(report.dump(2) + "\n" == res.output);

    const CliResult sweep = run_cli(
        {"sweep", "--n", "0..2", "--eta", "0.9", "--format", "json"});
    REQUIRE(sweep.exit_code == 0);
    REQUIRE(json::parse(sweep.output).dump(2) + "\n" == sweep.output);
}

TEST_CASE("identical invocations produce identical bytes") {
    const std::vector<std::string> args = {"verify", "--pol", "HV", "--seed", "21",
                                           "--trials", "3000", "--format", "text"};
    REQUIRE(run_cli(args).output == run_cli(args).output);
}

TEST_CASE("bad inputs exit with the usage status") {
    REQUIRE(run_cli({"verify", "--pol", "HX", "--seed", "1"}).exit_code == 2);
    REQUIRE(run_cli({"verify", "--pol", "HH"}).exit_code == 2);   // seed required
    REQUIRE(run_cli({"verify", "--pol", "HH", "--seed", "1", "--format", "yaml"})
                .exit_code == 2);
    REQUIRE(run_cli({"sweep", "--n", "1..0"}).exit_code == 2);
    REQUIRE(run_cli({"sweep", "--n", "1"}).exit_code == 2);       // nothing ranged
    REQUIRE(run_cli({"montecarlo", "--n", "4", "--seed", "1"}).exit_code == 2);
    REQUIRE(run_cli({"montecarlo", "--n", "1", "--seed", "1", "--threads", "0"})
                .exit_code == 2);
    REQUIRE(run_cli({"repeater", "--eta", "1.5"}).exit_code == 2);
    REQUIRE(run_cli({"repeater", "--gate-p", "0.5..1"}).exit_code == 2);
    REQUIRE(run_cli({"repeater", "--n", "1", "--gate-p", "0.9,0.9"}).exit_code == 2);
    REQUIRE(run_cli({"nonsense"}).exit_code == 2);
    const CliResult res = run_cli({"verify", "--pol", "HX", "--seed", "1"});
    REQUIRE(res.output.rfind("usage error:", 0) == 0);
}

TEST_CASE("chain figures match the documented example row") {
    const CliResult res =
        run_cli({"repeater", "--n", "1", "--gate-p", "1", "--eta", "1", "--L0",
                 "1000", "--c", "2e8", "--format", "json"});
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    const auto& row = report["results"]["rows"][0];
    REQUIRE(row["n"] == 1);
    REQUIRE(std::abs(row["p_eff"].get<double>() - 0.5) <= 1e-15);
    REQUIRE(std::abs(row["t_tot_eff"].get<double>() - 3.375e-05) <=
            3.375e-05 * 1e-12);
    REQUIRE(std::abs(row["t_tot_nodes"].get<double>() - 3.375 * (1000.0 / 2e8)) <=
            1e-18);
    REQUIRE(row["consistency_residual"].get<double>() < 1e-12);
}

TEST_CASE("order ranges emit one row per order") {
    const CliResult res = run_cli(
        {"repeater", "--n", "0..3", "--gate-p", "0.9", "--eta", "0.9", "--format",
         "csv"});
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    REQUIRE(lines.size() == 5);
    REQUIRE(lines[0] == "n,p_eff,t_tot_nodes,t_tot_eff,consistency_residual");
    for (std::size_t i = 1; i < lines.size(); ++i)
        REQUIRE(split_csv(lines[i])[0] == std::to_string(i - 1));
}

TEST_CASE("per-gate and per-node lists are honored") {
    const CliResult res = run_cli(
        {"repeater", "--n", "1", "--gate-p", "0.9,0.8,0.7,0.6", "--node-p",
         "0.9,0.8,0.7", "--format", "json"});
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    const auto& row = report["results"]["rows"][0];
    REQUIRE(std::abs(row["p_eff"].get<double>() - 0.5 * 0.9 * 0.8 * 0.7 * 0.6) <=
            1e-15);
    REQUIRE(std::abs(row["t_tot_nodes"].get<double>() -
                     std::pow(1.5, 3) / (0.9 * 0.8 * 0.7)) <= 1e-12);

    REQUIRE(run_cli({"repeater", "--n", "1", "--gate-p", "0.9,0.8"}).exit_code == 2);
    REQUIRE(run_cli({"repeater", "--n", "1", "--node-p", "0.9,0.8"}).exit_code == 2);
}

TEST_CASE("zero efficiency flags the divergent cells instead of crashing") {
    const CliResult res = run_cli({"repeater", "--eta", "0", "--format", "csv"});
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    const auto cells = split_csv(lines[1]);
    REQUIRE(cells[1] == "0.5");         // gate family untouched by eta
    REQUIRE(cells[2] == "3.375");       // node family untouched by eta
    REQUIRE(cells[3] == "divergent");
    REQUIRE(cells[4] == "divergent");

    const CliResult jres = run_cli({"repeater", "--eta", "0", "--format", "json"});
    const json jreport = json::parse(jres.output);
    const auto& row = jreport["results"]["rows"][0];
    REQUIRE(row["t_tot_eff"].is_null());
    REQUIRE(row["consistency_residual"].is_null());
}

TEST_CASE("sampled command reproduces the rate and its own bytes") {
    const std::vector<std::string> args = {"montecarlo", "--n",     "1",
                                           "--gate-p",   "1",       "--trials",
                                           "20000",      "--seed",  "7",
                                           "--format",   "json"};
    const CliResult res = run_cli(args);
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    REQUIRE(std::abs(report["results"]["p_eff"].get<double>() - 0.5) <= 1e-15);
    REQUIRE(std::abs(report["results"]["z_score"].get<double>()) <= 3.0);
    const auto& breakdown = report["results"]["breakdown"];
    REQUIRE(breakdown["successes"].get<std::size_t>() +
                breakdown["gate_failures"].get<std::size_t>() +
                breakdown["lobm_failures"].get<std::size_t>() ==
            20000);

    // repeated run and a different thread count produce the same bytes
    REQUIRE(run_cli(args).output == res.output);
    std::vector<std::string> threaded = args;
    threaded.push_back("--threads");
    threaded.push_back("4");
    REQUIRE(run_cli(threaded).output == res.output);
}

TEST_CASE("sampled command csv header is stable") {
    const CliResult res =
        run_cli({"montecarlo", "--n", "0", "--trials", "10", "--seed", "1",
                 "--format", "csv"});
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    REQUIRE(lines[0] ==
            "n,trials,seed,success_rate,std_error,p_eff,z_score,successes,"
            "gate_failures,lobm_failures,mean_fidelity_given_success");
    REQUIRE(lines.size() == 2);
}

TEST_CASE("scan grammar expands inclusively and counts records") {
    const CliResult res = run_cli(
        {"sweep", "--n", "0..3", "--etaD", "0.8..1.0:0.05", "--format", "json"});
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    REQUIRE(report["results"]["rows"].size() == 20);

    const CliResult csv = run_cli(
        {"sweep", "--n", "0..3", "--etaD", "0.8..1.0:0.05", "--format", "csv"});
    REQUIRE(split_lines(csv.output).size() == 21);
}

TEST_CASE("rate column grows along a gate probability scan") {
    const CliResult res = run_cli(
        {"sweep", "--n", "1", "--gate-p", "0.5..1.0:0.1", "--format", "csv"});
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    REQUIRE(lines[0] ==
            "n,gate_p,node_p,eta_D,eta_M,eta_t,L0,c,p_eff,t_tot_nodes,t_tot_eff,"
            "consistency_residual");
    REQUIRE(lines.size() == 7);  // header + 6 scan points
    double prev = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double v = std::stod(split_csv(lines[i])[8]);
        REQUIRE(v > prev);
        prev = v;
    }
}

TEST_CASE("output path requests are carried through") {
    const CliResult res = run_cli({"repeater", "--n", "1", "--out", "/tmp/x.json"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out_path == "/tmp/x.json");
    const CliResult none = run_cli({"repeater", "--n", "1"});
    REQUIRE(none.out_path.empty());
}

TEST_CASE("help is not an error") {
    REQUIRE(run_cli({"--help"}).exit_code == 0);
    REQUIRE(run_cli({}).exit_code == 2);
}

TEST_CASE("check rows surface in csv and text forms") {
    const CliResult csv =
        run_cli({"verify", "--pol", "HH", "--seed", "5", "--trials", "1000",
                 "--format", "csv"});
    REQUIRE(csv.exit_code == 0);
    REQUIRE(split_lines(csv.output)[0] == "name,pass,expected,actual,tolerance");

    const CliResult text =
        run_cli({"verify", "--pol", "HH", "--seed", "5", "--trials", "1000"});
    REQUIRE(text.exit_code == 0);
    const auto lines = split_lines(text.output);
    REQUIRE(lines.back() == "RESULT PASS");
}
