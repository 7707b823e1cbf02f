// Chain topology bookkeeping, one-shot trials, exhaustive branch law,
// closed-form figures against frozen constants, the formula bridge, and
// deterministic sampling.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "cfnet/repeater.hpp"
#include "test_util.hpp"

using namespace cfnet;
using namespace testutil;

TEST_CASE("chain layout puts pairs where they belong") {
    for (std::size_t n = 0; n <= 3; ++n) {
        const ChainTopology t = build_chain(n);
        REQUIRE(t.labels.size() == 4 * n + 4);
        REQUIRE(t.labels.front().owner == "Alice");
        REQUIRE(t.labels.front().role == Role::photon);
        REQUIRE(t.labels.back().owner == "Bob");
        REQUIRE(t.labels.back().role == Role::photon);
        REQUIRE(t.gate_placements.size() == 2 * n + 2);
        REQUIRE(t.electron_bsm_schedule.size() == n + 1);
        REQUIRE(t.lobm_schedule.size() == n);

        // odd interior nodes hold electron pairs, even ones photon pairs
        for (std::size_t node = 1; node <= 2 * n + 1; ++node) {
            const Role want = node % 2 == 1 ? Role::electron : Role::photon;
            const std::string owner = "C" + std::to_string(node);
            std::size_t count = 0;
            for (const auto& l : t.labels)
                if (l.owner == owner) {
                    ++count;
                    REQUIRE(l.role == want);
                }
            REQUIRE(count == 2);
        }

        // each gate joins one electron and one photon; every qubit appears in
        // exactly one placement
        std::set<std::size_t> used;
        for (const auto& [e, p] : t.gate_placements) {
            REQUIRE(t.labels[e].role == Role::electron);
            REQUIRE(t.labels[p].role == Role::photon);
            REQUIRE(used.insert(e).second);
            REQUIRE(used.insert(p).second);
        }
        REQUIRE(used.size() == t.labels.size());

        // both measurement schedules stay inside a single node
        for (const auto& [a, b] : t.electron_bsm_schedule) {
            REQUIRE(t.labels[a].owner == t.labels[b].owner);
            REQUIRE(t.labels[a].role == Role::electron);
        }
        for (const auto& [a, b] : t.lobm_schedule) {
            REQUIRE(t.labels[a].owner == t.labels[b].owner);
            REQUIRE(t.labels[a].role == Role::photon);
            REQUIRE(t.labels[b].role == Role::photon);
        }
    }
    REQUIRE_THROWS_AS(build_chain(4), std::out_of_range);
}

TEST_CASE("photonic measurement model resolves the cross-polarized pair") {
    const LobmModel lobm;
    REQUIRE(!lobm.resolves(BellState::psi_plus));
    REQUIRE(!lobm.resolves(BellState::psi_minus));
    REQUIRE(lobm.resolves(BellState::phi_plus));
    REQUIRE(lobm.resolves(BellState::phi_minus));

    LobmModel bad;
    bad.distinguishable = {BellState::phi_plus, BellState::phi_plus};
    REQUIRE_THROWS_AS(bad.resolves(BellState::phi_plus), std::invalid_argument);
}

TEST_CASE("trials over an ideal chain either succeed perfectly or fail a swap") {
    for (std::size_t n = 0; n <= 2; ++n) {
        const ChainTopology topo = build_chain(n);
        const auto probs = uniform_gate_probs(n, 1.0);
        std::size_t successes = 0;
        for (std::size_t i = 0; i < 200; ++i) {
            RandomStream rng(derive_seed(61, i));
            const TrialResult r = one_shot_trial(topo, probs, LobmModel{}, rng, true);
            REQUIRE(r.status != TrialStatus::gate_failure);
            if (r.status != TrialStatus::success) continue;
            ++successes;
            REQUIRE(std::abs(r.fidelity - 1.0) <= 1e-9);
            REQUIRE(r.outcomes.size() == 2 * n + 1);
            REQUIRE(chain_structure_ok(r.log, n));
            REQUIRE(chain_counterfactual_ok(r.log, topo));
        }
        REQUIRE(successes > 0);
        if (n == 0) REQUIRE(successes == 200);  // no swaps to fail
    }
}

TEST_CASE("dead gates always herald a gate failure") {
    const ChainTopology topo = build_chain(1);
    RandomStream rng(derive_seed(62, 0));
    const TrialResult r =
        one_shot_trial(topo, uniform_gate_probs(1, 0.0), LobmModel{}, rng);
    REQUIRE(r.status == TrialStatus::gate_failure);
    REQUIRE(r.outcomes.empty());
}

TEST_CASE("probability vectors are validated") {
    const ChainTopology topo = build_chain(1);
    RandomStream rng(derive_seed(63, 0));
    std::vector<double> wrong(3, 1.0);
    REQUIRE_THROWS_AS(one_shot_trial(topo, wrong, LobmModel{}, rng),
                      std::invalid_argument);
    std::vector<double> out_of_range(4, 1.5);
    REQUIRE_THROWS_AS(one_shot_trial(topo, out_of_range, LobmModel{}, rng),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(p_eff(1, wrong), std::invalid_argument);
    REQUIRE_THROWS_AS(t_tot_nodes(1, {1.0, 1.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("exhaustive enumeration obeys the branch law") {
    for (std::size_t n = 0; n <= 2; ++n) {
        const ChainTopology topo = build_chain(n);
        const auto branches = enumerate_trial_branches(topo);

        double mass = 0.0, heralded = 0.0;
        std::size_t success_leaves = 0;
        for (const auto& b : branches) {
            mass += b.probability;
            if (!b.success) continue;
            ++success_leaves;
            heralded += b.probability;
            REQUIRE(std::abs(b.corrected_fidelity - 1.0) <= 1e-9);
            REQUIRE(b.outcomes.size() == 2 * n + 1);
        }
        REQUIRE(std::abs(mass - 1.0) <= 1e-12);
        REQUIRE(std::abs(heralded - std::pow(0.5, static_cast<double>(n))) <= 1e-12);
        // electron readouts contribute 2 options each, each swap 2 heralded
        REQUIRE(success_leaves == (std::size_t{1} << (2 * n + 1)));
    }
}

TEST_CASE("enumeration mass times the gate product matches the rate formula") {
    const ChainTopology topo = build_chain(1);
    const std::vector<double> probs = {0.9, 0.8, 0.7, 0.6};
    REQUIRE(std::abs(exact_success_probability(topo, probs) - p_eff(1, probs)) <=
            1e-12);
}

TEST_CASE("per-trial success rate against frozen constants") {
    REQUIRE(std::abs(p_eff(1, uniform_gate_probs(1, 1.0)) - 0.5) <= 1e-15);
    REQUIRE(std::abs(p_eff(2, uniform_gate_probs(2, 0.9)) - 0.13286025) <= 1e-15);
    REQUIRE(std::abs(p_eff(1, uniform_gate_probs(1, 0.95)) - 0.40725312499999994) <=
            1e-15);
    REQUIRE(std::abs(p_eff(3, uniform_gate_probs(3, 0.8)) - 0.02097152000000001) <=
            1e-15);
}

TEST_CASE("node-priced delivery time against frozen constants") {
    REQUIRE(std::abs(t_tot_nodes(0, {1.0}, 1.0, 1.0) - 1.5) <= 1e-15);
    REQUIRE(std::abs(t_tot_nodes(1, uniform_node_probs(1, 1.0), 1.0, 1.0) - 3.375) <=
            1e-15);
    REQUIRE(std::abs(t_tot_nodes(0, {0.5}, 1.0, 1.0) - 3.0) <= 1e-15);
    REQUIRE(std::abs(t_tot_nodes(2, uniform_node_probs(2, 0.9), 1.0, 1.0) -
                     12.860082304526747) <= 1e-12);
    // time scales with the link delay
    REQUIRE(std::abs(t_tot_nodes(1, uniform_node_probs(1, 1.0), 1000.0, 2e8) -
                     3.375 * (1000.0 / 2e8)) <= 1e-18);
    REQUIRE_THROWS_AS(t_tot_nodes(0, {0.0}, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(t_tot_nodes(0, {1.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("efficiency-priced delivery time against frozen constants") {
    REQUIRE(std::abs(t_tot_eff(0, 1, 1, 1, 1.0, 1.0) - 1.5) <= 1e-15);
    REQUIRE(std::abs(t_tot_eff(1, 1, 1, 1, 1.0, 1.0) - 6.75) <= 1e-15);
    REQUIRE(std::abs(t_tot_eff(1, 0.9, 0.9, 0.9, 1.0, 1.0) - 23.899766589937002) <=
            23.899766589937002 * 1e-12);
    REQUIRE(std::abs(t_tot_eff(2, 0.95, 0.95, 0.95, 1.0, 1.0) - 80.49479267170355) <=
            80.49479267170355 * 1e-12);
    REQUIRE(std::abs(t_tot_eff(1, 1, 1, 1, 1000.0, 2e8) - 3.375e-05) <= 1e-18);
    REQUIRE_THROWS_AS(t_tot_eff(1, 0.0, 1, 1, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(t_tot_eff(1, 1.1, 1, 1, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(t_tot_eff(1, 1, 1, 1, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("delivery time grows with order and shrinks with efficiency") {
    for (std::size_t n = 0; n < 3; ++n)
        REQUIRE(t_tot_eff(n + 1, 0.9, 0.9, 0.9, 1.0, 1.0) >
                t_tot_eff(n, 0.9, 0.9, 0.9, 1.0, 1.0));
    REQUIRE(t_tot_eff(1, 0.8, 1, 1, 1.0, 1.0) > t_tot_eff(1, 0.9, 1, 1, 1.0, 1.0));
    REQUIRE(t_tot_eff(1, 1, 0.8, 1, 1.0, 1.0) > t_tot_eff(1, 1, 0.9, 1, 1.0, 1.0));
    REQUIRE(t_tot_eff(1, 1, 1, 0.8, 1.0, 1.0) > t_tot_eff(1, 1, 1, 0.9, 1.0, 1.0));
}

TEST_CASE("matched node probabilities bridge the two time formulas") {
    for (std::size_t n = 0; n <= 3; ++n)
        for (double ed : {0.8, 0.9, 1.0})
            for (double em : {0.8, 0.9, 1.0})
                for (double et : {0.8, 0.9, 1.0}) {
                    const auto probs = efficiency_matched_probs(n, ed, em, et);
                    REQUIRE(probs.size() == 2 * n + 1);
                    double prod = 1.0;
                    for (double p : probs) {
                        REQUIRE(p > 0.0);
                        REQUIRE(p <= 1.0);
                        prod *= p;
                    }
                    const double want = std::pow(0.5, static_cast<double>(n)) *
                                        std::pow(ed * em, 3.0 * n + 2.0) *
                                        std::pow(et, n + 1.0);
                    REQUIRE(std::abs(prod - want) <= 1e-15);
                    REQUIRE(time_formula_residual(n, ed, em, et, 1.0, 1.0) < 1e-12);
                }
}

TEST_CASE("sampled ensembles are reproducible and accurate") {
    const auto probs = uniform_gate_probs(1, 0.9);
    const MonteCarloStats a = monte_carlo(1, probs, LobmModel{}, 20000, 99, 1);
    const MonteCarloStats b = monte_carlo(1, probs, LobmModel{}, 20000, 99, 1);
    const MonteCarloStats c = monte_carlo(1, probs, LobmModel{}, 20000, 99, 4);

    REQUIRE(a.successes == b.successes);
    REQUIRE(a.successes == c.successes);
    REQUIRE(a.gate_failures == c.gate_failures);
    REQUIRE(a.lobm_failures == c.lobm_failures);
    REQUIRE(a.success_rate == c.success_rate);
    REQUIRE(a.mean_fidelity == c.mean_fidelity);
    REQUIRE(a.z_score == c.z_score);

    REQUIRE(a.successes + a.gate_failures + a.lobm_failures == a.trials);
    REQUIRE(std::abs(a.z_score) <= 3.0);
    REQUIRE(std::abs(a.mean_fidelity - 1.0) <= 1e-9);

    REQUIRE_THROWS_AS(monte_carlo(1, probs, LobmModel{}, 0, 1, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(monte_carlo(1, probs, LobmModel{}, 10, 1, 0),
                      std::invalid_argument);
}

TEST_CASE("certain chains report a zero-width interval cleanly") {
    const MonteCarloStats s =
        monte_carlo(0, uniform_gate_probs(0, 1.0), LobmModel{}, 1000, 5, 1);
    REQUIRE(s.successes == 1000);
    REQUIRE(s.expected_rate == 1.0);
    REQUIRE(s.std_error == 0.0);
    REQUIRE(s.z_score == 0.0);
}
