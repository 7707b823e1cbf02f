// Order-2 chain: exhaustive branch walk, closed-form figures, a short
// sampled ensemble.

#include <cstdio>

#include "cfnet/repeater.hpp"

using namespace cfnet;

int main() {
    const std::size_t n = 2;
    const ChainTopology topo = build_chain(n);

    double heralded = 0.0;
    double worst_fidelity = 1.0;
    std::size_t branches = 0, successes = 0;
    for (const auto& b : enumerate_trial_branches(topo)) {
        ++branches;
        if (!b.success) continue;
        ++successes;
        heralded += b.probability;
        if (b.corrected_fidelity < worst_fidelity) worst_fidelity = b.corrected_fidelity;
    }
    std::printf("order %zu chain: %zu branches, %zu heralded\n", n, branches, successes);
    std::printf("heralded mass %.6f (expect %.6f)\n", heralded, 1.0 / 4.0);
    std::printf("worst corrected fidelity %.12f\n", worst_fidelity);

    const auto gate_probs = uniform_gate_probs(n, 0.9);
    std::printf("p_eff(n=2, p=0.9) = %.8f\n", p_eff(n, gate_probs));
    std::printf("t_tot_nodes = %.6f  t_tot_eff(eta=0.9) = %.6f  residual = %.3e\n",
                t_tot_nodes(n, uniform_node_probs(n, 0.9), 1.0, 1.0),
                t_tot_eff(n, 0.9, 0.9, 0.9, 1.0, 1.0),
                time_formula_residual(n, 0.9, 0.9, 0.9, 1.0, 1.0));

    const MonteCarloStats stats = monte_carlo(n, gate_probs, LobmModel{}, 20000, 7, 1);
    std::printf("sampled rate %.5f vs %.5f, z = %+.3f\n", stats.success_rate,
                stats.expected_rate, stats.z_score);
    return 0;
}
