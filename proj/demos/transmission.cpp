// Walk the two-site transmission protocol once and print every stage.

#include <cstdio>

#include "cfnet/density.hpp"
#include "cfnet/protocol.hpp"

using namespace cfnet;

static void print_state(const char* tag, const StateVector& s) {
    std::printf("%s:", tag);
    for (const auto& b : s.computational_branches()) {
        std::string bits(s.num_qubits(), '0');
        for (std::size_t q = 0; q < s.num_qubits(); ++q)
            if (s.bit_of(b.index, q)) bits[q] = '1';
        std::printf("  %+.4f|%s>", b.amplitude.real(), bits.c_str());
    }
    std::printf("\n");
}

int main() {
    ProtocolConfig cfg;  // both photons horizontal
    const CheckpointStates cp = checkpoint_states(cfg);
    print_state("t0  ground electrons, polarized photons", cp.t0);
    print_state("t1  electrons share the plus state     ", cp.t1);
    print_state("t2  each electron gated its photon     ", cp.t2);

    for (const auto& branch : cp.t3) {
        std::printf("t3  outcome %s  p=%.3f\n", std::string(bell_name(branch.outcome)).c_str(),
                    branch.probability);
        print_state("    collapsed", branch.state);
        const double conc = concurrence(reduced_density(branch.state, {2, 3}));
        StateVector corrected = branch.state;
        apply_frame(corrected, 2, frame_from_outcome(branch.outcome));
        const double fid =
            fidelity(protocol_target(cfg), reduced_density(corrected, {2, 3}));
        std::printf("    photon concurrence %.6f  corrected fidelity %.6f\n", conc, fid);
    }

    std::printf("\nsampled outcomes, ideal gates, seed 11:\n");
    std::size_t plus = 0, minus = 0;
    for (std::size_t i = 0; i < 20000; ++i) {
        RandomStream rng(derive_seed(11, i));
        const ProtocolResult r = run_transmission(cfg, CfGateModel{1.0}, rng);
        (r.outcome == BellState::psi_plus ? plus : minus) += 1;
    }
    std::printf("psi+ %zu  psi- %zu  of 20000\n", plus, minus);
    return 0;
}
