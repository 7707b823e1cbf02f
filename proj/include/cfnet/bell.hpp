// bell.hpp
// Bell basis used throughout:
//   psi+- = (|00> +- |11>)/sqrt(2)   (aligned pair)
//   phi+- = (|01> +- |10>)/sqrt(2)   (anti-aligned pair)
// For photons in the H/V encoding the phi states are the cross-polarized
// ones; the linear-optics Bell measurement resolves exactly those two.

#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "cfnet/state.hpp"

namespace cfnet {

enum class BellState { psi_plus, psi_minus, phi_plus, phi_minus };

inline constexpr std::array<BellState, 4> kBellStates = {
    BellState::psi_plus, BellState::psi_minus,
    BellState::phi_plus, BellState::phi_minus};

inline std::string_view bell_name(BellState b) {
    switch (b) {
        case BellState::psi_plus: return "psi+";
        case BellState::psi_minus: return "psi-";
        case BellState::phi_plus: return "phi+";
        case BellState::phi_minus: return "phi-";
    }
    return "?";
}

// coefficients over |00>,|01>,|10>,|11>
inline std::array<complex_t, 4> bell_amplitudes(BellState b) {
    constexpr double r = 0.70710678118654752440;
    switch (b) {
        case BellState::psi_plus: return {r, 0.0, 0.0, r};
        case BellState::psi_minus: return {r, 0.0, 0.0, -r};
        case BellState::phi_plus: return {0.0, r, r, 0.0};
        case BellState::phi_minus: return {0.0, r, -r, 0.0};
    }
    return {};
}

// two-qubit register prepared in a Bell state
inline StateVector make_bell_pair(std::vector<QubitLabel> labels, BellState b) {
    if (labels.size() != 2)
        throw std::invalid_argument("make_bell_pair: exactly two labels required");
    StateVector s(std::move(labels));
    switch (b) {
        case BellState::psi_plus:
        case BellState::psi_minus:
            s.apply_h(0);
            s.apply_cnot(0, 1);
            if (b == BellState::psi_minus) s.apply_z(0);
            break;
        case BellState::phi_plus:
        case BellState::phi_minus:
            s.apply_h(0);
            s.apply_cnot(0, 1);
            s.apply_x(1);
            if (b == BellState::phi_minus) s.apply_z(0);
            break;
    }
    return s;
}

// (|0...0> + |1...1>)/sqrt(2)
inline StateVector make_ghz(std::vector<QubitLabel> labels) {
    if (labels.size() < 2)
        throw std::invalid_argument("make_ghz: at least two labels required");
    StateVector s(std::move(labels));
    s.apply_h(0);
    for (std::size_t q = 1; q < s.num_qubits(); ++q) s.apply_cnot(0, q);
    return s;
}

// probability of each Bell outcome on the pair (q1, q2), order as kBellStates
inline std::array<double, 4> bell_probabilities(const StateVector& s,
                                                std::size_t q1, std::size_t q2) {
    if (q1 == q2)
        throw std::invalid_argument("bell_probabilities: identical positions");
    const std::size_t s1 = s.stride(q1);
    const std::size_t s2 = s.stride(q2);
    std::array<double, 4> probs{};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto c = bell_amplitudes(kBellStates[k]);
        double p = 0.0;
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if ((i & s1) || (i & s2)) continue;
            complex_t beta = std::conj(c[0]) * s.amp(i) +
                             std::conj(c[1]) * s.amp(i | s2) +
                             std::conj(c[2]) * s.amp(i | s1) +
                             std::conj(c[3]) * s.amp(i | s1 | s2);
            p += std::norm(beta);
        }
        probs[k] = p;
    }
    return probs;
}

// project (q1, q2) onto the Bell outcome and renormalize; the measured pair
// stays in the register, collapsed onto the Bell state. Returns the branch
// probability. Throws if the branch has zero weight.
inline double bell_project(StateVector& s, std::size_t q1, std::size_t q2,
                           BellState outcome) {
    if (q1 == q2)
        throw std::invalid_argument("bell_project: identical positions");
    const std::size_t s1 = s.stride(q1);
    const std::size_t s2 = s.stride(q2);
    const auto c = bell_amplitudes(outcome);
    double p = 0.0;
    std::vector<complex_t> next(s.dim(), complex_t{});
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if ((i & s1) || (i & s2)) continue;
        complex_t beta = std::conj(c[0]) * s.amp(i) +
                         std::conj(c[1]) * s.amp(i | s2) +
                         std::conj(c[2]) * s.amp(i | s1) +
                         std::conj(c[3]) * s.amp(i | s1 | s2);
        p += std::norm(beta);
        next[i] = c[0] * beta;
        next[i | s2] = c[1] * beta;
        next[i | s1] = c[2] * beta;
        next[i | s1 | s2] = c[3] * beta;
    }
    if (p <= kAmpTol * kAmpTol)
        throw std::domain_error("bell_project: outcome has zero weight");
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : next) a *= inv;
    s = StateVector(s.labels(), std::move(next));
    return p;
}

// sample a Bell outcome on (q1, q2) and collapse
inline BellState bell_measure(StateVector& s, std::size_t q1, std::size_t q2,
                              RandomStream& rng) {
    const auto probs = bell_probabilities(s, q1, q2);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = 3;
    for (std::size_t k = 0; k < 4; ++k) {
        acc += probs[k];
        if (u < acc) { pick = k; break; }
    }
    bell_project(s, q1, q2, kBellStates[pick]);
    return kBellStates[pick];
}

} // namespace cfnet
