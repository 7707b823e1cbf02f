// state.hpp
// Dense statevector over a small register of labeled qubits.
//
// Register position 0 holds the most significant bit of the amplitude
// index, so a basis ket reads left to right in register order:
// |q0 q1 ... q_{N-1}> has index q0*2^{N-1} + ... + q_{N-1}.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfnet/rng.hpp"

namespace cfnet {

using complex_t = std::complex<double>;

// amplitudes below this are treated as zero
inline constexpr double kAmpTol = 1e-10;
// dense simulation cap; 2^20 amplitudes
inline constexpr std::size_t kMaxQubits = 20;

enum class Role { electron, photon };

struct QubitLabel {
    int id = 0;             // unique within a register
    Role role = Role::photon;
    std::string owner;      // node name, e.g. "A", "C1"
};

struct Branch {
    std::size_t index = 0;  // computational basis index
    complex_t amplitude{};
};

class StateVector {
public:
    explicit StateVector(std::vector<QubitLabel> labels)
        : labels_(std::move(labels)) {
        check_labels();
        amps_.assign(std::size_t{1} << labels_.size(), complex_t{});
        amps_[0] = 1.0;
    }

    // adopt raw amplitudes (no normalization performed)
    StateVector(std::vector<QubitLabel> labels, std::vector<complex_t> amplitudes)
        : labels_(std::move(labels)), amps_(std::move(amplitudes)) {
        check_labels();
        if (amps_.size() != (std::size_t{1} << labels_.size()))
            throw std::invalid_argument("StateVector: amplitude count mismatch");
    }

    // product state: qubit k starts in local[k][0]|0> + local[k][1]|1>
    StateVector(std::vector<QubitLabel> labels,
                const std::vector<std::array<complex_t, 2>>& local)
        : labels_(std::move(labels)) {
        check_labels();
        if (local.size() != labels_.size())
            throw std::invalid_argument("StateVector: one local state per qubit required");
        amps_.assign(std::size_t{1} << labels_.size(), complex_t{});
        amps_[0] = 1.0;
        std::size_t dim = 1;
        for (std::size_t q = 0; q < labels_.size(); ++q) {
            const auto& s = local[q];
            double nrm = std::norm(s[0]) + std::norm(s[1]);
            if (std::abs(nrm - 1.0) > 1e-9)
                throw std::invalid_argument("StateVector: local state not normalized");
            for (std::size_t i = dim; i-- > 0;) {
                complex_t a = amps_[i];
                amps_[2 * i] = a * s[0];
                amps_[2 * i + 1] = a * s[1];
            }
            dim *= 2;
        }
    }

    std::size_t num_qubits() const { return labels_.size(); }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<QubitLabel>& labels() const { return labels_; }
    const QubitLabel& label(std::size_t pos) const { return labels_.at(pos); }

    complex_t amp(std::size_t index) const { return amps_.at(index); }
    const std::vector<complex_t>& amplitudes() const { return amps_; }

    // register position of the qubit with the given id
    std::size_t position_of(int id) const {
        for (std::size_t q = 0; q < labels_.size(); ++q)
            if (labels_[q].id == id) return q;
        throw std::invalid_argument("StateVector: unknown qubit id " + std::to_string(id));
    }

    // bit of basis index at register position q
    std::size_t bit_of(std::size_t index, std::size_t q) const {
        return (index >> shift(q)) & 1u;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void apply_x(std::size_t q) {
        const std::size_t s = stride(q);
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (!(i & s)) std::swap(amps_[i], amps_[i | s]);
    }

    void apply_z(std::size_t q) {
        const std::size_t s = stride(q);
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (i & s) amps_[i] = -amps_[i];
    }

    void apply_h(std::size_t q) {
        constexpr double r = 0.70710678118654752440;
        const std::size_t s = stride(q);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & s) continue;
            complex_t a0 = amps_[i];
            complex_t a1 = amps_[i | s];
            amps_[i] = r * (a0 + a1);
            amps_[i | s] = r * (a0 - a1);
        }
    }

    // flips target where control bit is 1
    void apply_cnot(std::size_t control, std::size_t target) {
        if (control == target)
            throw std::invalid_argument("apply_cnot: control equals target");
        const std::size_t sc = stride(control);
        const std::size_t st = stride(target);
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if ((i & sc) && !(i & st)) std::swap(amps_[i], amps_[i | st]);
    }

    // probability of reading `bit` at position q
    double bit_probability(std::size_t q, std::size_t bit) const {
        const std::size_t s = stride(q);
        double p = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (((i & s) != 0) == (bit != 0)) p += std::norm(amps_[i]);
        return p;
    }

    // project position q onto `bit` and renormalize
    void collapse_qubit(std::size_t q, std::size_t bit) {
        const std::size_t s = stride(q);
        double p = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (((i & s) != 0) == (bit != 0)) {
                p += std::norm(amps_[i]);
            } else {
                amps_[i] = 0.0;
            }
        }
        if (p <= kAmpTol * kAmpTol)
            throw std::domain_error("collapse_qubit: branch has zero weight");
        const double inv = 1.0 / std::sqrt(p);
        for (auto& a : amps_) a *= inv;
    }

    // sample position q in the computational basis, collapse, return bit
    std::size_t measure_qubit(std::size_t q, RandomStream& rng) {
        const double p1 = bit_probability(q, 1);
        const std::size_t bit = rng.uniform() < p1 ? 1 : 0;
        collapse_qubit(q, bit);
        return bit;
    }

    // nonzero computational branches, ascending index
    std::vector<Branch> computational_branches(double tol = kAmpTol) const {
        std::vector<Branch> out;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (std::abs(amps_[i]) > tol) out.push_back({i, amps_[i]});
        return out;
    }

    // rescale so the norm is 1; throws on (numerically) null states
    void renormalize() {
        const double n2 = norm_sq();
        if (n2 <= kAmpTol * kAmpTol)
            throw std::domain_error("renormalize: state has zero norm");
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : amps_) a *= inv;
    }

    void scale(complex_t c) {
        for (auto& a : amps_) a *= c;
    }

    std::size_t stride(std::size_t q) const {
        if (q >= labels_.size())
            throw std::out_of_range("StateVector: qubit position out of range");
        return std::size_t{1} << shift(q);
    }

private:
    std::size_t shift(std::size_t q) const { return labels_.size() - 1 - q; }

    void check_labels() const {
        if (labels_.empty())
            throw std::invalid_argument("StateVector: empty register");
        if (labels_.size() > kMaxQubits)
            throw std::out_of_range("StateVector: register exceeds " +
                                    std::to_string(kMaxQubits) + " qubits");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i].id == labels_[j].id)
                    throw std::invalid_argument("StateVector: duplicate qubit id " +
                                                std::to_string(labels_[i].id));
    }

    std::vector<QubitLabel> labels_;
    std::vector<complex_t> amps_;
};

// all-|0> register
inline StateVector init_register(std::vector<QubitLabel> labels) {
    return StateVector(std::move(labels));
}

enum class Gate { H, X, Z };

inline void apply_gate(StateVector& s, Gate g, std::size_t q) {
    switch (g) {
        case Gate::H: s.apply_h(q); break;
        case Gate::X: s.apply_x(q); break;
        case Gate::Z: s.apply_z(q); break;
    }
}

// deviation between states after removing a global phase; large when the
// states genuinely differ, ~0 when they agree up to a phase factor
inline double phase_aligned_deviation(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("phase_aligned_deviation: dimension mismatch");
    complex_t inner{};
    for (std::size_t i = 0; i < a.dim(); ++i)
        inner += std::conj(a.amp(i)) * b.amp(i);
    complex_t phase = 1.0;
    if (std::abs(inner) > kAmpTol) phase = std::conj(inner) / std::abs(inner);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        worst = std::max(worst, std::abs(a.amp(i) - phase * b.amp(i)));
    return worst;
}

inline bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                                     double tol = kAmpTol) {
    return phase_aligned_deviation(a, b) <= tol;
}

} // namespace cfnet
