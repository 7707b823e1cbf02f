// density.hpp
// Reduced density matrices, overlap fidelity and Wootters concurrence.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "cfnet/state.hpp"

namespace cfnet {

// trace out everything except the register positions in `keep`; keep[0]
// becomes the most significant bit of the reduced index
inline Eigen::MatrixXcd reduced_density(const StateVector& s,
                                        const std::vector<std::size_t>& keep) {
    if (keep.empty() || keep.size() >= s.num_qubits() + 1)
        throw std::invalid_argument("reduced_density: bad keep set");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= s.num_qubits())
            throw std::out_of_range("reduced_density: position out of range");
        for (std::size_t j = i + 1; j < keep.size(); ++j)
            if (keep[i] == keep[j])
                throw std::invalid_argument("reduced_density: repeated position");
    }
    const std::size_t n = s.num_qubits();
    const std::size_t kd = std::size_t{1} << keep.size();
    const std::size_t ed = std::size_t{1} << (n - keep.size());

    std::vector<bool> kept(n, false);
    for (auto q : keep) kept[q] = true;

    // one reduced-basis column per traced-out configuration
    std::vector<std::vector<complex_t>> cols(ed, std::vector<complex_t>(kd, complex_t{}));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::size_t r = 0;
        for (auto q : keep) r = (r << 1) | s.bit_of(i, q);
        std::size_t e = 0;
        for (std::size_t q = 0; q < n; ++q)
            if (!kept[q]) e = (e << 1) | s.bit_of(i, q);
        cols[e][r] = s.amp(i);
    }

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kd),
                                                  static_cast<Eigen::Index>(kd));
    for (const auto& v : cols)
        for (std::size_t a = 0; a < kd; ++a)
            for (std::size_t b = 0; b < kd; ++b)
                rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    v[a] * std::conj(v[b]);
    return rho;
}

// <target|rho|target> for a pure target
inline double fidelity(const StateVector& target, const Eigen::MatrixXcd& rho) {
    if (rho.rows() != static_cast<Eigen::Index>(target.dim()) || rho.rows() != rho.cols())
        throw std::invalid_argument("fidelity: dimension mismatch");
    Eigen::VectorXcd t(rho.rows());
    for (std::size_t i = 0; i < target.dim(); ++i)
        t(static_cast<Eigen::Index>(i)) = target.amp(i);
    return std::real(complex_t(t.dot(rho * t)));
}

// |<a|b>|^2 for pure states
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("fidelity: dimension mismatch");
    complex_t inner{};
    for (std::size_t i = 0; i < a.dim(); ++i)
        inner += std::conj(a.amp(i)) * b.amp(i);
    return std::norm(inner);
}

// Wootters concurrence of a two-qubit density matrix
inline double concurrence(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("concurrence: expects a 4x4 matrix");
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    // sigma_y (x) sigma_y
    yy(0, 3) = -1.0; yy(1, 2) = 1.0; yy(2, 1) = 1.0; yy(3, 0) = -1.0;
    Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(r, false);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i)
        lam[static_cast<std::size_t>(i)] =
            std::sqrt(std::max(0.0, std::real(solver.eigenvalues()(i))));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// concurrence of a pure two-qubit state, 2|a00 a11 - a01 a10|
inline double concurrence(const StateVector& s) {
    if (s.num_qubits() != 2)
        throw std::invalid_argument("concurrence: expects a two-qubit state");
    return 2.0 * std::abs(s.amp(0) * s.amp(3) - s.amp(1) * s.amp(2));
}

} // namespace cfnet
