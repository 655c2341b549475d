// helpers.hpp — shared fixtures and independent oracles for the test suite.
//
// The oracles here deliberately avoid the code paths they check: the dense
// evolution oracle exponentiates the full 2N x 2N joint Hamiltonian built by
// explicit Kronecker products, and the master-equation oracle integrates the
// Lindblad form with fixed-step RK4.  Both are O(big) and test-only.
#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "qpip/qpip.hpp"

namespace testutil {

using qpip::Complex;

// Reference parameter sets used throughout the suite.
inline qpip::SystemParams params_n10(std::uint64_t seed = 42) {
    return qpip::SystemParams{10, 1.0, 0.5, 2.5e-2, seed};
}

inline qpip::SystemParams params_n100(std::uint64_t seed = 42) {
    return qpip::SystemParams{100, 1.0, 0.5, 1.5e-2, seed};
}

// Kronecker product, written out longhand on purpose.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Full joint Hamiltonian H = (delta_e/2) sz (x) 1 + 1 (x) H_env + sz (x) C,
// in the flattened basis |qubit i> (x) |level n>  ->  index i*N + n.
inline Eigen::MatrixXcd dense_joint_hamiltonian(const qpip::SystemParams& params,
                                                const qpip::CouplingMatrix& coupling) {
    const int n = params.n_levels;
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const Eigen::MatrixXcd eye2 = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::MatrixXcd eyen = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd h_env = Eigen::MatrixXcd::Zero(n, n);
    h_env.diagonal() = qpip::band_energies(params).cast<Complex>();
    return 0.5 * params.delta_e * kron(sz, eyen) + kron(eye2, h_env) +
           kron(sz, coupling.entries);
}

// Dense oracle: psi(t) = U exp(-i Lambda t) U^dagger psi(0) on the full
// 2N-dimensional space.
inline qpip::JointState dense_evolve(const qpip::SystemParams& params,
                                     const qpip::CouplingMatrix& coupling,
                                     const qpip::JointState& state0, double t) {
    const int n = params.n_levels;
    const Eigen::MatrixXcd h = dense_joint_hamiltonian(params, coupling);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd psi(2 * n);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < n; ++k) psi(i * n + k) = state0.amplitudes(i, k);
    Eigen::VectorXcd coeffs = solver.eigenvectors().adjoint() * psi;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        coeffs(k) *= std::polar(1.0, -solver.eigenvalues()(k) * t);
    psi = solver.eigenvectors() * coeffs;
    qpip::JointState out;
    out.amplitudes.resize(2, n);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < n; ++k) out.amplitudes(i, k) = psi(i * n + k);
    out.time = state0.time + t;
    return out;
}

// Fixed-step RK4 integration of
//   d rho / dt = -i [H_S, rho] + Gamma (sz rho sz - rho),  H_S = (delta_e/2) sz.
inline Eigen::Matrix2cd rk4_master(const qpip::SystemParams& params, Eigen::Matrix2cd rho0,
                                   double t_final, int steps) {
    const double gamma = qpip::dephasing_rate(params);
    Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const Eigen::Matrix2cd h = 0.5 * params.delta_e * sz;
    const auto rhs = [&](const Eigen::Matrix2cd& rho) -> Eigen::Matrix2cd {
        const Complex minus_i(0.0, -1.0);
        return minus_i * (h * rho - rho * h) + gamma * (sz * rho * sz - rho);
    };
    const double dt = t_final / steps;
    Eigen::Matrix2cd rho = rho0;
    for (int s = 0; s < steps; ++s) {
        const Eigen::Matrix2cd k1 = rhs(rho);
        const Eigen::Matrix2cd k2 = rhs(rho + 0.5 * dt * k1);
        const Eigen::Matrix2cd k3 = rhs(rho + 0.5 * dt * k2);
        const Eigen::Matrix2cd k4 = rhs(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

// Dense Hermitian test matrix with entries in [-1, 1] (plus i[-1, 1] off the
// diagonal), seeded for reproducibility.
inline Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
    qpip::rng::SplitMix64 gen{seed};
    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = Complex(2.0 * qpip::rng::uniform01(gen) - 1.0, 0.0);
        for (int j = i + 1; j < n; ++j) {
            h(i, j) = Complex(2.0 * qpip::rng::uniform01(gen) - 1.0,
                              2.0 * qpip::rng::uniform01(gen) - 1.0);
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

// Evolved reference state shared by the reduction / information tests.
inline qpip::JointState evolved_state(const qpip::SystemParams& params, double t,
                                      int realization = 0) {
    const qpip::CouplingMatrix coupling = qpip::coupling_for_realization(params, realization);
    return qpip::evolve(qpip::build_blocks(params, coupling), qpip::initial_state(params), t);
}

}  // namespace testutil
