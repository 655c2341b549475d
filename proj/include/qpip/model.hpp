// model.hpp — qubit + random-band environment model and its block Hamiltonians.
//
// A two-level system (energy gap delta_e) dephases against an N-level
// environment whose levels are spread uniformly over a band of width
// delta_eps.  The interaction is sigma_z (x) C with C a random band matrix:
// zero diagonal, independent circular complex Gaussian entries of scale
// lambda above the diagonal, Hermitian below.
//
// Because [H, sigma_z (x) 1] = 0 the joint Hamiltonian splits into two N x N
// sector blocks
//     h_plus  = +delta_e/2 + H_env + C     (qubit in |+>)
//     h_minus = -delta_e/2 + H_env - C     (qubit in |->)
// which is the representation everything downstream evolves in.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qpip/rng.hpp"

namespace qpip {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct SystemParams {
    int n_levels{2};        // environment dimension N (>= 2)
    double delta_e{1.0};    // qubit energy gap
    double delta_eps{0.5};  // environment band width (> 0)
    double lambda{0.0};     // coupling scale (>= 0)
    std::uint64_t seed{0};  // master seed for all random draws

    void validate() const {
        if (n_levels < 2)
            throw std::invalid_argument("SystemParams: n_levels must be >= 2, got " +
                                        std::to_string(n_levels));
        if (!(delta_eps > 0.0) || !std::isfinite(delta_eps))
            throw std::invalid_argument("SystemParams: delta_eps must be positive and finite");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("SystemParams: lambda must be non-negative and finite");
        if (!std::isfinite(delta_e))
            throw std::invalid_argument("SystemParams: delta_e must be finite");
    }
};

// ---------------------------------------------------------------------------
// Coupling matrix
// ---------------------------------------------------------------------------

// Hermitian N x N random band coupling.  Entries above the diagonal are
// lambda * (x + i y) / sqrt(2) with x, y independent standard normals, so
// <|C_nm|^2> = lambda^2 and <C_nm^2> = 0 (circular symmetry).  The diagonal
// is exactly zero: level energies live in the environment Hamiltonian only.
struct CouplingMatrix {
    Eigen::MatrixXcd entries;
};

// Draw one coupling realization.  The generator must be deterministically
// derived from the run seed (see rng::derive_key) so realizations are
// reproducible and independent.  Entries are consumed in row-major order of
// the upper triangle, which fixes the layout of the stream.
inline CouplingMatrix build_coupling_matrix(const SystemParams& params, rng::SplitMix64& gen) {
    params.validate();
    const int n = params.n_levels;
    const double scale = params.lambda / std::sqrt(2.0);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (int row = 0; row < n; ++row) {
        for (int col = row + 1; col < n; ++col) {
            const auto [x, y] = rng::gaussian_pair(gen);
            c(row, col) = Complex(scale * x, scale * y);
            c(col, row) = std::conj(c(row, col));
        }
    }
    return CouplingMatrix{std::move(c)};
}

// ---------------------------------------------------------------------------
// Hamiltonian blocks
// ---------------------------------------------------------------------------

struct HamiltonianBlocks {
    Eigen::MatrixXcd h_plus;   // sector with qubit in |+> (sigma_z = +1)
    Eigen::MatrixXcd h_minus;  // sector with qubit in |-> (sigma_z = -1)
};

// Environment level energies (delta_eps / N) * n for n = 1..N.
inline Eigen::VectorXd band_energies(const SystemParams& params) {
    const int n = params.n_levels;
    const double step = params.delta_eps / static_cast<double>(n);
    Eigen::VectorXd e(n);
    for (int k = 0; k < n; ++k) e(k) = step * static_cast<double>(k + 1);
    return e;
}

// Assemble both sector blocks from one coupling realization.  h_minus is
// derived from h_plus by subtracting (delta_e * 1 + 2 C) elementwise, so the
// identity h_plus - h_minus = delta_e * 1 + 2 C holds exactly in floating
// point, not just to rounding.
inline HamiltonianBlocks build_blocks(const SystemParams& params, const CouplingMatrix& coupling) {
    params.validate();
    const int n = params.n_levels;
    if (coupling.entries.rows() != n || coupling.entries.cols() != n)
        throw std::invalid_argument("build_blocks: coupling is " +
                                    std::to_string(coupling.entries.rows()) + "x" +
                                    std::to_string(coupling.entries.cols()) + " but n_levels is " +
                                    std::to_string(n));

    const Eigen::VectorXd energies = band_energies(params);
    const double half_gap = 0.5 * params.delta_e;

    Eigen::MatrixXcd h_plus = coupling.entries;
    for (int k = 0; k < n; ++k) h_plus(k, k) = Complex(half_gap + energies(k), 0.0);

    Eigen::MatrixXcd shift = 2.0 * coupling.entries;
    shift.diagonal().array() += Complex(params.delta_e, 0.0);

    HamiltonianBlocks blocks;
    blocks.h_minus = h_plus - shift;
    blocks.h_plus = std::move(h_plus);
    return blocks;
}

// ---------------------------------------------------------------------------
// Weak-coupling / dense-band diagnostics
// ---------------------------------------------------------------------------

// Dimensionless regime indicators for the Markovian master equation:
//   c1 = lambda * N / delta_eps   (coupling vs. level spacing; want >= 1/2)
//   c2 = lambda^2 * N / delta_eps^2  (golden-rule width vs. band; want << 1)
struct ValidityCriteria {
    double c1{0.0};
    double c2{0.0};
};

inline ValidityCriteria validity_criteria(const SystemParams& params) {
    params.validate();
    const double n = static_cast<double>(params.n_levels);
    ValidityCriteria crit;
    crit.c1 = params.lambda * n / params.delta_eps;
    crit.c2 = params.lambda * params.lambda * n / (params.delta_eps * params.delta_eps);
    return crit;
}

// Golden-rule dephasing rate Gamma = 2 pi lambda^2 N / delta_eps
// (level density N / delta_eps times 2 pi lambda^2).
inline double dephasing_rate(const SystemParams& params) {
    params.validate();
    return 2.0 * std::numbers::pi * params.lambda * params.lambda *
           static_cast<double>(params.n_levels) / params.delta_eps;
}

}  // namespace qpip
