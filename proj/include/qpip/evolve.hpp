// evolve.hpp — exact joint-state propagation via sector spectral decompositions.
//
// The joint pure state is stored as a 2 x N amplitude table: row 0 holds the
// amplitudes a_{+,n} (qubit |+>), row 1 the a_{-,n} (qubit |->).  Each row
// evolves under its own sector block,
//     a_s(t) = U_s exp(-i Lambda_s t) U_s^dagger a_s(0),
// so a single Hermitian eigendecomposition per sector gives the state at any
// time without step-size error.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpip/model.hpp"

namespace qpip {

// Amplitude table: 2 rows (qubit |+>, |->), one column per environment level.
using AmplitudeTable = Eigen::Matrix<Complex, 2, Eigen::Dynamic>;

struct JointState {
    AmplitudeTable amplitudes;
    double time{0.0};

    int n_levels() const { return static_cast<int>(amplitudes.cols()); }
    double norm_squared() const { return amplitudes.squaredNorm(); }
};

// Product initial state (|+> + |->)/sqrt(2) (x) uniform environment: every
// amplitude equals 1/sqrt(2N).  Maximal initial coherence |rho12| = 1/2.
inline JointState initial_state(const SystemParams& params) {
    params.validate();
    JointState state;
    state.amplitudes = AmplitudeTable::Constant(
        2, params.n_levels, Complex(1.0 / std::sqrt(2.0 * params.n_levels), 0.0));
    state.time = 0.0;
    return state;
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors;  // columns are orthonormal eigenvectors
};

// Eigendecomposition of a Hermitian block.  Rejects non-Hermitian input
// rather than silently symmetrizing it: an asymmetry above rounding level
// means the block was assembled wrong.
inline SpectralDecomposition diagonalize(const Eigen::MatrixXcd& block) {
    if (block.rows() != block.cols())
        throw std::invalid_argument("diagonalize: block is not square");
    const double asymmetry = (block - block.adjoint()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-12)
        throw std::invalid_argument("diagonalize: block is not Hermitian (max asymmetry " +
                                    std::to_string(asymmetry) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigendecomposition failed to converge");
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

// Caches both sector decompositions; immutable after construction, so one
// Propagator may serve many times (and many threads) at O(N^2) per apply.
class Propagator {
  public:
    explicit Propagator(const HamiltonianBlocks& blocks)
        : plus_(diagonalize(blocks.h_plus)), minus_(diagonalize(blocks.h_minus)) {
        if (plus_.eigenvalues.size() != minus_.eigenvalues.size())
            throw std::invalid_argument("Propagator: sector blocks differ in dimension");
    }

    const SpectralDecomposition& plus() const { return plus_; }
    const SpectralDecomposition& minus() const { return minus_; }

    // Advance a state by dt >= 0.  Unitary by construction: amplitudes are
    // rotated to the eigenbasis, phased by exp(-i lambda dt), rotated back.
    JointState apply(const JointState& state, double dt) const {
        if (!(dt >= 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("Propagator::apply: dt must be non-negative and finite");
        const auto n = plus_.eigenvalues.size();
        if (state.amplitudes.cols() != n)
            throw std::invalid_argument("Propagator::apply: state has " +
                                        std::to_string(state.amplitudes.cols()) +
                                        " levels, propagator has " + std::to_string(n));
        JointState out;
        out.amplitudes.resize(2, n);
        out.amplitudes.row(0) = rotate(plus_, state.amplitudes.row(0).transpose(), dt).transpose();
        out.amplitudes.row(1) = rotate(minus_, state.amplitudes.row(1).transpose(), dt).transpose();
        out.time = state.time + dt;
        return out;
    }

  private:
    static Eigen::VectorXcd rotate(const SpectralDecomposition& sector,
                                   const Eigen::VectorXcd& amps, double dt) {
        Eigen::VectorXcd coeffs = sector.eigenvectors.adjoint() * amps;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k)
            coeffs(k) *= std::polar(1.0, -sector.eigenvalues(k) * dt);
        return sector.eigenvectors * coeffs;
    }

    SpectralDecomposition plus_;
    SpectralDecomposition minus_;
};

// One-shot evolution of an initial (time 0) state to absolute time t.
inline JointState evolve(const HamiltonianBlocks& blocks, const JointState& state0, double t) {
    if (state0.time != 0.0)
        throw std::invalid_argument("evolve: initial state must have time 0");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("evolve: t must be non-negative and finite");
    return Propagator(blocks).apply(state0, t);
}

// Joint states at a strictly sorted grid of times, all propagated from the
// uniform initial state through one shared decomposition.
inline std::vector<JointState> trajectory(const SystemParams& params,
                                          const CouplingMatrix& coupling,
                                          const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("trajectory: times must be non-empty");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
            throw std::invalid_argument("trajectory: times must be non-negative and finite");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("trajectory: times must be strictly ascending");
    }
    const Propagator prop(build_blocks(params, coupling));
    const JointState state0 = initial_state(params);
    std::vector<JointState> states;
    states.reserve(times.size());
    for (const double t : times) states.push_back(prop.apply(state0, t));
    return states;
}

}  // namespace qpip
