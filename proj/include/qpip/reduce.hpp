// reduce.hpp — reduced density matrices of the qubit, of environment
// fragments, and of the qubit conditioned on a fragment.
//
// For the pure joint state a_{i,n} the qubit marginal is the 2 x 2 Gram
// matrix rho_S[i][j] = sum_n a_{i,n} conj(a_{j,n}).  Conditioning on a
// fragment F (a subset of levels) keeps only the columns in F and
// renormalizes; the joint qubit+fragment state stays pure, so its two
// marginals share the same nonzero spectrum (Schmidt) and the fragment
// marginal has rank <= 2 regardless of |F|.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpip/evolve.hpp"

namespace qpip {

// Fragment weights below this are treated as degenerate: the conditioned
// state would divide by (numerical) zero.
inline constexpr double kDegenerateWeightTol = 1e-12;

// ---------------------------------------------------------------------------
// Density matrix
// ---------------------------------------------------------------------------

struct DensityMatrix {
    Eigen::MatrixXcd entries;

    Eigen::Index dim() const { return entries.rows(); }

    // Eigenvalues in ascending order (Hermitian solve).
    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("DensityMatrix: eigendecomposition failed to converge");
        return solver.eigenvalues();
    }

    // Physicality check: Hermitian, unit trace, eigenvalues >= -tol.
    // Throws with the violated property named; used before serialization.
    void validate(double tol = 1e-10) const {
        if (entries.rows() != entries.cols())
            throw std::runtime_error("DensityMatrix: not square");
        const double asymmetry = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
        if (asymmetry > tol)
            throw std::runtime_error("DensityMatrix: not Hermitian (max asymmetry " +
                                     std::to_string(asymmetry) + ")");
        const Complex tr = entries.trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > tol)
            throw std::runtime_error("DensityMatrix: trace is not 1 (got " +
                                     std::to_string(tr.real()) + " + " +
                                     std::to_string(tr.imag()) + "i)");
        const Eigen::VectorXd evals = eigenvalues();
        if (evals(0) < -tol)
            throw std::runtime_error("DensityMatrix: negative eigenvalue " +
                                     std::to_string(evals(0)));
    }
};

// Tr(rho^2); equals sum |rho_ij|^2 for Hermitian rho.  1 iff pure.
inline double purity(const DensityMatrix& rho) { return rho.entries.squaredNorm(); }

// ---------------------------------------------------------------------------
// Fragments
// ---------------------------------------------------------------------------

// A fragment is a strictly ascending set of 1-based environment level indices.
struct Fragment {
    std::vector<int> levels;

    int size() const { return static_cast<int>(levels.size()); }

    static Fragment full(int n_levels) {
        Fragment f;
        f.levels.resize(n_levels);
        for (int k = 0; k < n_levels; ++k) f.levels[k] = k + 1;
        return f;
    }

    void validate(int n_levels) const {
        if (levels.empty()) throw std::invalid_argument("Fragment: must be non-empty");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (levels[i] < 1 || levels[i] > n_levels)
                throw std::invalid_argument("Fragment: level " + std::to_string(levels[i]) +
                                            " outside 1.." + std::to_string(n_levels));
            if (i > 0 && levels[i] <= levels[i - 1])
                throw std::invalid_argument("Fragment: levels must be strictly ascending");
        }
    }

    std::string describe() const {
        std::string out = "{";
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (i > 0) out += ",";
            out += std::to_string(levels[i]);
        }
        return out + "}";
    }
};

// Raised when a fragment carries (numerically) zero weight, so the
// conditioned state is undefined.  Callers must abort the affected average
// rather than skipping the fragment, which would silently bias it.
struct DegenerateFragmentError : std::runtime_error {
    DegenerateFragmentError(const Fragment& fragment, double time, double weight)
        : std::runtime_error("degenerate fragment " + fragment.describe() + " at t = " +
                             std::to_string(time) + ": weight " + std::to_string(weight) +
                             " below " + std::to_string(kDegenerateWeightTol)) {}
};

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

// Qubit marginal of any (not necessarily full) amplitude table.
inline DensityMatrix reduce_qubit(const AmplitudeTable& amplitudes) {
    DensityMatrix rho;
    rho.entries = amplitudes * amplitudes.adjoint();
    return rho;
}

// Qubit marginal of the joint state: populations |a_{+,.}|^2, |a_{-,.}|^2 on
// the diagonal, coherence rho12 = <a_-, a_+> off it.
inline DensityMatrix reduce_system(const JointState& state) {
    return reduce_qubit(state.amplitudes);
}

// Qubit coherence rho_S(1,2) = sum_n a_{+,n} conj(a_{-,n}) without forming
// the matrix.
inline Complex coherence(const JointState& state) {
    return (state.amplitudes.row(0) * state.amplitudes.row(1).adjoint())(0, 0);
}

// ---------------------------------------------------------------------------
// Conditioning on a fragment
// ---------------------------------------------------------------------------

struct FragmentProjection {
    AmplitudeTable conditioned;  // 2 x |F|, unit norm
    double weight;               // probability the environment is inside F
};

// Project the joint state onto a fragment and renormalize.  The weight is
// N_F = sum_{i, n in F} |a_{i,n}|^2; weights over a partition of the levels
// add to 1.
inline FragmentProjection fragment_projection(const JointState& state, const Fragment& fragment) {
    fragment.validate(state.n_levels());
    FragmentProjection proj;
    proj.conditioned.resize(2, fragment.size());
    for (int k = 0; k < fragment.size(); ++k)
        proj.conditioned.col(k) = state.amplitudes.col(fragment.levels[k] - 1);
    proj.weight = proj.conditioned.squaredNorm();
    if (proj.weight < kDegenerateWeightTol)
        throw DegenerateFragmentError(fragment, state.time, proj.weight);
    proj.conditioned /= std::sqrt(proj.weight);
    return proj;
}

// Fragment marginal of the conditioned qubit+fragment state:
// rho_F[n][m] = sum_i a_{i,n} conj(a_{i,m}).  Rank <= 2 by Schmidt.
inline DensityMatrix reduce_fragment(const AmplitudeTable& conditioned) {
    DensityMatrix rho;
    rho.entries = conditioned.transpose() * conditioned.conjugate();
    return rho;
}

}  // namespace qpip
