// master.hpp — closed-form dephasing master-equation reference.
//
// In the weak-coupling / dense-band regime the reduced qubit obeys
//     d rho_S / dt = -i [H_S, rho_S] + Gamma (sigma_z rho_S sigma_z - rho_S)
// with Gamma = 2 pi lambda^2 N / delta_eps.  Populations are constant and
// the coherence decays as
//     rho12(t) = rho12(0) exp(-i delta_e t) exp(-2 Gamma t),
// which is what the exact simulation is compared against.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpip/info.hpp"
#include "qpip/model.hpp"

namespace qpip {

// Predicted coherence at time t for an initial coherence rho12_init.
// |rho12_init| <= 1/2 is required for the state to be physical.
inline Complex master_coherence(const SystemParams& params, Complex rho12_init, double t) {
    params.validate();
    if (std::abs(rho12_init) > 0.5 * (1.0 + 1e-12))
        throw std::invalid_argument("master_coherence: |rho12_init| must be <= 1/2");
    const double gamma = dephasing_rate(params);
    return rho12_init * std::polar(std::exp(-2.0 * gamma * t), -params.delta_e * t);
}

// Predicted qubit entropy: populations stay at 1/2, so the spectrum is
// 1/2 +- |rho12(t)| and the entropy is the binary entropy of it.
inline double master_entropy(const SystemParams& params, Complex rho12_init, double t,
                             LogBase base) {
    const double mag = std::abs(master_coherence(params, rho12_init, t));
    Eigen::Vector2d eigs(0.5 - mag, 0.5 + mag);
    return entropy_from_eigenvalues(eigs, base);
}

struct MasterPrediction {
    double time{0.0};
    Complex coherence{0.0, 0.0};
    double entropy{0.0};
};

inline MasterPrediction master_prediction(const SystemParams& params, Complex rho12_init,
                                          double t, LogBase base) {
    MasterPrediction pred;
    pred.time = t;
    pred.coherence = master_coherence(params, rho12_init, t);
    pred.entropy = master_entropy(params, rho12_init, t, base);
    return pred;
}

// Least-squares fit of |rho12(t)| ~ A exp(-2 Gamma t): regress ln|rho12| on
// t and return -slope/2.  Used to compare a simulated decay against the
// golden-rule rate.
inline double fit_decay_rate(const std::vector<double>& times,
                             const std::vector<double>& magnitudes) {
    if (times.size() != magnitudes.size())
        throw std::invalid_argument("fit_decay_rate: times and magnitudes differ in length");
    if (times.size() < 5)
        throw std::invalid_argument("fit_decay_rate: need at least 5 samples, got " +
                                    std::to_string(times.size()));
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("fit_decay_rate: times must be strictly ascending");

    double mean_t = 0.0;
    double mean_y = 0.0;
    const auto n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(magnitudes[i] > 1e-6))
            throw std::runtime_error("fit_decay_rate: magnitude " +
                                     std::to_string(magnitudes[i]) + " at t = " +
                                     std::to_string(times[i]) +
                                     " too small for a log-linear fit");
        mean_t += times[i];
        mean_y += std::log(magnitudes[i]);
    }
    mean_t /= n;
    mean_y /= n;

    double cov = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dt = times[i] - mean_t;
        cov += dt * (std::log(magnitudes[i]) - mean_y);
        var += dt * dt;
    }
    return -0.5 * cov / var;
}

}  // namespace qpip
