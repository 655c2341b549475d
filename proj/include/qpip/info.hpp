// info.hpp — von Neumann entropies, qubit/fragment mutual information, and
// averaged partial-information curves.
//
// For a pure joint state the qubit+fragment pair (traced over the rest of
// the environment, then conditioned on the fragment) is again pure, so the
// mutual information needs only the two marginal entropies S_S and S_F, and
// S_F equals the entropy of the conditioned qubit 2 x 2 Gram matrix (Schmidt).
// That closed form makes a fragment evaluation O(|F|), which is what lets
// the averaged curves reach N = 100 by Monte Carlo.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpip/parallel.hpp"
#include "qpip/reduce.hpp"
#include "qpip/rng.hpp"

namespace qpip {

// Eigenvalues in [-kEigenvalueClampTol, 0) are rounding noise and clamp to
// zero; anything more negative is a real positivity violation.
inline constexpr double kEigenvalueClampTol = 1e-10;

enum class LogBase { base2, natural };
enum class Convention { paper, pure_bipartite };

struct PositivityError : std::runtime_error {
    explicit PositivityError(double eigenvalue)
        : std::runtime_error("entropy: eigenvalue " + std::to_string(eigenvalue) +
                             " below -" + std::to_string(kEigenvalueClampTol) +
                             "; state is not positive semidefinite") {}
};

// ---------------------------------------------------------------------------
// Entropy
// ---------------------------------------------------------------------------

// S = -sum_k lambda_k log lambda_k over a probability spectrum.
inline double entropy_from_eigenvalues(const Eigen::VectorXd& eigenvalues, LogBase base) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        const double lam = eigenvalues(k);
        if (lam < -kEigenvalueClampTol) throw PositivityError(lam);
        if (lam <= 0.0) continue;  // clamp rounding noise; 0 log 0 = 0
        s -= lam * std::log(lam);
    }
    return base == LogBase::base2 ? s / std::numbers::ln2 : s;
}

inline double entropy(const DensityMatrix& rho, LogBase base) {
    return entropy_from_eigenvalues(rho.eigenvalues(), base);
}

namespace detail {

// Entropy of a 2 x 2 Hermitian Gram block (g00, g11 diagonal, g01 off) after
// normalization by its trace.  Eigenvalues are 1/2 +- d in closed form.
inline double two_level_gram_entropy(double g00, double g11, Complex g01, double weight,
                                     LogBase base) {
    const double d = std::hypot(0.5 * (g00 - g11) / weight, std::abs(g01) / weight);
    Eigen::Vector2d eigs(0.5 - d, 0.5 + d);
    return entropy_from_eigenvalues(eigs, base);
}

// Evaluates I(S : F) for fragments of one joint state.  The full-state qubit
// entropy S_S is computed once; each fragment costs one O(|F|) Gram pass.
class FragmentScorer {
  public:
    FragmentScorer(const JointState& state, LogBase base, Convention convention)
        : state_(state),
          base_(base),
          convention_(convention),
          s_system_(entropy(reduce_system(state), base)) {}

    double s_system() const { return s_system_; }

    double operator()(const Fragment& fragment) const {
        double g00 = 0.0;
        double g11 = 0.0;
        Complex g01(0.0, 0.0);
        for (const int level : fragment.levels) {
            const Complex ap = state_.amplitudes(0, level - 1);
            const Complex am = state_.amplitudes(1, level - 1);
            g00 += std::norm(ap);
            g11 += std::norm(am);
            g01 += ap * std::conj(am);
        }
        const double weight = g00 + g11;
        if (weight < kDegenerateWeightTol)
            throw DegenerateFragmentError(fragment, state_.time, weight);
        const double s_fragment = two_level_gram_entropy(g00, g11, g01, weight, base_);
        return convention_ == Convention::paper ? s_system_ + s_fragment : 2.0 * s_fragment;
    }

  private:
    const JointState& state_;
    LogBase base_;
    Convention convention_;
    double s_system_;
};

// Compensated (Neumaier) mean of pre-computed values in index order, so the
// result does not depend on how the values were produced.
inline double compensated_mean(const std::vector<double>& values) {
    double sum = 0.0;
    double comp = 0.0;
    for (const double v : values) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(values.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mutual information
// ---------------------------------------------------------------------------

// I(S : F) for one fragment.  Under Convention::paper this is S_S + S_F
// (pure conditioned pair, so S_SF = 0); under Convention::pure_bipartite it
// is 2 S_F, which ignores the conditioning of the system marginal.
inline double mutual_information(const JointState& state, const Fragment& fragment, LogBase base,
                                 Convention convention = Convention::paper) {
    fragment.validate(state.n_levels());
    return detail::FragmentScorer(state, base, convention)(fragment);
}

// ---------------------------------------------------------------------------
// Fragment enumeration and sampling
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultEnumerationCap = 100000;

struct EnumerationCapError : std::runtime_error {
    EnumerationCapError(int n_levels, int n_fragment, std::uint64_t cap)
        : std::runtime_error("enumerate_fragments: C(" + std::to_string(n_levels) + "," +
                             std::to_string(n_fragment) + ") exceeds cap " + std::to_string(cap) +
                             "; switch to sampling") {}
};

// Binomial coefficient, saturating at UINT64_MAX instead of overflowing.
inline std::uint64_t binomial_or_max(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (result > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(result);
}

// All size-n_fragment subsets of {1..n_levels} in lexicographic order.
// Refuses to materialize more than cap subsets.
inline std::vector<Fragment> enumerate_fragments(int n_levels, int n_fragment,
                                                 std::uint64_t cap = kDefaultEnumerationCap) {
    if (n_fragment < 1 || n_fragment > n_levels)
        throw std::invalid_argument("enumerate_fragments: n_fragment must be in 1.." +
                                    std::to_string(n_levels));
    const std::uint64_t count = binomial_or_max(n_levels, n_fragment);
    if (count > cap) throw EnumerationCapError(n_levels, n_fragment, cap);

    std::vector<Fragment> fragments;
    fragments.reserve(count);
    std::vector<int> current(n_fragment);
    for (int k = 0; k < n_fragment; ++k) current[k] = k + 1;
    while (true) {
        fragments.push_back(Fragment{current});
        // Advance the rightmost index that can still move.
        int pos = n_fragment - 1;
        while (pos >= 0 && current[pos] == n_levels - (n_fragment - 1 - pos)) --pos;
        if (pos < 0) break;
        ++current[pos];
        for (int k = pos + 1; k < n_fragment; ++k) current[k] = current[k - 1] + 1;
    }
    return fragments;
}

// One uniformly random size-n_fragment subset, drawn by a partial
// Fisher-Yates shuffle keyed by `key` alone (stateless, so draws can be
// assigned to threads in any order).
inline Fragment sample_fragment(int n_levels, int n_fragment, std::uint64_t key) {
    if (n_fragment < 1 || n_fragment > n_levels)
        throw std::invalid_argument("sample_fragment: n_fragment must be in 1.." +
                                    std::to_string(n_levels));
    rng::SplitMix64 gen{key};
    std::vector<int> pool(n_levels);
    for (int k = 0; k < n_levels; ++k) pool[k] = k + 1;
    for (int i = 0; i < n_fragment; ++i) {
        const auto j = i + static_cast<int>(rng::uniform_below(
                               gen, static_cast<std::uint64_t>(n_levels - i)));
        std::swap(pool[i], pool[j]);
    }
    Fragment fragment;
    fragment.levels.assign(pool.begin(), pool.begin() + n_fragment);
    std::sort(fragment.levels.begin(), fragment.levels.end());
    return fragment;
}

// Draws `count` independent subsets; draw d uses child key derive_key(key,
// first_draw + d), so a sequence can be extended batch by batch without
// re-drawing earlier fragments.  Repeats across draws are allowed (sampling
// with replacement at the subset level).
inline std::vector<Fragment> sample_fragments(int n_levels, int n_fragment, std::uint64_t key,
                                              std::size_t count, std::uint64_t first_draw = 0) {
    std::vector<Fragment> fragments;
    fragments.reserve(count);
    for (std::size_t d = 0; d < count; ++d)
        fragments.push_back(
            sample_fragment(n_levels, n_fragment, rng::derive_key(key, first_draw + d)));
    return fragments;
}

// ---------------------------------------------------------------------------
// Partial-information curves
// ---------------------------------------------------------------------------

enum class PipMethod { exact, monte_carlo };

struct PipPoint {
    int n_fragment{0};
    double fraction{0.0};         // n_fragment / N
    double mean_mi{0.0};          // average I(S : F) over fragments
    double std_error{0.0};        // 0 for exact enumeration
    std::uint64_t n_samples{0};   // subsets enumerated or drawn
    PipMethod method{PipMethod::exact};
};

struct PipConfig {
    Convention convention{Convention::paper};
    LogBase base{LogBase::base2};
    std::uint64_t enumeration_cap{kDefaultEnumerationCap};  // exact if C(N, n_F) <= cap
    int batch_size{200};          // Monte Carlo draws between stopping checks
    double stderr_tol{1e-3};      // stop when the standard error drops below
    std::uint64_t max_samples{100000};  // hard Monte Carlo budget per point
    std::uint64_t seed{0};        // master seed (fragment stream is derived)
    std::uint64_t time_index{0};  // distinguishes sampling streams per time
    int threads{1};

    void validate() const {
        if (enumeration_cap < 1)
            throw std::invalid_argument("PipConfig: enumeration_cap must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("PipConfig: batch_size must be >= 1");
        if (!(stderr_tol > 0.0))
            throw std::invalid_argument("PipConfig: stderr_tol must be positive");
        if (max_samples < 1) throw std::invalid_argument("PipConfig: max_samples must be >= 1");
    }
};

namespace detail {

// Running mean/variance (Welford).  Values are folded in draw order.
struct RunningStats {
    std::uint64_t n{0};
    double mean{0.0};
    double m2{0.0};

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    double std_error() const {
        if (n < 2) return std::numeric_limits<double>::infinity();
        const double variance = m2 / static_cast<double>(n - 1);
        return std::sqrt(variance / static_cast<double>(n));
    }
};

}  // namespace detail

// Average of I(S : F) over fragments of one size.  Enumerates exactly when
// C(N, n_F) fits under the cap, otherwise Monte Carlo with a batched
// stopping rule.  Both paths score fragments into indexed slots (parallel)
// and reduce sequentially in index order, so results are bit-identical for
// any thread count.
inline PipPoint pip_point(const JointState& state, int n_fragment, const PipConfig& config) {
    config.validate();
    const int n = state.n_levels();
    if (n_fragment < 1 || n_fragment > n)
        throw std::invalid_argument("pip_point: n_fragment must be in 1.." + std::to_string(n));

    const detail::FragmentScorer score(state, config.base, config.convention);
    PipPoint point;
    point.n_fragment = n_fragment;
    point.fraction = static_cast<double>(n_fragment) / static_cast<double>(n);

    const std::uint64_t count = binomial_or_max(n, n_fragment);
    if (count <= config.enumeration_cap) {
        const std::vector<Fragment> fragments =
            enumerate_fragments(n, n_fragment, config.enumeration_cap);
        std::vector<double> values(fragments.size());
        parallel_for(fragments.size(), config.threads,
                     [&](std::size_t i) { values[i] = score(fragments[i]); });
        point.mean_mi = detail::compensated_mean(values);
        point.std_error = 0.0;
        point.n_samples = fragments.size();
        point.method = PipMethod::exact;
        return point;
    }

    const std::uint64_t stream_key = rng::derive_key(config.seed, rng::kFragmentStream,
                                                     config.time_index,
                                                     static_cast<std::uint64_t>(n_fragment));
    detail::RunningStats stats;
    while (stats.n < config.max_samples) {
        const std::size_t batch = static_cast<std::size_t>(
            std::min<std::uint64_t>(config.batch_size, config.max_samples - stats.n));
        const std::vector<Fragment> fragments =
            sample_fragments(n, n_fragment, stream_key, batch, stats.n);
        std::vector<double> values(batch);
        parallel_for(batch, config.threads,
                     [&](std::size_t i) { values[i] = score(fragments[i]); });
        for (const double v : values) stats.add(v);
        if (stats.n >= 2 && stats.std_error() < config.stderr_tol) break;
    }
    point.mean_mi = stats.mean;
    point.std_error = stats.std_error();
    point.n_samples = stats.n;
    point.method = PipMethod::monte_carlo;
    return point;
}

struct PipCurve {
    double time{0.0};
    Convention convention{Convention::paper};
    double ceiling{0.0};  // 2 S_S(t): the full-environment mutual information
    std::vector<PipPoint> points;  // n_fragment = 1..N
};

// Full averaged curve for one state: one point per fragment size.
inline PipCurve pip_curve(const JointState& state, const PipConfig& config) {
    PipCurve curve;
    curve.time = state.time;
    curve.convention = config.convention;
    curve.ceiling = 2.0 * entropy(reduce_system(state), config.base);
    const int n = state.n_levels();
    curve.points.reserve(n);
    for (int n_fragment = 1; n_fragment <= n; ++n_fragment)
        curve.points.push_back(pip_point(state, n_fragment, config));
    return curve;
}

}  // namespace qpip
