// run.hpp — the workflows behind the CLI subcommands (validate / evolve / pip).
//
// Kept header-level and stream-based so tests can drive whole runs in-process
// and inspect rows before any file is written.
#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qpip/config.hpp"
#include "qpip/evolve.hpp"
#include "qpip/info.hpp"
#include "qpip/master.hpp"
#include "qpip/model.hpp"
#include "qpip/output.hpp"
#include "qpip/reduce.hpp"

namespace qpip {

// Coupling draw for one realization: each realization gets its own child
// stream of the run seed, so ensembles are reproducible and extendable.
inline CouplingMatrix coupling_for_realization(const SystemParams& params, int realization) {
    rng::SplitMix64 gen{rng::derive_key(params.seed, rng::kCouplingStream,
                                        static_cast<std::uint64_t>(realization))};
    return build_coupling_matrix(params, gen);
}

// ---------------------------------------------------------------------------
// evolve: reduced-qubit trajectories vs. the master-equation reference
// ---------------------------------------------------------------------------

struct TrajectoryData {
    std::vector<TrajectoryRow> rows;           // one per (realization, time)
    std::vector<MeanTrajectoryRow> mean_rows;  // one per time (ensemble average)
};

inline TrajectoryData compute_trajectory(const RunConfig& config) {
    config.validate();
    const SystemParams& params = config.params;
    const LogBase base = config.pip.base;
    const Complex rho12_init = coherence(initial_state(params));

    TrajectoryData data;
    data.rows.reserve(static_cast<std::size_t>(config.realizations) * config.times.size());
    std::vector<Eigen::Matrix2cd> rho_sum(config.times.size(), Eigen::Matrix2cd::Zero());

    for (int r = 0; r < config.realizations; ++r) {
        const CouplingMatrix coupling = coupling_for_realization(params, r);
        const std::vector<JointState> states = trajectory(params, coupling, config.times);
        for (std::size_t i = 0; i < states.size(); ++i) {
            const DensityMatrix rho = reduce_system(states[i]);
            rho.validate();  // physicality gate before anything is serialized
            const MasterPrediction pred =
                master_prediction(params, rho12_init, config.times[i], base);
            TrajectoryRow row;
            row.seed_index = r;
            row.t = config.times[i];
            row.rho12 = rho.entries(0, 1);
            row.entropy_s = entropy(rho, base);
            row.master_abs_rho12 = std::abs(pred.coherence);
            row.master_entropy = pred.entropy;
            data.rows.push_back(row);
            rho_sum[i] += rho.entries;
        }
    }

    // Ensemble average: the master equation describes the realization-averaged
    // rho_S, so the mean rows report that matrix's coherence and entropy.
    data.mean_rows.reserve(config.times.size());
    for (std::size_t i = 0; i < config.times.size(); ++i) {
        DensityMatrix mean_rho;
        mean_rho.entries = rho_sum[i] / static_cast<double>(config.realizations);
        mean_rho.validate();
        const MasterPrediction pred =
            master_prediction(params, rho12_init, config.times[i], base);
        MeanTrajectoryRow row;
        row.t = config.times[i];
        row.rho12 = mean_rho.entries(0, 1);
        row.entropy_s = entropy(mean_rho, base);
        row.master_abs_rho12 = std::abs(pred.coherence);
        row.master_entropy = pred.entropy;
        data.mean_rows.push_back(row);
    }
    return data;
}

// ---------------------------------------------------------------------------
// pip: averaged partial-information curves at each requested time
// ---------------------------------------------------------------------------

struct PipData {
    Convention convention{Convention::paper};
    std::vector<PipRow> rows;  // all times, n_fragment = 1..N per time
};

// Curves are computed for the first realization's coupling draw.
inline std::vector<PipData> compute_pip(const RunConfig& config) {
    config.validate();
    const SystemParams& params = config.params;
    const Propagator prop(build_blocks(params, coupling_for_realization(params, 0)));
    const JointState state0 = initial_state(params);

    std::vector<PipData> out;
    for (const Convention convention : config.pip.conventions)
        out.push_back(PipData{convention, {}});

    for (std::size_t i = 0; i < config.times.size(); ++i) {
        const JointState state = prop.apply(state0, config.times[i]);
        for (std::size_t c = 0; c < out.size(); ++c) {
            PipConfig pc;
            pc.convention = out[c].convention;
            pc.base = config.pip.base;
            pc.enumeration_cap = config.pip.enumeration_cap;
            pc.batch_size = config.pip.batch_size;
            pc.stderr_tol = config.pip.stderr_tol;
            pc.max_samples = config.pip.max_samples;
            pc.seed = params.seed;
            pc.time_index = i;
            pc.threads = config.threads;
            const PipCurve curve = pip_curve(state, pc);
            for (const PipPoint& point : curve.points)
                out[c].rows.push_back(PipRow{config.times[i], point, curve.ceiling});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

namespace detail {

inline void ensure_parent_directory(const std::filesystem::path& prefix) {
    const std::filesystem::path parent = prefix.parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
        if (ec)
            throw std::invalid_argument("output: cannot create directory \"" + parent.string() +
                                        "\": " + ec.message());
    }
}

}  // namespace detail

inline std::vector<std::filesystem::path> run_evolve(const RunConfig& config) {
    const TrajectoryData data = compute_trajectory(config);
    const std::string hash = config_hash_hex(config);
    const std::filesystem::path prefix(config.output.prefix);
    detail::ensure_parent_directory(prefix);

    std::vector<std::filesystem::path> written;
    const auto csv = prefix.string() + "_trajectory.csv";
    write_trajectory_csv(csv, data.rows, hash);
    written.emplace_back(csv);
    if (config.realizations > 1) {
        const auto mean_csv = prefix.string() + "_trajectory_mean.csv";
        write_trajectory_mean_csv(mean_csv, data.mean_rows, hash);
        written.emplace_back(mean_csv);
    }
    if (config.output.format == OutputFormat::json) {
        const auto js = prefix.string() + "_trajectory.json";
        write_trajectory_json(js, data.rows, hash);
        written.emplace_back(js);
        if (config.realizations > 1) {
            const auto mean_js = prefix.string() + "_trajectory_mean.json";
            write_trajectory_mean_json(mean_js, data.mean_rows, hash);
            written.emplace_back(mean_js);
        }
    }
    return written;
}

inline std::vector<std::filesystem::path> run_pip(const RunConfig& config) {
    const std::vector<PipData> data = compute_pip(config);
    const std::string hash = config_hash_hex(config);
    const std::filesystem::path prefix(config.output.prefix);
    detail::ensure_parent_directory(prefix);

    std::vector<std::filesystem::path> written;
    for (const PipData& d : data) {
        const std::string stem =
            prefix.string() + "_pip_" + convention_name(d.convention);
        write_pip_csv(stem + ".csv", d.rows, hash);
        written.emplace_back(stem + ".csv");
        if (config.output.format == OutputFormat::json) {
            write_pip_json(stem + ".json", d.rows, hash);
            written.emplace_back(stem + ".json");
        }
    }
    return written;
}

// ---------------------------------------------------------------------------
// validate: echo the parsed config and the derived regime quantities
// ---------------------------------------------------------------------------

inline void run_validate(const RunConfig& config, std::ostream& out) {
    config.validate();
    const SystemParams& p = config.params;
    const ValidityCriteria crit = validity_criteria(p);
    const double gamma = dephasing_rate(p);

    out << kToolName << " " << kToolVersion << " config report\n";
    out << "  n_levels     = " << p.n_levels << "\n";
    out << "  delta_e      = " << format_g17(p.delta_e) << "\n";
    out << "  delta_eps    = " << format_g17(p.delta_eps) << "\n";
    out << "  lambda       = " << format_g17(p.lambda) << "\n";
    out << "  seed         = " << p.seed << "\n";
    out << "  times        = " << config.times.size() << " points in ["
        << format_g17(config.times.front()) << ", " << format_g17(config.times.back()) << "]\n";
    out << "  realizations = " << config.realizations << "\n";
    out << "  pip          = convention";
    for (const Convention c : config.pip.conventions) out << " " << convention_name(c);
    out << ", base " << base_name(config.pip.base) << ", enumeration_cap "
        << config.pip.enumeration_cap << ", batch_size " << config.pip.batch_size
        << ", stderr_tol " << format_g17(config.pip.stderr_tol) << ", max_samples "
        << config.pip.max_samples << "\n";
    out << "  output       = prefix " << config.output.prefix << ", format "
        << (config.output.format == OutputFormat::csv ? "csv" : "json") << "\n";
    out << "derived\n";
    out << "  gamma (dephasing rate)      = " << format_g17(gamma) << "\n";
    out << "  c1 (coupling vs. spacing)   = " << format_g17(crit.c1) << "\n";
    out << "  c2 (rate vs. band width)    = " << format_g17(crit.c2) << "\n";
    if (p.lambda == 0.0) {
        out << "  regime: lambda = 0, qubit and environment decouple (no dephasing)\n";
    } else if (crit.c1 >= 0.5 && crit.c2 <= 0.1) {
        out << "  regime: master-equation comparison applicable (c1 >= 0.5, c2 <= 0.1)\n";
    } else {
        out << "  regime: outside the master-equation regime (want c1 >= 0.5 and c2 <= 0.1)\n";
    }
    out << "config hash fnv1a64:" << config_hash_hex(config) << "\n";
}

}  // namespace qpip
