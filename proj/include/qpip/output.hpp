// output.hpp — deterministic CSV / JSON serialization of run results.
//
// Output files must be byte-identical across reruns and thread counts, so
// numbers are printed with snprintf("%.17g") (round-trip exact, locale-free
// for the "C" locale) and every file carries `#` header comments naming the
// tool version, the row schema, and a hash of the run-defining config.
#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qpip/config.hpp"
#include "qpip/info.hpp"
#include "qpip/version.hpp"

namespace qpip {

// ---------------------------------------------------------------------------
// Hashing and number formatting
// ---------------------------------------------------------------------------

// FNV-1a (64-bit): tiny, dependency-free, stable across platforms.  Used to
// fingerprint configs in file headers, not for anything adversarial.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Hash of the canonical run-defining JSON (see canonical_run_json).
inline std::string config_hash_hex(const RunConfig& config) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(canonical_run_json(config).dump()));
    return buf;
}

// Shortest 17-significant-digit form: parses back to the identical double.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Row types
// ---------------------------------------------------------------------------

struct TrajectoryRow {
    int seed_index{0};
    double t{0.0};
    Complex rho12{0.0, 0.0};
    double entropy_s{0.0};
    double master_abs_rho12{0.0};
    double master_entropy{0.0};
};

// Ensemble row: quantities of the realization-averaged density matrix.
struct MeanTrajectoryRow {
    double t{0.0};
    Complex rho12{0.0, 0.0};  // complex mean of the coherence
    double entropy_s{0.0};    // entropy of the averaged rho_S
    double master_abs_rho12{0.0};
    double master_entropy{0.0};
};

struct PipRow {
    double t{0.0};
    PipPoint point;
    double ceiling{0.0};
};

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("output: cannot open \"" + path.string() +
                                    "\" for writing");
    return out;
}

inline void write_header_comments(std::ofstream& out, const std::string& schema,
                                  const std::string& hash) {
    out << "# " << kToolName << " " << kToolVersion << "\n";
    out << "# schema " << schema << "\n";
    out << "# config fnv1a64:" << hash << "\n";
}

}  // namespace detail

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<TrajectoryRow>& rows,
                                 const std::string& hash) {
    auto out = detail::open_output(path);
    detail::write_header_comments(out, "qpip-trajectory-1", hash);
    out << "seed_index,t,re_rho12,im_rho12,abs_rho12,entropy_s,master_abs_rho12,master_entropy\n";
    for (const auto& r : rows) {
        out << r.seed_index << ',' << format_g17(r.t) << ',' << format_g17(r.rho12.real()) << ','
            << format_g17(r.rho12.imag()) << ',' << format_g17(std::abs(r.rho12)) << ','
            << format_g17(r.entropy_s) << ',' << format_g17(r.master_abs_rho12) << ','
            << format_g17(r.master_entropy) << '\n';
    }
}

inline void write_trajectory_mean_csv(const std::filesystem::path& path,
                                      const std::vector<MeanTrajectoryRow>& rows,
                                      const std::string& hash) {
    auto out = detail::open_output(path);
    detail::write_header_comments(out, "qpip-trajectory-mean-1", hash);
    out << "t,re_rho12,im_rho12,abs_rho12,entropy_s,master_abs_rho12,master_entropy\n";
    for (const auto& r : rows) {
        out << format_g17(r.t) << ',' << format_g17(r.rho12.real()) << ','
            << format_g17(r.rho12.imag()) << ',' << format_g17(std::abs(r.rho12)) << ','
            << format_g17(r.entropy_s) << ',' << format_g17(r.master_abs_rho12) << ','
            << format_g17(r.master_entropy) << '\n';
    }
}

inline void write_pip_csv(const std::filesystem::path& path, const std::vector<PipRow>& rows,
                          const std::string& hash) {
    auto out = detail::open_output(path);
    detail::write_header_comments(out, "qpip-pip-1", hash);
    out << "t,n_f,f,mi_mean,mi_stderr,n_samples,method,ceiling\n";
    for (const auto& r : rows) {
        out << format_g17(r.t) << ',' << r.point.n_fragment << ','
            << format_g17(r.point.fraction) << ',' << format_g17(r.point.mean_mi) << ','
            << format_g17(r.point.std_error) << ',' << r.point.n_samples << ','
            << (r.point.method == PipMethod::exact ? "exact" : "monte_carlo") << ','
            << format_g17(r.ceiling) << '\n';
    }
}

// JSON mirrors: identical rows as an array of objects, plus the same
// metadata.  nlohmann prints doubles in shortest round-trip form.

namespace detail {

inline nlohmann::json json_envelope(const std::string& schema, const std::string& hash) {
    nlohmann::json j;
    j["tool"] = std::string(kToolName) + " " + kToolVersion;
    j["schema"] = schema;
    j["config"] = "fnv1a64:" + hash;
    j["rows"] = nlohmann::json::array();
    return j;
}

inline void dump_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

}  // namespace detail

inline void write_trajectory_json(const std::filesystem::path& path,
                                  const std::vector<TrajectoryRow>& rows,
                                  const std::string& hash) {
    nlohmann::json j = detail::json_envelope("qpip-trajectory-1", hash);
    for (const auto& r : rows) {
        j["rows"].push_back({{"seed_index", r.seed_index},
                             {"t", r.t},
                             {"re_rho12", r.rho12.real()},
                             {"im_rho12", r.rho12.imag()},
                             {"abs_rho12", std::abs(r.rho12)},
                             {"entropy_s", r.entropy_s},
                             {"master_abs_rho12", r.master_abs_rho12},
                             {"master_entropy", r.master_entropy}});
    }
    detail::dump_json(path, j);
}

inline void write_trajectory_mean_json(const std::filesystem::path& path,
                                       const std::vector<MeanTrajectoryRow>& rows,
                                       const std::string& hash) {
    nlohmann::json j = detail::json_envelope("qpip-trajectory-mean-1", hash);
    for (const auto& r : rows) {
        j["rows"].push_back({{"t", r.t},
                             {"re_rho12", r.rho12.real()},
                             {"im_rho12", r.rho12.imag()},
                             {"abs_rho12", std::abs(r.rho12)},
                             {"entropy_s", r.entropy_s},
                             {"master_abs_rho12", r.master_abs_rho12},
                             {"master_entropy", r.master_entropy}});
    }
    detail::dump_json(path, j);
}

inline void write_pip_json(const std::filesystem::path& path, const std::vector<PipRow>& rows,
                           const std::string& hash) {
    nlohmann::json j = detail::json_envelope("qpip-pip-1", hash);
    for (const auto& r : rows) {
        j["rows"].push_back(
            {{"t", r.t},
             {"n_f", r.point.n_fragment},
             {"f", r.point.fraction},
             {"mi_mean", r.point.mean_mi},
             {"mi_stderr", r.point.std_error},
             {"n_samples", r.point.n_samples},
             {"method", r.point.method == PipMethod::exact ? "exact" : "monte_carlo"},
             {"ceiling", r.ceiling}});
    }
    detail::dump_json(path, j);
}

}  // namespace qpip
