// test_run.cpp — whole workflows: trajectory tables, pip files, validate
// report, and file-level determinism.
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "qpip/run.hpp"

namespace fs = std::filesystem;

namespace {

qpip::RunConfig basic_config(std::vector<double> times, int realizations = 1) {
    qpip::RunConfig config;
    config.params = testutil::params_n10();
    config.times = std::move(times);
    config.realizations = realizations;
    return config;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int count_data_rows(const std::string& csv) {
    int rows = 0;
    std::istringstream in(csv);
    std::string line;
    bool past_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!past_header) {  // column header
            past_header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("trajectory rows start at the pure maximal-coherence point", "[run]") {
    const auto config = basic_config({0.0, 5.0}, 2);
    const qpip::TrajectoryData data = qpip::compute_trajectory(config);
    REQUIRE(data.rows.size() == 4);  // 2 realizations x 2 times
    REQUIRE(data.mean_rows.size() == 2);

    for (const auto& row : data.rows) {
        if (row.t != 0.0) continue;
        CHECK(std::abs(row.rho12) == Catch::Approx(0.5).margin(1e-12));
        CHECK(row.entropy_s < 1e-9);
        CHECK(row.master_abs_rho12 == Catch::Approx(0.5).margin(1e-12));
        CHECK(row.master_entropy < 1e-12);
    }
    CHECK(std::abs(data.mean_rows[0].rho12) == Catch::Approx(0.5).margin(1e-12));
    CHECK(data.mean_rows[0].entropy_s < 1e-9);
}

TEST_CASE("uncoupled runs keep full coherence forever", "[run]") {
    qpip::RunConfig config = basic_config({0.0, 2.0, 9.0});
    config.params.lambda = 0.0;
    config.params.n_levels = 4;
    const auto data = qpip::compute_trajectory(config);
    for (const auto& row : data.rows) {
        CHECK(std::abs(row.rho12) == Catch::Approx(0.5).margin(1e-12));
        CHECK(row.entropy_s < 1e-9);
        CHECK(row.master_abs_rho12 == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("realizations use independent coupling draws", "[run]") {
    const auto data = qpip::compute_trajectory(basic_config({5.0}, 2));
    REQUIRE(data.rows.size() == 2);
    CHECK(std::abs(data.rows[0].rho12 - data.rows[1].rho12) > 1e-6);
}

TEST_CASE("single-realization mean rows mirror the trajectory", "[run]") {
    const auto data = qpip::compute_trajectory(basic_config({0.0, 3.0, 7.5}));
    REQUIRE(data.mean_rows.size() == data.rows.size());
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        CHECK(std::abs(data.mean_rows[i].rho12 - data.rows[i].rho12) < 1e-15);
        CHECK(data.mean_rows[i].entropy_s ==
              Catch::Approx(data.rows[i].entropy_s).margin(1e-12));
    }
}

TEST_CASE("evolve emits deterministic, hash-stamped files", "[run]") {
    TempDir dir("qpip_run_test_evolve");
    qpip::RunConfig config = basic_config({0.0, 1.0, 5.0}, 2);
    config.output.prefix = (dir.path / "a" / "run").string();
    const auto first = qpip::run_evolve(config);
    REQUIRE(first.size() == 2);  // trajectory + mean

    config.output.prefix = (dir.path / "b" / "run").string();
    const auto second = qpip::run_evolve(config);

    const std::string traj_a = slurp(first[0]);
    const std::string traj_b = slurp(second[0]);
    CHECK(traj_a == traj_b);  // byte-identical
    CHECK(slurp(first[1]) == slurp(second[1]));

    CHECK(traj_a.rfind("# qpip ", 0) == 0);
    CHECK(traj_a.find("# schema qpip-trajectory-1") != std::string::npos);
    CHECK(traj_a.find("# config fnv1a64:" + qpip::config_hash_hex(config)) !=
          std::string::npos);
    CHECK(traj_a.find("seed_index,t,re_rho12,im_rho12,abs_rho12,entropy_s,"
                      "master_abs_rho12,master_entropy") != std::string::npos);
    CHECK(count_data_rows(traj_a) == 6);           // 2 realizations x 3 times
    CHECK(count_data_rows(slurp(first[1])) == 3);  // 3 times
}

TEST_CASE("json mirrors carry the same rows", "[run]") {
    TempDir dir("qpip_run_test_json");
    qpip::RunConfig config = basic_config({0.0, 4.0});
    config.output.prefix = (dir.path / "run").string();
    config.output.format = qpip::OutputFormat::json;
    const auto files = qpip::run_evolve(config);
    REQUIRE(files.size() == 2);  // csv + json (single realization: no mean)

    const nlohmann::json j = nlohmann::json::parse(slurp(files[1]));
    CHECK(j.at("schema") == "qpip-trajectory-1");
    CHECK(j.at("config") == "fnv1a64:" + qpip::config_hash_hex(config));
    REQUIRE(j.at("rows").size() == 2);
    CHECK(j.at("rows")[0].at("t") == 0.0);
    CHECK(j.at("rows")[0].at("abs_rho12").get<double>() == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("pip writes one file per convention with exact small-N points", "[run]") {
    TempDir dir("qpip_run_test_pip");
    qpip::RunConfig config = basic_config({0.0, 3.0});
    config.params.n_levels = 6;
    config.pip.conventions = {qpip::Convention::paper, qpip::Convention::pure_bipartite};
    config.output.prefix = (dir.path / "run").string();
    const auto files = qpip::run_pip(config);
    REQUIRE(files.size() == 2);
    CHECK(files[0].filename() == "run_pip_paper.csv");
    CHECK(files[1].filename() == "run_pip_pure-bipartite.csv");

    const std::string csv = slurp(files[0]);
    CHECK(csv.find("# schema qpip-pip-1") != std::string::npos);
    CHECK(csv.find("t,n_f,f,mi_mean,mi_stderr,n_samples,method,ceiling") != std::string::npos);
    CHECK(count_data_rows(csv) == 12);  // 2 times x 6 sizes
    CHECK(csv.find("monte_carlo") == std::string::npos);  // C(6,k) <= cap
}

TEST_CASE("pip rows saturate the ceiling at the full fragment", "[run]") {
    qpip::RunConfig config = basic_config({3.0});
    config.params.n_levels = 6;
    const auto data = qpip::compute_pip(config);
    REQUIRE(data.size() == 1);
    REQUIRE(data[0].rows.size() == 6);
    const auto& last = data[0].rows.back();
    CHECK(last.point.n_fragment == 6);
    CHECK(last.point.mean_mi == Catch::Approx(last.ceiling).margin(1e-9));
}

TEST_CASE("pip output is independent of the thread count", "[run]") {
    // N = 30 with a tiny cap forces Monte Carlo on every interior size.
    qpip::RunConfig config = basic_config({4.0});
    config.params.n_levels = 30;
    config.pip.enumeration_cap = 100;
    config.pip.max_samples = 2000;
    config.pip.stderr_tol = 1e-9;

    qpip::RunConfig threaded = config;
    threaded.threads = 4;

    const auto serial = qpip::compute_pip(config);
    const auto parallel = qpip::compute_pip(threaded);
    REQUIRE(serial[0].rows.size() == parallel[0].rows.size());
    for (std::size_t i = 0; i < serial[0].rows.size(); ++i) {
        CHECK(serial[0].rows[i].point.mean_mi == parallel[0].rows[i].point.mean_mi);
        CHECK(serial[0].rows[i].point.std_error == parallel[0].rows[i].point.std_error);
        CHECK(serial[0].rows[i].point.n_samples == parallel[0].rows[i].point.n_samples);
    }
}

TEST_CASE("validate reports the regime verdict", "[run]") {
    std::ostringstream out;
    qpip::run_validate(basic_config({0.0, 1.0}), out);
    const std::string report = out.str();
    CHECK(report.find("n_levels     = 10") != std::string::npos);
    CHECK(report.find("gamma") != std::string::npos);
    CHECK(report.find("c1") != std::string::npos);
    CHECK(report.find("applicable") != std::string::npos);
    CHECK(report.find("config hash fnv1a64:") != std::string::npos);

    std::ostringstream decoupled_out;
    qpip::RunConfig decoupled = basic_config({0.0});
    decoupled.params.lambda = 0.0;
    qpip::run_validate(decoupled, decoupled_out);
    CHECK(decoupled_out.str().find("decouple") != std::string::npos);

    std::ostringstream outside_out;
    qpip::RunConfig outside = basic_config({0.0});
    outside.params.lambda = 0.5;  // c2 = 50: far outside
    qpip::run_validate(outside, outside_out);
    CHECK(outside_out.str().find("outside") != std::string::npos);
}

TEST_CASE("unwritable output prefixes are reported as config errors", "[run]") {
    qpip::RunConfig config = basic_config({0.0});
    config.output.prefix = "/proc/definitely/not/writable/run";
    CHECK_THROWS_AS(qpip::run_evolve(config), std::invalid_argument);
}
