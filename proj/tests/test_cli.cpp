// End-to-end tests of the CLI surface: exit codes, file outputs, error
// payloads, and the config round-trip contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    json stderr_json; // empty object when stderr was empty
    fs::path dir;
};

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::current_path() / "cli_work" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& name, const std::string& args,
                  const std::string& config_text) {
    CliResult result;
    result.dir = fresh_dir(name);
    const fs::path cfg = result.dir / "run.cfg";
    {
        std::ofstream out(cfg);
        out << config_text;
    }
    const fs::path err_file = result.dir / "stderr.txt";
    std::ostringstream cmd;
    cmd << SEMICLASSIC_BIN << " " << args << " --config " << cfg << " --out " << result.dir
        << " 2> " << err_file << " > /dev/null";
    const int status = std::system(cmd.str().c_str());
    result.code = WEXITSTATUS(status);

    std::ifstream err(err_file);
    std::string line;
    std::getline(err, line);
    result.stderr_json = line.empty() ? json::object() : json::parse(line);
    return result;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

const std::string kFreeBvp = "n = 1\n"
                             "mass = 1.0\n"
                             "potential.kind = free\n"
                             "problem.x0 = 0.0\n"
                             "problem.x1 = 1.0\n"
                             "problem.t0 = 0.0\n"
                             "problem.t1 = 1.0\n";

} // namespace

TEST_CASE("path: free fixture converges with S = 1/2") {
    CliResult r = run_cli("path_free", "path", kFreeBvp);
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "path_summary.json");
    CHECK(summary["S"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(summary["y0"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(summary["converged"].get<bool>());
    // trajectory CSV exists with a header
    std::ifstream csv(r.dir / "path.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "tau,x1,y1,S_partial");
}

TEST_CASE("path: harmonic quarter-turn action") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.0\npotential.kind = harmonic\npotential.omega = 1.0\n"
        << "problem.x0 = 0.0\nproblem.x1 = 1.0\nproblem.t1 = " << M_PI / 4 << "\n";
    CliResult r = run_cli("path_ho", "path", cfg.str());
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "path_summary.json");
    CHECK(summary["S"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("path: negative mass is a config error naming the key") {
    CliResult r = run_cli("path_bad", "path",
                          "mass = -1.0\npotential.kind = free\n"
                          "problem.x0 = 0\nproblem.x1 = 1\nproblem.t1 = 1\n");
    CHECK(r.code == 3);
    CHECK(r.stderr_json["error"]["type"] == "ConfigError");
    CHECK(r.stderr_json["error"]["key"] == "mass");
}

TEST_CASE("detj: harmonic scan finds pi/2 for omega = 2") {
    CliResult r = run_cli("detj_ho", "detj",
                          "mass = 1.0\npotential.kind = harmonic\npotential.omega = 2.0\n"
                          "problem.x0 = 1.0\nproblem.y0 = 0.0\nproblem.t1 = 2.0\n"
                          "numerics.scan_points = 200\n");
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "detj_summary.json");
    REQUIRE(summary["focal_times"].size() == 1);
    CHECK(summary["focal_times"][0].get<double>() ==
          doctest::Approx(M_PI / 2).epsilon(1e-8));
    // fundamental-matrix dump: identity blocks H and P at sin(2 t1) = sin(4)
    json phi = read_json(r.dir / "phi_t1.json");
    CHECK(phi["n"].get<int>() == 1);
    CHECK(phi["phi"].size() == 4);
    CHECK(phi["blocks"]["J"][0].get<double>() ==
          doctest::Approx(std::sin(4.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("detj: free particle has an empty focal list") {
    CliResult r = run_cli("detj_free", "detj",
                          "mass = 1.0\npotential.kind = free\n"
                          "problem.x0 = 0.0\nproblem.y0 = 1.0\nproblem.t1 = 5.0\n");
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "detj_summary.json");
    CHECK(summary["focal_times"].empty());
    CHECK_FALSE(summary["grid_too_coarse"].get<bool>());
}

TEST_CASE("detj: coarse grids are a warning, not an error") {
    CliResult r = run_cli("detj_coarse", "detj",
                          "mass = 1.0\npotential.kind = harmonic\npotential.omega = 40\n"
                          "problem.x0 = 1.0\nproblem.y0 = 0.0\nproblem.t1 = 2.0\n"
                          "numerics.scan_points = 5\n");
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "detj_summary.json");
    CHECK(summary["grid_too_coarse"].get<bool>());
}

TEST_CASE("kernel: free fixture modulus (2 pi)^(-1/2)") {
    CliResult r = run_cli("kernel_free", "kernel", kFreeBvp);
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "kernel.json");
    CHECK(summary["modulus"].get<double>() == doctest::Approx(0.39894).epsilon(1e-4));
}

TEST_CASE("kernel: harmonic oracle deviation below 1e-8") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.0\npotential.kind = harmonic\npotential.omega = 1.0\n"
        << "problem.x0 = 0.0\nproblem.x1 = 1.0\nproblem.t1 = " << M_PI / 4 << "\n";
    CliResult r = run_cli("kernel_oracle", "kernel --oracle", cfg.str());
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "kernel.json");
    CHECK(summary["oracle"]["deviation_rel"].get<double>() < 1e-8);
}

TEST_CASE("kernel: focal time exits 4 with the offending time") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.0\npotential.kind = harmonic\npotential.omega = 1.0\n"
        << "problem.x0 = 0.0\nproblem.x1 = 0.0\nproblem.t1 = " << M_PI << "\n";
    CliResult r = run_cli("kernel_focal", "kernel", cfg.str());
    CHECK(r.code == 4);
    CHECK(r.stderr_json["error"]["type"] == "FocalPoint");
    CHECK(r.stderr_json["error"]["tau"].get<double>() == doctest::Approx(M_PI));
}

TEST_CASE("kernel: endpoint grid CSV") {
    CliResult r = run_cli("kernel_grid", "kernel",
                          kFreeBvp + "kernel.grid.x_min = -1\nkernel.grid.x_max = 1\n"
                                     "kernel.grid.n = 11\n");
    REQUIRE(r.code == 0);
    std::ifstream csv(r.dir / "kernel_grid.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 12); // header + 11 samples
}

TEST_CASE("kernel: anharmonic endpoint grid takes the per-pair route") {
    CliResult r = run_cli("kernel_grid_quartic", "kernel",
                          "n = 1\nmass = 1.0\npotential.kind = quartic\n"
                          "potential.lambda = 0.3\n"
                          "problem.x0 = 0.8\nproblem.x1 = 0.3\nproblem.t1 = 0.4\n"
                          "kernel.grid.x_min = 0.0\nkernel.grid.x_max = 0.6\n"
                          "kernel.grid.n = 5\n");
    REQUIRE(r.code == 0);
    std::ifstream csv(r.dir / "kernel_grid.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);
}

TEST_CASE("evolve: coherent state fixture matches the closed form") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.0\npotential.kind = harmonic\npotential.omega = 1.0\n"
        << "problem.t0 = 0.0\nnumerics.hbar = 1.0\n"
        << "evolve.x_min = -8\nevolve.x_max = 8\nevolve.n_points = 1024\n"
        << "evolve.center = 1.0\nevolve.sigma = 1.0\n"
        << "evolve.times = " << M_PI / 4 << ", " << M_PI / 2 << "\n";
    CliResult r = run_cli("evolve_coherent", "evolve", cfg.str());
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "evolve_summary.json");
    REQUIRE(summary["times"].size() == 2);
    for (const auto& entry : summary["times"]) {
        CHECK(entry["oracle_l2_error"].get<double>() < 1e-3);
        CHECK(entry["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK(fs::exists(r.dir / "evolve_000.csv"));
    CHECK(fs::exists(r.dir / "evolve_001.csv"));
}

TEST_CASE("evolve: free Gaussian spreading width") {
    CliResult r = run_cli("evolve_free", "evolve",
                          "n = 1\nmass = 1.0\npotential.kind = free\n"
                          "problem.t0 = 0.0\nnumerics.hbar = 1.0\n"
                          "evolve.x_min = -20\nevolve.x_max = 20\nevolve.n_points = 2048\n"
                          "evolve.center = 0.0\nevolve.sigma = 1.0\n"
                          "evolve.times = 1.0\n");
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "evolve_summary.json");
    const double width = summary["times"][0]["width_rms"].get<double>();
    const double oracle = summary["times"][0]["oracle_width"].get<double>();
    CHECK(width == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(summary["times"][0]["oracle_l2_error"].get<double>() < 1e-4);
}

TEST_CASE("evolve: --strict escalates a boundary leak") {
    const std::string cfg = "n = 1\nmass = 1.0\npotential.kind = free\n"
                            "problem.t0 = 0.0\nnumerics.hbar = 1.0\n"
                            "evolve.x_min = -3\nevolve.x_max = 3\nevolve.n_points = 256\n"
                            "evolve.center = 0.0\nevolve.sigma = 1.0\n"
                            "evolve.times = 0.5\n";
    CliResult lax = run_cli("evolve_leak_lax", "evolve", cfg);
    CHECK(lax.code == 0);
    CliResult strict = run_cli("evolve_leak_strict", "evolve --strict", cfg);
    CHECK(strict.code == 2);
    CHECK(strict.stderr_json["error"]["type"] == "BoundaryLeak");
}

TEST_CASE("reduce: harmonic fixture equivalence below 1e-8") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.0\npotential.kind = harmonic\npotential.omega = 1.0\n"
        << "problem.x0 = 0.0\nproblem.x1 = 1.0\nproblem.t1 = " << M_PI / 4 << "\n";
    CliResult r = run_cli("reduce_ho", "reduce", cfg.str());
    REQUIRE(r.code == 0);
    json summary = read_json(r.dir / "reduce_summary.json");
    CHECK(summary["rel_deviation"].get<double>() < 1e-8);
    CHECK(summary["picard_vessiot"]["elementary_known"].get<bool>());
}

TEST_CASE("reduce: quartic gauge structure from the CSV") {
    CliResult r = run_cli("reduce_quartic", "reduce",
                          "n = 1\nmass = 1.0\npotential.kind = quartic\n"
                          "potential.lambda = 1.0\n"
                          "problem.x0 = 1.0\nproblem.y0 = -1.2\nproblem.t1 = 0.6\n");
    REQUIRE(r.code == 0);
    std::ifstream csv(r.dir / "reduce.csv");
    std::string line;
    std::getline(csv, line); // header
    double worst = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> cols;
        while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
        REQUIRE(cols.size() == 10);
        worst = std::max({worst, std::abs(cols[5]), std::abs(cols[6]), std::abs(cols[8])});
        ++rows;
    }
    CHECK(rows == 50);
    CHECK(worst < 1e-9);
    json summary = read_json(r.dir / "reduce_summary.json");
    CHECK_FALSE(summary["picard_vessiot"]["elementary_known"].get<bool>());
}

TEST_CASE("reduce: a turning point in the interval exits 4") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.0\npotential.kind = harmonic\npotential.omega = 1.0\n"
        << "problem.x0 = 0.0\nproblem.x1 = 1.0\nproblem.t1 = " << 3.0 * M_PI / 4 << "\n";
    CliResult r = run_cli("reduce_turning", "reduce", cfg.str());
    CHECK(r.code == 4);
    CHECK(r.stderr_json["error"]["type"] == "TurningPointInInterval");
}

TEST_CASE("round-trip: the emitted config echo reproduces the run") {
    std::ostringstream cfg;
    cfg << std::setprecision(17) << "n = 1\nmass = 1.3\npotential.kind = harmonic\npotential.omega = 1.7\n"
        << "problem.x0 = -0.4\nproblem.x1 = 0.9\nproblem.t1 = 0.8\n"
        << "numerics.hbar = 0.6\n";
    CliResult first = run_cli("roundtrip_a", "kernel", cfg.str());
    REQUIRE(first.code == 0);
    json a = read_json(first.dir / "kernel.json");

    std::ostringstream echoed;
    for (const auto& [k, v] : a["config"].items())
        echoed << k << " = " << v.get<std::string>() << "\n";
    CliResult second = run_cli("roundtrip_b", "kernel", echoed.str());
    REQUIRE(second.code == 0);
    json b = read_json(second.dir / "kernel.json");
    // bit-identical numerics under identical tolerances
    CHECK(a["re"].get<double>() == b["re"].get<double>());
    CHECK(a["im"].get<double>() == b["im"].get<double>());
    CHECK(a["action"].get<double>() == b["action"].get<double>());
    CHECK(a["det_j"].get<double>() == b["det_j"].get<double>());
}
