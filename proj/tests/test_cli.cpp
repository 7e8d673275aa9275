#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    static fs::path d = [] {
        fs::path p = fs::temp_directory_path() / "rdreg_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

struct RunResult {
    int rc{0};
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const fs::path log = work_dir() / "stdout.txt";
    const std::string cmd =
        std::string(RDREG_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.rc = WEXITSTATUS(status);
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = work_dir() / name;
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small basis so subprocess runs stay fast; plenty for exit-code checks
const char* kFixtureHead = R"({
  "schema_version": 1,
  "plant": {"p": 1.0, "q": 0.0, "q_c": 3.0, "scenario": "dirichlet_meas_neumann_reg"},
  "eig": {"n_max": 60, "grid_points": 1201},
)";

} // namespace

TEST_CASE("cli: eig reports the spectrum") {
    auto cfg = write_config("eig.json", std::string(kFixtureHead) +
                                            R"("design": {"delta": 0.5}})");
    const fs::path out = work_dir() / "eig";
    auto r = run_cli("eig --config " + cfg.string() + " --out " + out.string());
    CHECK(r.rc == 0);
    const std::string rep = slurp(out / "report.json");
    CHECK(rep.find("2.467") != std::string::npos); // lambda_1 = pi^2/4 + ...
    CHECK(rep.find("\"band_ok_all\": true") != std::string::npos);
}

TEST_CASE("cli: design certifies the benchmark gains at N = 3") {
    auto cfg = write_config("design.json",
                            std::string(kFixtureHead) +
                                R"("design": {"delta": 0.5, "N": 3,
                                   "K": [-10.4134, -11.3747, 2.31], "L": [1.4373]}})");
    const fs::path out = work_dir() / "design";
    auto r = run_cli("design --config " + cfg.string() + " --out " + out.string());
    CHECK(r.rc == 0);
    const std::string rep = slurp(out / "report.json");
    CHECK(rep.find("\"N0\": 1") != std::string::npos);
    CHECK(rep.find("\"feasible\": true") != std::string::npos);
    CHECK(rep.find("\"toolkit_version\"") != std::string::npos);

    // identical config => bit-identical report
    const fs::path out2 = work_dir() / "design2";
    auto r2 = run_cli("design --config " + cfg.string() + " --out " + out2.string());
    CHECK(r2.rc == 0);
    CHECK(slurp(out2 / "report.json") == rep);
}

TEST_CASE("cli: simulate writes trajectory and metrics") {
    auto cfg = write_config("sim.json",
                            std::string(kFixtureHead) +
                                R"("design": {"delta": 0.5, "N": 3,
                                   "K": [-10.4134, -11.3747, 2.31], "L": [1.4373]},
                                   "simulate": {"M": 8, "horizon": 6.0, "r": 0.0,
                                                "z0_poly": [0.0], "snapshot_rows": 5}})");
    const fs::path out = work_dir() / "sim";
    auto r = run_cli("simulate --config " + cfg.string() + " --out " + out.string());
    CHECK(r.rc == 0);
    // r = 0 and z0 = 0: every data column of the trajectory is exactly zero
    std::ifstream traj(out / "trajectory.csv");
    std::string line;
    std::getline(traj, line);
    CHECK(line.rfind("t,u,xi,y_m,y_r,r,err,energy,w_1", 0) == 0);
    int rows = 0;
    bool all_zero = true;
    while (std::getline(traj, line)) {
        ++rows;
        const auto comma = line.find(',');
        for (size_t i = comma + 1; i < line.size(); ++i)
            all_zero = all_zero && (line[i] == '0' || line[i] == ',');
    }
    CHECK(all_zero);
    CHECK(rows > 100);
    CHECK(fs::exists(out / "snapshot.csv"));
    const std::string rep = slurp(out / "report.json");
    CHECK(rep.find("\"fit_skipped\": true") != std::string::npos);
}

TEST_CASE("cli: reproduce-paper prints the acceptance summary") {
    const fs::path out = work_dir() / "paper";
    auto r = run_cli("reproduce-paper --out " + out.string());
    CHECK(r.rc == 0);
    CHECK(r.out.find("PASS: N0 = 1") != std::string::npos);
    CHECK(r.out.find("PASS: certificate feasible at N = 3") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(out / "report.json"));
}

TEST_CASE("cli: exit codes") {
    // 2: malformed JSON
    auto bad = write_config("bad.json", "{ not json");
    CHECK(run_cli("design --config " + bad.string()).rc == 2);

    // 2: n_max beyond what the grid resolves
    auto coarse = write_config("coarse.json", R"({
        "plant": {"p": 1.0, "q": 0.0, "q_c": 3.0, "scenario": "dirichlet_meas_neumann_reg"},
        "eig": {"n_max": 300, "grid_points": 101}})");
    CHECK(run_cli("eig --config " + coarse.string()).rc == 2);

    // 2: M < N + 1 rejected before integration
    auto small_m = write_config("small_m.json",
                                std::string(kFixtureHead) +
                                    R"("design": {"delta": 0.5, "N": 3,
                                       "K": [-10.4134, -11.3747, 2.31], "L": [1.4373]},
                                       "simulate": {"M": 3}})");
    CHECK(run_cli("simulate --config " + small_m.string()).rc == 2);

    // 3: no feasible certificate for an over-ambitious decay rate
    auto infeasible = write_config("infeasible.json",
                                   std::string(kFixtureHead) +
                                       R"("design": {"delta": 5.0, "N_max": 4}})");
    CHECK(run_cli("design --config " + infeasible.string()).rc == 3);

    // 4: Cauchy condition fails at q_c = pi^2
    auto cauchy = write_config("cauchy.json", R"({
        "plant": {"p": 1.0, "q": 0.0, "q_c": 9.869604401089358,
                  "scenario": "dirichlet_meas_neumann_reg"},
        "eig": {"n_max": 60, "grid_points": 1201},
        "design": {"delta": 0.5}})");
    CHECK(run_cli("design --config " + cauchy.string()).rc == 4);

    // 2: unknown scenario string
    auto scen = write_config("scen.json", R"({
        "plant": {"p": 1.0, "q": 0.0, "q_c": 3.0, "scenario": "sideways"}})");
    CHECK(run_cli("eig --config " + scen.string()).rc == 2);
}
