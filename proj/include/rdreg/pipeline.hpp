#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rdreg/simulator.hpp"

namespace rdreg {

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Fully resolved run configuration (defaults applied on load).
struct RunConfig {
    PlantSpec plant;

    // design block
    double delta{0.5};
    int N_max{20};
    int N_fixed{0}; // 0 -> search for the minimal feasible N
    bool gains_given{false};
    Eigen::RowVectorXd K;
    Eigen::VectorXd L;

    // eig block
    int n_max{525};
    int grid_points{4201};
    int report_modes{20};

    // certify block
    long long tail_horizon{2000};
    double epsilon{0.125};

    // simulate block
    SimConfig sim;
    std::vector<double> z0_poly; // initial profile as a polynomial in x; empty -> x^2
    int snapshot_rows{0};        // 0 disables the z(t, x) snapshot file

    // output block
    std::string out_dir{"."};
    std::string report_name{"report.json"};
    std::string trajectory_name{"trajectory.csv"};
    std::string snapshot_name{"snapshot.csv"};

    // raw resolved-config JSON, embedded in every report
    std::string resolved_json;
};

RunConfig load_config(const std::string& path);
RunConfig paper_config(); // the built-in reproduction fixture

int cmd_eig(const RunConfig& config);
int cmd_design(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_reproduce_paper(const RunConfig& config);

// Dispatch + exception-to-exit-code mapping: 0 ok, 2 config, 3 infeasible,
// 4 Kalman/Cauchy condition failure, 5 simulation failure, 1 anything else.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir);

} // namespace rdreg
