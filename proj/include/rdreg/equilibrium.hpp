#pragma once

#include <Eigen/Dense>

#include "rdreg/spectral_model.hpp"
#include "rdreg/synthesis.hpp"

namespace rdreg {

struct EquilibriumState {
    Scenario scenario{Scenario::DirichletMeasNeumannReg};
    int N0{1}, N{2};
    double q_c{0.0};
    double r_e{0.0};
    double u_e{0.0}, xi_e{0.0}, v_e{0.0};
    Eigen::VectorXd what_e;  // observer equilibrium, length N
    Eigen::VectorXd w_modal; // plant modal coefficients up to the solved band
    double y_e{0.0};
    double y_tail_bound{0.0};
    double trace_tail_corr{0.0}; // regulated-trace series remainder past the solved band
    bool slow_convergence{false};
    Eigen::VectorXd eq_residuals; // one entry per equilibrium equation line
    double max_residual{0.0};
};

// Unique closed-loop equilibrium for a constant reference.
EquilibriumState solve_equilibrium(const ReducedModel& model, const GainSet& gains, double r_e);

struct ProfileReport {
    GridFunction z_e;
    double regulated_trace;   // z_e(0) or z_e'(0 or 1) per scenario
    double static_residual;   // max interior |(p z')' + (q_c - q) z|
    double residual_bound;    // series-truncation estimate for the above
};

ProfileReport equilibrium_profile(const EquilibriumState& state, const SpectralBasis& basis);

} // namespace rdreg
