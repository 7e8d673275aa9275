#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rdreg/equilibrium.hpp"
#include "rdreg/spectral_model.hpp"
#include "rdreg/synthesis.hpp"

namespace rdreg {

class ReferenceSignal {
public:
    static ReferenceSignal constant(double value);
    // right-continuous steps: value of the last (time, value) pair with time <= t
    static ReferenceSignal schedule(std::vector<std::pair<double, double>> steps);
    // linear interpolation of samples, clamped at the ends
    static ReferenceSignal sampled(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    bool is_constant() const { return kind_ == Kind::Constant; }

private:
    enum class Kind { Constant, Schedule, Sampled } kind_{Kind::Constant};
    double value_{0.0};
    std::vector<double> times_, values_;
};

enum class StepMode { Fixed, Adaptive };

struct SimConfig {
    int M{50};              // retained plant modes
    double horizon{20.0};
    StepMode step_mode{StepMode::Fixed};
    double step{0.0};       // fixed step; 0 means the stiffness default
    double adaptive_tol{1e-8};
    ReferenceSignal r = ReferenceSignal::constant(1.0);
    GridFunction z0;        // empty -> x^2 (compatible in every scenario)
    double u0{0.0};
    bool u0_given{false};   // otherwise defaulted to z0(1)
    int store_max{4000};    // decimation target for stored samples
};

struct Trajectory {
    int M{0}, N{0}, N0{0};
    double step_used{0.0};
    Eigen::VectorXd t;
    Eigen::MatrixXd w;     // times x M
    Eigen::MatrixXd what;  // times x N
    Eigen::VectorXd u, xi, v, y_m, y_r, ytilde, zeta, r, err, energy;
};

Trajectory simulate(const ReducedModel& model, const GainSet& gains, const SpectralBasis& basis,
                    const SimConfig& config);

// Max over stored times of || Etilde(t) - exp(A2 t) Etilde(0) ||.
double observer_error_check(const Trajectory& traj, const ReducedModel& model);

struct DecayMetrics {
    double fitted_rate{0.0};
    double tracking_sup{0.0};
    double steady_error{0.0};
    bool fit_skipped{false};
};

DecayMetrics fit_decay_metrics(const Trajectory& traj, double delta,
                               const EquilibriumState& equilibrium);

} // namespace rdreg
