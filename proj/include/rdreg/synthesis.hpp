#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rdreg/spectral_model.hpp"

namespace rdreg {

struct GainSet {
    Eigen::RowVectorXd K; // length N0+2
    Eigen::VectorXd L;    // length N0
    double delta{0.5};
    Eigen::VectorXcd ctrl_poles; // eig(A1 + B1 K)
    Eigen::VectorXcd obs_poles;  // eig(A0 - L C0)
};

struct ControllabilityReport {
    bool ok{false};
    double margin{0.0}; // smallest singular value of the Kalman matrix
};

ControllabilityReport check_controllability(const Eigen::MatrixXd& A, const Eigen::VectorXd& B);

// |f'(0)| for the backward Cauchy problem (p f')' + (q_c - q) f = 0,
// f(1) = 1, f'(1) = 0. The boundary regulation map is invertible iff nonzero.
double check_cauchy_condition(const PlantSpec& plant);

Eigen::RowVectorXd place_poles(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                               const std::vector<std::complex<double>>& targets);

Eigen::VectorXd design_L(const Eigen::MatrixXd& A0, const Eigen::RowVectorXd& C0,
                         const std::vector<std::complex<double>>& targets);

// Pole targets -delta-k (controller) and -3delta-k+1 (observer), each capped
// by the corresponding open-loop eigenvalue so already-fast modes are kept.
GainSet default_gains(const PlantSpec& plant, const SpectralBasis& basis, int N0, double delta,
                      const BuildOptions& opts = {});

// P > 0 with F1^T P + P F1 + 2 delta P = -I (F1 + delta I must be Hurwitz).
Eigen::MatrixXd solve_shifted_lyapunov(const Eigen::MatrixXd& F1, double delta);

// Max eigenvalue of Theta = [[F^T P + P F + 2 delta P + alpha gamma G, P Lcal],
//                            [Lcal^T P, -beta]]; cross-checked against the
// Schur-complement form.
double evaluate_theta(const ReducedModel& model, const Eigen::MatrixXd& P, double alpha,
                      double beta, double gamma, double delta);

// Worst Gamma_n over n >= N+1 via the affine-in-lambda reduction.
double evaluate_gamma_margin(const ReducedModel& model, double alpha, double beta, double gamma,
                             double epsilon, double delta);

struct DesignCertificate {
    int N{0};
    Eigen::MatrixXd P;
    double alpha{0.0}, beta{0.0}, gamma{0.0}, epsilon{0.125}, delta{0.5};
    double theta_max_eig{0.0};
    double gamma_n_margin{0.0};
    bool feasible{false};
    double p_min_eig{0.0}, p_max_eig{0.0};
    double lyap_residual{0.0}; // residual of the F1-shifted Lyapunov solve
};

// Certificate attempt at the model's fixed N: the proof's scalar schedule with
// the Lyapunov P first, then a Riccati-based construction.
DesignCertificate certify_at(const ReducedModel& model);

DesignCertificate find_minimal_N(const PlantSpec& plant, const SpectralBasis& basis,
                                 const GainSet& gains, double delta, int N_max,
                                 const BuildOptions& opts = {});

// Squared H-infinity norm of C (sI - A)^{-1} B (A Hurwitz).
double hinf_norm_sq(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C);

} // namespace rdreg
