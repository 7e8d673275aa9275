#pragma once

#include <functional>

#include <Eigen/Dense>

#include "rdreg/sturm_liouville.hpp"
#include "rdreg/tail.hpp"

namespace rdreg {

// Which boundary is measured / regulated.
enum class Scenario {
    DirichletMeasDirichletReg, // measure z(t,0), regulate z(t,0); Neumann-Dirichlet domain
    NeumannMeasNeumannReg,     // measure z_x(t,0), regulate z_x(t,0); Dirichlet-Dirichlet domain
    DirichletMeasNeumannReg,   // measure z(t,0), regulate z_x(t,1); Neumann-Dirichlet domain
};

struct PlantSpec {
    CoefficientFunction p, q;
    double q_c{0.0};
    Scenario scenario{Scenario::DirichletMeasNeumannReg};

    BoundaryDomain domain() const {
        return scenario == Scenario::NeumannMeasNeumannReg ? BoundaryDomain::DirichletDirichlet
                                                           : BoundaryDomain::NeumannDirichlet;
    }
};

struct LiftedInputs {
    std::function<double(double)> a, b, lift;
    double meas_offset{0.0}, reg_offset{0.0};
};

LiftedInputs lifted_inputs(const PlantSpec& plant);

// Solves the eigenproblem for the plant's domain with a and b as projectees.
SpectralBasis solve_plant_basis(const PlantSpec& plant, int n_max, int grid_points);

// Smallest N0 >= 1 with -lambda_n + q_c < -delta for all n >= N0+1.
int select_N0(const PlantSpec& plant, const SpectralBasis& basis, double delta);

struct TailConstants {
    double alpha0{0.0}, beta0{0.0}, alpha1{0.0}, M1_phi{0.0}, M2_phi{0.0};
    double epsilon{0.125};
    double alpha0_bound{0.0}, beta0_bound{0.0}, alpha1_bound{0.0}, M1_bound{0.0}, M2_bound{0.0};
};

// Per-mode series data shared by the tail constants, the equilibrium
// reconstruction and the simulator's static tail feedthrough. Modes up to
// n_exact come from the eigensolve; fitted models extend beyond.
struct SeriesTable {
    int n_exact{0};
    long long tail_horizon{2000};
    double reg_const{0.0}; // the 0 / 1 / 2 constant in alpha0
    double rel_disc{0.0};  // relative discretization error over the fit window
    Eigen::ArrayXd lam, a, b, c, d, den; // den = -lambda + q_c
    Eigen::ArrayXd ta_reg, tb_reg, ta_meas, m1t, m2t;
    TailModel mod_ta_reg, mod_tb_reg, mod_ta_meas, mod_m1, mod_m2;

    struct Val {
        double value{0.0}, bound{0.0};
    };
    // sum over n >= from of the given per-mode series (exact + model tail)
    Val sum(const Eigen::ArrayXd& t, const TailModel& m, int from) const;
    Val sum_ta_reg(int from) const { return sum(ta_reg, mod_ta_reg, from); }
    Val sum_tb_reg(int from) const { return sum(tb_reg, mod_tb_reg, from); }
    Val sum_ta_meas(int from) const { return sum(ta_meas, mod_ta_meas, from); }
};

struct BuildOptions {
    double delta{0.5};
    long long tail_horizon{2000};
    double epsilon{0.125}; // M2_phi exponent parameter
    double tail_tol{1e300};
};

TailConstants tail_constants(const PlantSpec& plant, const SpectralBasis& basis, int N0, int N,
                             long long tail_horizon, double epsilon = 0.125, double tol = 1e300);

struct ReducedModel {
    Scenario scenario{Scenario::DirichletMeasNeumannReg};
    int N0{1}, N{2};
    double q_c{0.0}, delta{0.5};
    double meas_offset{0.0}, reg_offset{0.0};
    double aL2{0.0}, bL2{0.0}; // ||a||_{L2}^2, ||b||_{L2}^2
    SeriesTable series;
    TailConstants tc;
    double alpha1{0.0};

    Eigen::MatrixXd A0, A2, A1, F, F1, G;
    Eigen::VectorXd B0a, B0b, B2a, B2b, B1, Br, Lcal, Lcal_r;
    Eigen::RowVectorXd C0, C1, C0star, D0; // D0: regulated trace row in A1
    Eigen::RowVectorXd K;
    Eigen::VectorXd L;
    double g{0.0};
    int i1{0}, i2{0}, i3{0}, i4{0}; // block offsets in F

    // static tail feedthrough sum_{n>M} trace_n a_n / (lambda_n - q_c)
    double tail_reg_feedthrough(int M) const { return -series.sum_ta_reg(M + 1).value; }
    double tail_meas_feedthrough(int M) const { return -series.sum_ta_meas(M + 1).value; }
};

ReducedModel build_reduced_matrices(const PlantSpec& plant, const SpectralBasis& basis, int N0,
                                    int N, const Eigen::RowVectorXd& K, const Eigen::VectorXd& L,
                                    const BuildOptions& opts = {});

} // namespace rdreg
