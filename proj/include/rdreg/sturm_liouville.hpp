#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rdreg/coefficient.hpp"
#include "rdreg/grid.hpp"

namespace rdreg {

// Boundary conditions for A f = -(p f')' + q f on [0,1].
enum class BoundaryDomain {
    DirichletDirichlet, // f(0) = f(1) = 0
    NeumannDirichlet,   // f'(0) = f(1) = 0
};

struct EigenPair {
    int n{0};           // 1-based index
    double lambda{0.0}; // Richardson-extrapolated eigenvalue
    double lambda_err{0.0};
    Eigen::ArrayXd phi; // samples on the quadrature grid, L2-normalized
    double trace0{0.0}, dtrace0{0.0}, trace1{0.0}, dtrace1{0.0};
};

struct SpectralBasis {
    BoundaryDomain domain{BoundaryDomain::NeumannDirichlet};
    CoefficientFunction p, q;
    double p_min{0.0}, p_max{0.0}, q_max{0.0};
    Grid grid; // quadrature (coarse) grid; the solve also uses the 2x refined grid
    std::vector<EigenPair> pairs;
    // projections[k][n-1] = <projectee_k, phi_n>, Richardson-extrapolated.
    std::vector<Eigen::ArrayXd> projections;

    int n_max() const { return static_cast<int>(pairs.size()); }
    double lambda(int n) const { return pairs.at(n - 1).lambda; } // 1-based
};

// Solves the eigenproblem with second-order self-adjoint finite differences on
// grid_points and 2*grid_points-1 nodes, Richardson-extrapolating eigenvalues,
// traces and the optional projections. phi is stored on the coarse grid.
SpectralBasis solve_eigenproblem(const CoefficientFunction& p, const CoefficientFunction& q,
                                 BoundaryDomain domain, int n_max, int grid_points,
                                 const std::vector<std::function<double(double)>>& projectees = {});

// <f, phi_n> by composite Simpson on the basis grid (1-based n).
double project(const GridFunction& f, const SpectralBasis& basis, int n);

// | sum_{n<=n_terms} lambda_n <f,phi_n>^2  -  int p (f')^2 + q f^2 |.
double energy_identity_residual(const GridFunction& f, const SpectralBasis& basis, int n_terms);

} // namespace rdreg
