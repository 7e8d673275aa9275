#include "rdreg/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rdreg/errors.hpp"

namespace rdreg {

namespace {

Eigen::MatrixXd kalman_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& B) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd C(n, n);
    Eigen::VectorXd col = B;
    for (int j = 0; j < n; ++j) {
        C.col(j) = col;
        col = A * col;
    }
    return C;
}

double max_real_eig(const Eigen::MatrixXd& A) {
    Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < ev.size(); ++i) m = std::max(m, ev[i].real());
    return m;
}

// Real coefficients of prod_k (s - t_k), highest power first.
Eigen::VectorXd real_poly(const std::vector<std::complex<double>>& targets) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& t : targets) {
        c.push_back(0.0);
        for (size_t j = c.size() - 1; j > 0; --j) c[j] -= t * c[j - 1];
    }
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    Eigen::VectorXd out(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        if (std::fabs(c[i].imag()) > 1e-9 * (1.0 + scale))
            throw ConfigError("pole targets are not closed under conjugation");
        out[i] = c[i].real();
    }
    return out;
}

// Solve A^T P + P A = -Q for symmetric Q via complex Schur of A.
Eigen::MatrixXd lyap_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
    using CMat = Eigen::MatrixXcd;
    const int n = static_cast<int>(A.rows());
    Eigen::ComplexSchur<CMat> schur(A.cast<std::complex<double>>());
    if (schur.info() != Eigen::Success) throw SolveSingular("Schur decomposition failed");
    const CMat T = schur.matrixT();
    const CMat U = schur.matrixU();
    CMat C = -(U.transpose() * Q.cast<std::complex<double>>() * U);
    CMat Y = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXcd rhs = C.col(k);
        for (int j = 0; j < k; ++j) rhs -= T(j, k) * Y.col(j);
        CMat M = T.transpose();
        M.diagonal().array() += T(k, k);
        // lower triangular forward solve
        for (int i = 0; i < n; ++i) {
            std::complex<double> s = rhs[i];
            for (int j = 0; j < i; ++j) s -= M(i, j) * Y(j, k);
            if (std::abs(M(i, i)) < 1e-300) throw SolveSingular("singular Lyapunov pivot");
            Y(i, k) = s / M(i, i);
        }
    }
    Eigen::MatrixXd P = (U.conjugate() * Y * U.adjoint()).real();
    return 0.5 * (P + P.transpose());
}

// Measurement rows of the quadratic form: G = Cm^T Cm.
Eigen::MatrixXd quad_rows(const ReducedModel& md) {
    const int dim = static_cast<int>(md.F.rows());
    Eigen::MatrixXd Cm = Eigen::MatrixXd::Zero(2, dim);
    Cm(0, 0) = std::sqrt(md.aL2);
    Cm.row(1).head(md.i1) = std::sqrt(md.bL2) * md.K;
    return Cm;
}

struct ScalarTriple {
    double alpha, beta, gamma;
};

ScalarTriple proof_schedule(Scenario scen, int N) {
    const double Nd = static_cast<double>(N);
    if (scen == Scenario::NeumannMeasNeumannReg)
        return {std::pow(Nd, 0.125), std::pow(Nd, 0.125), std::pow(Nd, -3.0 / 16.0)};
    return {std::sqrt(Nd), std::sqrt(Nd), 1.0 / Nd};
}

struct CareResult {
    Eigen::MatrixXd P;
    bool ok{false};
};

// A^T P + P A + P R P + Q = 0 via the stable invariant subspace of the
// Hamiltonian [[A, R], [-Q, -A^T]].
CareResult care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& R,
                      const Eigen::MatrixXd& Q) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd H(2 * n, 2 * n);
    H << A, R, -Q, -A.transpose();
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) return {};
    Eigen::MatrixXcd V(2 * n, n);
    int k = 0;
    for (int i = 0; i < 2 * n; ++i) {
        if (es.eigenvalues()[i].real() < 0.0) {
            if (k == n) return {};
            V.col(k++) = es.eigenvectors().col(i);
        }
    }
    if (k != n) return {};
    Eigen::MatrixXcd U = V.topRows(n), W = V.bottomRows(n);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(U);
    if (!lu.isInvertible()) return {};
    Eigen::MatrixXd P = (W * lu.inverse()).real();
    return {0.5 * (P + P.transpose()), true};
}

double lyap_residual_of(const Eigen::MatrixXd& F1, double delta, const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    return (F1.transpose() * P + P * F1 + 2.0 * delta * P + Eigen::MatrixXd::Identity(n, n))
        .norm();
}

} // namespace

ControllabilityReport check_controllability(const Eigen::MatrixXd& A, const Eigen::VectorXd& B) {
    if (A.rows() != A.cols() || B.size() != A.rows())
        throw DimensionMismatch("controllability check needs square A and matching B");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(kalman_matrix(A, B));
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    return {smin > 1e-10 * s[0], smin};
}

double check_cauchy_condition(const PlantSpec& plant) {
    // backward RK4 on f' = g/p, g' = -(q_c - q) f from x = 1
    const int steps = 20000;
    const double h = -1.0 / steps;
    double f = 1.0, g = 0.0, x = 1.0;
    auto rhs = [&](double xi, double fi, double gi, double& df, double& dg) {
        df = gi / plant.p(xi);
        dg = -(plant.q_c - plant.q(xi)) * fi;
    };
    for (int i = 0; i < steps; ++i) {
        double k1f, k1g, k2f, k2g, k3f, k3g, k4f, k4g;
        rhs(x, f, g, k1f, k1g);
        rhs(x + h / 2, f + h / 2 * k1f, g + h / 2 * k1g, k2f, k2g);
        rhs(x + h / 2, f + h / 2 * k2f, g + h / 2 * k2g, k3f, k3g);
        rhs(x + h, f + h * k3f, g + h * k3g, k4f, k4g);
        f += h / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
        g += h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
        x += h;
        if (!std::isfinite(f) || !std::isfinite(g))
            throw IntegrationFailure("Cauchy shooting diverged");
    }
    return std::fabs(g / plant.p(0.0));
}

Eigen::RowVectorXd place_poles(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                               const std::vector<std::complex<double>>& targets) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || B.size() != n || static_cast<int>(targets.size()) != n)
        throw DimensionMismatch("place_poles needs square A, matching B and n targets");
    Eigen::MatrixXd C = kalman_matrix(A, B);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    const auto& s = svd.singularValues();
    if (s[n - 1] <= 1e-10 * s[0]) throw Uncontrollable("Kalman matrix is rank deficient");
    if (s[0] / s[n - 1] > 1e12)
        throw IllConditioned("controllability matrix condition number " +
                             std::to_string(s[0] / s[n - 1]));
    const Eigen::VectorXd p = real_poly(targets);
    Eigen::MatrixXd phiA = Eigen::MatrixXd::Zero(n, n);
    phiA.diagonal().array() = p[0];
    for (int i = 1; i <= n; ++i) {
        phiA = phiA * A;
        phiA.diagonal().array() += p[i];
    }
    Eigen::RowVectorXd K = -(C.transpose().partialPivLu().solve(
                                 Eigen::VectorXd::Unit(n, n - 1)))
                                .transpose() *
                           phiA;
    // verify the assignment
    Eigen::VectorXcd got = Eigen::EigenSolver<Eigen::MatrixXd>(A + B * K, false).eigenvalues();
    std::vector<std::complex<double>> want = targets;
    auto key = [](const std::complex<double>& z1, const std::complex<double>& z2) {
        return z1.real() != z2.real() ? z1.real() < z2.real() : z1.imag() < z2.imag();
    };
    std::sort(want.begin(), want.end(), key);
    std::vector<std::complex<double>> gv(got.data(), got.data() + got.size());
    std::sort(gv.begin(), gv.end(), key);
    for (int i = 0; i < n; ++i)
        if (std::abs(gv[i] - want[i]) > 1e-6 * (1.0 + std::abs(want[i])))
            throw IllConditioned("pole assignment drifted beyond tolerance");
    return K;
}

Eigen::VectorXd design_L(const Eigen::MatrixXd& A0, const Eigen::RowVectorXd& C0,
                         const std::vector<std::complex<double>>& targets) {
    // duality: A0 - L C0 = (A0^T + C0^T Kd)^T with L = -Kd^T
    Eigen::RowVectorXd Kd = place_poles(A0.transpose(), C0.transpose(), targets);
    return -Kd.transpose();
}

GainSet default_gains(const PlantSpec& plant, const SpectralBasis& basis, int N0, double delta,
                      const BuildOptions& opts) {
    auto md = build_reduced_matrices(plant, basis, N0, N0 + 1,
                                     Eigen::RowVectorXd::Zero(N0 + 2), Eigen::VectorXd::Zero(N0),
                                     opts);
    auto capped = [](std::vector<double> spec, std::vector<double> open_loop) {
        std::sort(spec.begin(), spec.end());
        std::sort(open_loop.begin(), open_loop.end());
        std::vector<std::complex<double>> t(spec.size());
        for (size_t i = 0; i < spec.size(); ++i) t[i] = std::min(spec[i], open_loop[i]);
        return t;
    };
    std::vector<double> ctrl_spec, ctrl_ol;
    for (int k = 1; k <= N0 + 2; ++k) ctrl_spec.push_back(-delta - k);
    Eigen::VectorXcd evA1 = Eigen::EigenSolver<Eigen::MatrixXd>(md.A1, false).eigenvalues();
    for (int i = 0; i < evA1.size(); ++i) ctrl_ol.push_back(evA1[i].real());
    std::vector<double> obs_spec, obs_ol;
    for (int k = 1; k <= N0; ++k) obs_spec.push_back(-3.0 * delta - (k - 1));
    for (int i = 0; i < N0; ++i) obs_ol.push_back(md.A0(i, i));

    GainSet gs;
    gs.delta = delta;
    gs.K = place_poles(md.A1, md.B1, capped(ctrl_spec, ctrl_ol));
    gs.L = design_L(md.A0, md.C0, capped(obs_spec, obs_ol));
    gs.ctrl_poles =
        Eigen::EigenSolver<Eigen::MatrixXd>(md.A1 + md.B1 * gs.K, false).eigenvalues();
    gs.obs_poles =
        Eigen::EigenSolver<Eigen::MatrixXd>(md.A0 - gs.L * md.C0, false).eigenvalues();
    return gs;
}

Eigen::MatrixXd solve_shifted_lyapunov(const Eigen::MatrixXd& F1, double delta) {
    if (F1.rows() != F1.cols()) throw DimensionMismatch("F1 must be square");
    const int n = static_cast<int>(F1.rows());
    Eigen::MatrixXd A = F1 + delta * Eigen::MatrixXd::Identity(n, n);
    if (max_real_eig(A) >= 0.0) throw NotHurwitz("F1 + delta I has an unstable eigenvalue");
    Eigen::MatrixXd P = lyap_solve(A, Eigen::MatrixXd::Identity(n, n));
    if (lyap_residual_of(F1, delta, P) > 1e-8 * (1.0 + P.norm()))
        throw SolveSingular("Lyapunov residual above tolerance");
    return P;
}

double evaluate_theta(const ReducedModel& md, const Eigen::MatrixXd& P, double alpha, double beta,
                      double gamma, double delta) {
    const int dim = static_cast<int>(md.F.rows());
    if (P.rows() != dim || P.cols() != dim)
        throw DimensionMismatch("P does not match the model dimension");
    if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0))
        throw ConfigError("alpha, beta, gamma must be positive");
    Eigen::MatrixXd Theta(dim + 1, dim + 1);
    Eigen::MatrixXd core =
        md.F.transpose() * P + P * md.F + 2.0 * delta * P + alpha * gamma * md.G;
    Theta.topLeftCorner(dim, dim) = core;
    Theta.topRightCorner(dim, 1) = P * md.Lcal;
    Theta.bottomLeftCorner(1, dim) = (P * md.Lcal).transpose();
    Theta(dim, dim) = -beta;
    Theta = 0.5 * (Theta + Theta.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Theta);
    const double theta_max = es.eigenvalues().maxCoeff();
    // Schur-complement cross-check
    Eigen::MatrixXd S = core + (P * md.Lcal) * (md.Lcal.transpose() * P) / beta;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(0.5 * (S + S.transpose()));
    const bool v1 = theta_max < 0.0;
    const bool v2 = es2.eigenvalues().maxCoeff() < 0.0;
    const double scale = 1.0 + Theta.norm();
    if (v1 != v2 && std::fabs(theta_max) > 1e-10 * scale &&
        std::fabs(es2.eigenvalues().maxCoeff()) > 1e-10 * scale)
        throw IllConditioned("Theta feasibility verdicts disagree between forms");
    return theta_max;
}

double evaluate_gamma_margin(const ReducedModel& md, double alpha, double beta, double gamma,
                             double epsilon, double delta) {
    if (!(alpha > 1.0)) throw AlphaTooSmall("gamma margin reduction needs alpha > 1");
    if (!(beta > 0.0 && gamma > 0.0)) throw ConfigError("beta, gamma must be positive");
    if (md.N >= md.series.n_exact)
        throw ResolutionTooCoarse("basis does not reach mode N+1");
    const double lamN1 = md.series.lam[md.N];
    if (md.scenario == Scenario::NeumannMeasNeumannReg) {
        if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ConfigError("epsilon must lie in (0, 1/2]");
        const double kappa =
            beta * md.tc.M2_phi / (2.0 * gamma * std::pow(lamN1, 0.5 - epsilon));
        const double slope = 1.0 / alpha - 1.0 + kappa;
        if (slope > 0.0) return std::numeric_limits<double>::infinity();
        return -(1.0 - 1.0 / alpha - kappa) * lamN1 + md.q_c + delta;
    }
    return -lamN1 + md.q_c + delta + lamN1 / alpha + beta * md.tc.M1_phi / (2.0 * gamma);
}

double hinf_norm_sq(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                    const Eigen::MatrixXd& C) {
    const int n = static_cast<int>(A.rows());
    if (max_real_eig(A) >= 0.0) throw NotHurwitz("H-infinity norm needs a Hurwitz A");
    Eigen::MatrixXcd Ac = A.cast<std::complex<double>>();
    double g = 0.0;
    for (int i = -1; i < 120; ++i) {
        const double w = i < 0 ? 0.0 : std::pow(10.0, -3.0 + 8.0 * i / 119.0);
        Eigen::MatrixXcd M = std::complex<double>(0.0, w) * Eigen::MatrixXcd::Identity(n, n) - Ac;
        Eigen::MatrixXcd T = C.cast<std::complex<double>>() *
                             M.partialPivLu().solve(B.cast<std::complex<double>>());
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T);
        g = std::max(g, svd.singularValues()[0]);
    }
    double lo = g * 0.999, hi = 3.0 * g + 1.0;
    const Eigen::MatrixXd BBt = B * B.transpose();
    const Eigen::MatrixXd CtC = C.transpose() * C;
    for (int it = 0; it < 60; ++it) {
        const double gm = 0.5 * (lo + hi);
        Eigen::MatrixXd H(2 * n, 2 * n);
        H << A, BBt / gm, -CtC / gm, -A.transpose();
        Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(H, false).eigenvalues();
        bool on_axis = false;
        for (int i = 0; i < ev.size(); ++i)
            if (std::fabs(ev[i].real()) < 1e-9 * std::max(1.0, std::abs(ev[i]))) on_axis = true;
        if (on_axis)
            lo = gm;
        else
            hi = gm;
    }
    return hi * hi;
}

DesignCertificate certify_at(const ReducedModel& md) {
    DesignCertificate cert;
    cert.N = md.N;
    cert.delta = md.delta;
    cert.epsilon = md.tc.epsilon;
    cert.theta_max_eig = std::numeric_limits<double>::infinity();
    cert.gamma_n_margin = std::numeric_limits<double>::infinity();

    const int dim = static_cast<int>(md.F.rows());
    const double delta = md.delta;
    Eigen::MatrixXd P_lyap;
    try {
        P_lyap = solve_shifted_lyapunov(md.F1, delta);
    } catch (const NotHurwitz&) {
        return cert; // gains do not even stabilize the decoupled part
    }
    cert.lyap_residual = lyap_residual_of(md.F1, delta, P_lyap);

    // proof schedule with a local log-scale grid (3 points per decade)
    const ScalarTriple s0 = proof_schedule(md.scenario, md.N);
    const double step = std::pow(10.0, 1.0 / 3.0);
    for (int ia = -1; ia <= 1; ++ia) {
        for (int ib = -1; ib <= 1; ++ib) {
            for (int ig = -1; ig <= 1; ++ig) {
                const double al = s0.alpha * std::pow(step, ia);
                const double be = s0.beta * std::pow(step, ib);
                const double ga = s0.gamma * std::pow(step, ig);
                if (al <= 1.0) continue;
                const double th = evaluate_theta(md, P_lyap, al, be, ga, delta);
                const double gm = evaluate_gamma_margin(md, al, be, ga, md.tc.epsilon, delta);
                if (std::max(th, gm) < std::max(cert.theta_max_eig, cert.gamma_n_margin)) {
                    cert.alpha = al;
                    cert.beta = be;
                    cert.gamma = ga;
                    cert.theta_max_eig = th;
                    cert.gamma_n_margin = gm;
                    cert.P = P_lyap;
                }
                if (th < 0.0 && gm <= 0.0) {
                    cert.feasible = true;
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(P_lyap);
                    cert.p_min_eig = pe.eigenvalues().minCoeff();
                    cert.p_max_eig = pe.eigenvalues().maxCoeff();
                    return cert;
                }
            }
        }
    }

    // Riccati construction: Theta < 0 for some P iff F + delta I is Hurwitz
    // and the scaled H-infinity bound holds (strict bounded-real lemma)
    Eigen::MatrixXd A = md.F + delta * Eigen::MatrixXd::Identity(dim, dim);
    if (max_real_eig(A) >= 0.0) return cert;
    const Eigen::MatrixXd Cm = quad_rows(md);
    const double h2 = hinf_norm_sq(A, md.Lcal, Cm);
    const double lamN1 = md.series.lam[md.N];
    const double gap = lamN1 - md.q_c - delta;
    if (gap <= 0.0) return cert;
    double Mc = md.tc.M1_phi;
    if (md.scenario == Scenario::NeumannMeasNeumannReg)
        Mc = md.tc.M2_phi / std::pow(lamN1, 0.5 - md.tc.epsilon);
    const double alpha = 2.0 * lamN1 / gap;
    const double S = lamN1 * (1.0 - 1.0 / alpha) - md.q_c - delta;
    if (h2 * alpha * Mc >= 2.0 * S) return cert; // no compatible (beta, gamma)
    const double ratio = std::sqrt(h2 * alpha * 2.0 * S / Mc);
    const double gamma = 1.0 / md.N;
    const double beta = ratio * gamma;

    const Eigen::MatrixXd R = md.Lcal * md.Lcal.transpose() / beta;
    for (double eps_reg : {0.02, 0.005, 0.001, 1e-6}) {
        const Eigen::MatrixXd Q = alpha * gamma * md.G +
                                  eps_reg * Eigen::MatrixXd::Identity(dim, dim);
        Eigen::MatrixXd P;
        if (md.Lcal.norm() == 0.0) {
            P = lyap_solve(A, Q);
        } else {
            auto cr = care_solve(A, R, Q);
            if (!cr.ok) continue;
            P = cr.P;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(P);
        if (pe.eigenvalues().minCoeff() <= 0.0) continue;
        const double th = evaluate_theta(md, P, alpha, beta, gamma, delta);
        if (th >= 0.0) continue;
        const double gm = evaluate_gamma_margin(md, alpha, beta, gamma, md.tc.epsilon, delta);
        cert.alpha = alpha;
        cert.beta = beta;
        cert.gamma = gamma;
        cert.P = P;
        cert.theta_max_eig = th;
        cert.gamma_n_margin = gm;
        cert.p_min_eig = pe.eigenvalues().minCoeff();
        cert.p_max_eig = pe.eigenvalues().maxCoeff();
        cert.feasible = gm <= 0.0;
        return cert;
    }
    return cert;
}

DesignCertificate find_minimal_N(const PlantSpec& plant, const SpectralBasis& basis,
                                 const GainSet& gains, double delta, int N_max,
                                 const BuildOptions& opts) {
    const int N0 = static_cast<int>(gains.L.size());
    if (gains.K.size() != N0 + 2) throw DimensionMismatch("K and L imply different N0");
    if (N_max < N0 + 1) throw ConfigError("N_max must be at least N0 + 1");
    double best_theta = std::numeric_limits<double>::infinity();
    double best_gamma = std::numeric_limits<double>::infinity();
    for (int N = N0 + 1; N <= N_max; ++N) {
        BuildOptions o = opts;
        o.delta = delta;
        auto md = build_reduced_matrices(plant, basis, N0, N, gains.K, gains.L, o);
        auto cert = certify_at(md);
        if (cert.feasible) return cert;
        best_theta = std::min(best_theta, cert.theta_max_eig);
        best_gamma = std::min(best_gamma, cert.gamma_n_margin);
    }
    throw NotFeasibleUpToNMax("no feasible certificate up to N = " + std::to_string(N_max) +
                              " (best theta " + std::to_string(best_theta) + ", best gamma " +
                              std::to_string(best_gamma) + ")");
}

} // namespace rdreg
