#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rdreg/synthesis.hpp"

using namespace rdreg;

namespace {
const double pi = std::acos(-1.0);

PlantSpec bench_plant(Scenario scen = Scenario::DirichletMeasNeumannReg) {
    return PlantSpec{CoefficientFunction::constant(1.0), CoefficientFunction::constant(0.0), 3.0,
                     scen};
}

const SpectralBasis& cached_basis(Scenario scen) {
    static SpectralBasis nd = solve_plant_basis(bench_plant(), 525, 4201);
    static SpectralBasis dd =
        solve_plant_basis(bench_plant(Scenario::NeumannMeasNeumannReg), 525, 4201);
    return scen == Scenario::NeumannMeasNeumannReg ? dd : nd;
}

ReducedModel bench_model(int N) {
    Eigen::RowVectorXd K(3);
    K << -10.4134, -11.3747, 2.3100;
    Eigen::VectorXd L(1);
    L << 1.4373;
    return build_reduced_matrices(bench_plant(), cached_basis(Scenario::DirichletMeasNeumannReg), 1,
                                  N, K, L);
}

double max_re(const Eigen::VectorXcd& ev) {
    double m = -1e300;
    for (int i = 0; i < ev.size(); ++i) m = std::max(m, ev[i].real());
    return m;
}
} // namespace

TEST_CASE("controllability checks") {
    auto md = bench_model(3);
    CHECK(check_controllability(md.A1, md.B1).ok);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    CHECK_FALSE(check_controllability(A, Eigen::VectorXd::Unit(3, 0)).ok);

    Eigen::MatrixXd D = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
    CHECK(check_controllability(D, Eigen::Vector3d::Ones()).ok);
}

TEST_CASE("Cauchy condition of the regulated-trace map") {
    auto plant = bench_plant();
    // f(x) = cos(sqrt(3)(1-x)) so |f'(0)| = sqrt(3) sin(sqrt(3))
    CHECK(check_cauchy_condition(plant) ==
          doctest::Approx(std::sqrt(3.0) * std::sin(std::sqrt(3.0))).epsilon(1e-9));
    plant.q_c = pi * pi;
    CHECK(check_cauchy_condition(plant) <= 1e-6);
    plant.q_c = 0.0;
    CHECK(check_cauchy_condition(plant) <= 1e-10);
}

TEST_CASE("pole placement") {
    Eigen::MatrixXd A1(1, 1);
    A1 << 0.0;
    Eigen::VectorXd B1(1);
    B1 << 1.0;
    auto K1 = place_poles(A1, B1, {{-2.0, 0.0}});
    CHECK(K1[0] == doctest::Approx(-2.0));

    Eigen::MatrixXd A2 = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    Eigen::VectorXd B2 = Eigen::Vector2d::Ones();
    auto K2 = place_poles(A2, B2, {{-1.0, 0.0}, {-1.0, 0.0}});
    Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(A2 + B2 * K2).eigenvalues();
    CHECK(std::abs(ev[0] - std::complex<double>(-1.0, 0.0)) <= 2e-6);
    CHECK(std::abs(ev[1] - std::complex<double>(-1.0, 0.0)) <= 2e-6);

    auto md = bench_model(3);
    CHECK(max_re(Eigen::EigenSolver<Eigen::MatrixXd>(md.A1 + md.B1 * md.K).eigenvalues()) < -0.5);

    CHECK_THROWS_AS(place_poles(Eigen::MatrixXd::Zero(3, 3), Eigen::VectorXd::Unit(3, 0),
                                {{-1, 0}, {-2, 0}, {-3, 0}}),
                    Uncontrollable);
    CHECK_THROWS_AS(place_poles(A2, B2, {{-1.0, 0.5}, {-1.0, 0.4}}), ConfigError);
}

TEST_CASE("pole placement exactness on randomized instances") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int done = 0;
    while (done < 20) {
        const int n = 2 + int(rng() % 5); // 2..6
        Eigen::MatrixXd A(n, n);
        Eigen::VectorXd B(n);
        for (int i = 0; i < n; ++i) {
            B[i] = U(rng) + 1.5;
            for (int j = 0; j < n; ++j) A(i, j) = U(rng);
        }
        if (!check_controllability(A, B).ok) continue;
        std::vector<std::complex<double>> targets;
        for (int i = 0; i < n - 2; ++i) targets.push_back({-1.0 - i - 0.3 * U(rng), 0.0});
        targets.push_back({-2.5, 1.25});
        targets.push_back({-2.5, -1.25});
        Eigen::RowVectorXd K;
        try {
            K = place_poles(A, B, targets);
        } catch (const IllConditioned&) {
            continue; // skip badly conditioned random draws
        }
        CHECK(max_re(Eigen::EigenSolver<Eigen::MatrixXd>(A + B * K).eigenvalues()) < -0.5);
        ++done;
    }
}

TEST_CASE("observer gain by duality") {
    auto md = bench_model(3);
    auto L = design_L(md.A0, md.C0, {{-1.5, 0.0}});
    CHECK(L[0] == doctest::Approx(1.4373).epsilon(1e-3));
    CHECK(L[0] == doctest::Approx((3.0 - pi * pi / 4.0 + 1.5) / std::sqrt(2.0)).epsilon(1e-7));

    Eigen::MatrixXd A0(1, 1);
    A0 << 0.0;
    Eigen::RowVectorXd C0(1);
    C0 << 1.0;
    CHECK(design_L(A0, C0, {{-1.0, 0.0}})[0] == doctest::Approx(1.0));

    Eigen::MatrixXd A2 = Eigen::Vector2d(0.3, -0.2).asDiagonal();
    Eigen::RowVectorXd C2(2);
    C2 << 1.0, 1.0;
    auto L2 = design_L(A2, C2, {{-1.0, 0.0}, {-2.0, 0.0}});
    Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(A2 - L2 * C2).eigenvalues();
    std::vector<double> re{ev[0].real(), ev[1].real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(re[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("shifted Lyapunov solve") {
    Eigen::MatrixXd F1 = -Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd P = solve_shifted_lyapunov(F1, 0.0);
    CHECK((P - 0.5 * Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-12);

    Eigen::MatrixXd F2 = Eigen::Vector2d(-2.0, -3.0).asDiagonal();
    Eigen::MatrixXd P2 = solve_shifted_lyapunov(F2, 0.5);
    CHECK(P2(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(P2(1, 1) == doctest::Approx(1.0 / 5.0).epsilon(1e-12));
    CHECK(std::fabs(P2(0, 1)) <= 1e-14);

    auto md = bench_model(3);
    Eigen::MatrixXd P3 = solve_shifted_lyapunov(md.F1, 0.5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P3);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    Eigen::MatrixXd resid = md.F1.transpose() * P3 + P3 * md.F1 + 2.0 * 0.5 * P3 +
                            Eigen::MatrixXd::Identity(8, 8);
    CHECK(resid.norm() <= 1e-8 * (1.0 + P3.norm()));

    CHECK_THROWS_AS(solve_shifted_lyapunov(Eigen::MatrixXd::Identity(2, 2), 0.0), NotHurwitz);
}

TEST_CASE("Theta evaluation and Schur cross-check") {
    ReducedModel toy;
    toy.F = -Eigen::MatrixXd::Identity(2, 2);
    toy.F1 = toy.F;
    toy.G = Eigen::MatrixXd::Zero(2, 2);
    toy.Lcal = Eigen::VectorXd::Zero(2);
    toy.i1 = 1;
    double th = evaluate_theta(toy, Eigen::MatrixXd::Identity(2, 2), 2.0, 1.0, 1.0, 0.0);
    CHECK(th == doctest::Approx(-1.0)); // max(-2, -beta)

    // randomized instances: the internal verdict assertion must hold
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        const int n = 2 + int(rng() % 3);
        ReducedModel m;
        m.F.setZero(n, n);
        Eigen::MatrixXd Gh(n, n);
        Eigen::MatrixXd Ph(n, n);
        m.Lcal.resize(n);
        for (int i = 0; i < n; ++i) {
            m.Lcal[i] = U(rng);
            for (int j = 0; j < n; ++j) {
                m.F(i, j) = U(rng) - (i == j ? 2.0 : 0.0);
                Gh(i, j) = U(rng);
                Ph(i, j) = U(rng);
            }
        }
        m.G = Gh.transpose() * Gh;
        Eigen::MatrixXd P =
            Ph.transpose() * Ph + 0.1 * Eigen::MatrixXd::Identity(n, n);
        const double v = evaluate_theta(m, P, 1.5, 0.7, 0.9, 0.1);
        CHECK(std::isfinite(v));
    }

    CHECK_THROWS_AS(evaluate_theta(toy, Eigen::MatrixXd::Identity(3, 3), 2.0, 1.0, 1.0, 0.0),
                    DimensionMismatch);
}

TEST_CASE("gamma margin reduction matches brute force") {
    const double delta = 0.5;
    auto md5 = bench_model(3);
    const double al = 2.0, be = 1.7, ga = 0.3;
    const double margin = evaluate_gamma_margin(md5, al, be, ga, 0.125, delta);
    double worst = -1e300;
    for (int n = md5.N + 1; n <= md5.N + 500; ++n) {
        const double lam = cached_basis(md5.scenario).lambda(n);
        worst = std::max(worst, -lam + 3.0 + delta + lam / al + be * md5.tc.M1_phi / (2.0 * ga));
    }
    CHECK(margin == doctest::Approx(worst).epsilon(1e-12));

    // Neumann-trace majorant dominates the true Gamma_n and is tight at N+1
    Eigen::RowVectorXd K0 = Eigen::RowVectorXd::Zero(3);
    Eigen::VectorXd L0 = Eigen::VectorXd::Zero(1);
    auto md4 = build_reduced_matrices(bench_plant(Scenario::NeumannMeasNeumannReg),
                                      cached_basis(Scenario::NeumannMeasNeumannReg), 1, 3, K0, L0);
    const double m4 = evaluate_gamma_margin(md4, 40.0, 0.05, 1.0, 0.125, delta);
    double worst4 = -1e300, gamma_n1 = 0.0;
    for (int n = md4.N + 1; n <= md4.N + 500; ++n) {
        const double lam = cached_basis(md4.scenario).lambda(n);
        const double g = -lam + 3.0 + delta + lam / 40.0 +
                         0.05 * md4.tc.M2_phi / 2.0 * std::pow(lam, 0.5 + 0.125);
        if (n == md4.N + 1) gamma_n1 = g;
        worst4 = std::max(worst4, g);
    }
    CHECK(m4 >= worst4 - 1e-12);
    CHECK(m4 == doctest::Approx(gamma_n1).epsilon(1e-12));

    // limit alpha large, beta small: margin -> -lambda_{N+1} + q_c + delta < 0
    const double lim = evaluate_gamma_margin(md5, 1e9, 1e-12, 1.0, 0.125, delta);
    CHECK(lim == doctest::Approx(-cached_basis(md5.scenario).lambda(4) + 3.0 + delta)
                     .epsilon(1e-6));

    CHECK_THROWS_AS(evaluate_gamma_margin(md5, 0.9, 1.0, 1.0, 0.125, delta), AlphaTooSmall);
}

TEST_CASE("certificate at fixed N: benchmark fixture feasible at N = 3") {
    auto cert = certify_at(bench_model(3));
    REQUIRE(cert.feasible);
    CHECK(cert.theta_max_eig < 0.0);
    CHECK(cert.gamma_n_margin <= 0.0);
    CHECK(cert.p_min_eig > 0.0);
    // independent soundness: recompute Theta eigenvalue and brute-force Gamma_n
    auto md = bench_model(3);
    Eigen::MatrixXd P_lyap = solve_shifted_lyapunov(md.F1, cert.delta);
    CHECK(cert.lyap_residual <= 1e-8 * (1.0 + P_lyap.norm()));
    const double th = evaluate_theta(md, cert.P, cert.alpha, cert.beta, cert.gamma, cert.delta);
    CHECK(th < 0.0);
    for (int n = 4; n <= 503; ++n) {
        const double lam = cached_basis(md.scenario).lambda(n);
        CHECK(-lam + 3.0 + cert.delta + lam / cert.alpha +
                  cert.beta * md.tc.M1_phi / (2.0 * cert.gamma) <=
              1e-12);
    }
}

TEST_CASE("minimal-N search") {
    Eigen::RowVectorXd K(3);
    K << -10.4134, -11.3747, 2.3100;
    Eigen::VectorXd L(1);
    L << 1.4373;
    GainSet gs;
    gs.K = K;
    gs.L = L;
    gs.delta = 0.5;
    auto plant = bench_plant();
    const auto& basis = cached_basis(plant.scenario);
    auto cert = find_minimal_N(plant, basis, gs, 0.5, 20);
    CHECK(cert.feasible);
    CHECK(cert.N <= 3);

    // stable plant: feasible at small N with its default gains (Dirichlet
    // regulation; the Neumann-regulated variant is excluded at q_c = 0 by the
    // Cauchy condition, which also shows up as a vanishing Kalman margin)
    PlantSpec stable = bench_plant(Scenario::DirichletMeasDirichletReg);
    stable.q_c = 0.0;
    auto sbasis = solve_plant_basis(stable, 525, 4201);
    auto sg = default_gains(stable, sbasis, 1, 0.1);
    auto scert = find_minimal_N(stable, sbasis, sg, 0.1, 10);
    CHECK(scert.feasible);
    CHECK(scert.N <= 10);

    // delta far beyond the closed-loop margin: infeasible for every N
    CHECK_THROWS_AS(find_minimal_N(plant, basis, gs, 5.0, 4), NotFeasibleUpToNMax);
}

TEST_CASE("default gains per scenario") {
    for (Scenario scen : {Scenario::DirichletMeasDirichletReg, Scenario::NeumannMeasNeumannReg,
                          Scenario::DirichletMeasNeumannReg}) {
        auto plant = bench_plant(scen);
        const auto& basis = cached_basis(scen);
        auto gs = default_gains(plant, basis, 1, 0.5);
        CHECK(max_re(gs.ctrl_poles) < -0.5);
        CHECK(max_re(gs.obs_poles) < -0.5);
        auto cert = find_minimal_N(plant, basis, gs, 0.5, 20);
        CHECK(cert.feasible);
        CHECK(cert.N <= 20);
    }
}

TEST_CASE("C1 stays bounded as N grows") {
    Eigen::RowVectorXd K = Eigen::RowVectorXd::Zero(3);
    Eigen::VectorXd L = Eigen::VectorXd::Zero(1);
    auto plant = bench_plant();
    const auto& basis = cached_basis(plant.scenario);
    auto m1 = build_reduced_matrices(plant, basis, 1, 10, K, L);
    auto m2 = build_reduced_matrices(plant, basis, 1, 20, K, L);
    CHECK(std::fabs(m2.C1.norm() - m1.C1.norm()) <= 1.0);
}

TEST_CASE("H-infinity norm on a closed-form fixture") {
    // first-order lag 1/(s + a): peak at w = 0, norm 1/a
    Eigen::MatrixXd A(1, 1), B(1, 1), C(1, 1);
    A << -2.0;
    B << 1.0;
    C << 1.0;
    CHECK(hinf_norm_sq(A, B, C) == doctest::Approx(0.25).epsilon(1e-6));
    // lightly damped pair: |H|_inf of w0^2/(s^2+2 zeta w0 s + w0^2) = 1/(2 zeta sqrt(1-zeta^2))
    const double w0 = 3.0, zeta = 0.05;
    Eigen::MatrixXd A2(2, 2), B2(2, 1), C2(1, 2);
    A2 << 0.0, 1.0, -w0 * w0, -2.0 * zeta * w0;
    B2 << 0.0, w0 * w0;
    C2 << 1.0, 0.0;
    const double expect = 1.0 / (2.0 * zeta * std::sqrt(1.0 - zeta * zeta));
    CHECK(hinf_norm_sq(A2, B2, C2) == doctest::Approx(expect * expect).epsilon(1e-6));
}
