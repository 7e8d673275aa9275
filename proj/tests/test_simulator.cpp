#include <doctest.h>

#include <cmath>

#include "rdreg/simulator.hpp"

using namespace rdreg;

namespace {
const double pi = std::acos(-1.0);

PlantSpec bench_plant(Scenario scen = Scenario::DirichletMeasNeumannReg) {
    return PlantSpec{CoefficientFunction::constant(1.0), CoefficientFunction::constant(0.0), 3.0,
                     scen};
}

const SpectralBasis& cached_basis() {
    static SpectralBasis nd = solve_plant_basis(bench_plant(), 525, 4201);
    return nd;
}

GainSet bench_gains() {
    GainSet gs;
    gs.K.resize(3);
    gs.K << -10.4134, -11.3747, 2.3100;
    gs.L.resize(1);
    gs.L << 1.4373;
    gs.delta = 0.5;
    return gs;
}

ReducedModel bench_model(int N = 3) {
    auto gs = bench_gains();
    return build_reduced_matrices(bench_plant(), cached_basis(), 1, N, gs.K, gs.L);
}

GridFunction poly_ic(const SpectralBasis& basis, double mode_amp, double omega) {
    // x^2 plus a cosine that keeps z'(0) = 0 and z(1) = 1
    GridFunction z0;
    z0.grid = basis.grid;
    z0.v.resize(z0.grid.points);
    for (int i = 0; i < z0.grid.points; ++i) {
        const double x = z0.grid.x(i);
        z0.v[i] = x * x + mode_amp * std::sqrt(2.0) * std::cos(omega * x);
    }
    return z0;
}
} // namespace

TEST_CASE("zero data gives the zero trajectory") {
    auto md = bench_model();
    SimConfig cfg;
    cfg.M = 10;
    cfg.horizon = 1.0;
    cfg.r = ReferenceSignal::constant(0.0);
    GridFunction z0;
    z0.grid = cached_basis().grid;
    z0.v = Eigen::ArrayXd::Zero(z0.grid.points);
    cfg.z0 = z0;
    auto tr = simulate(md, bench_gains(), cached_basis(), cfg);
    CHECK(tr.w.cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.y_r.cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.energy.maxCoeff() == 0.0);
}

TEST_CASE("benchmark fixture tracks the unit reference") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg; // M = 50, horizon 20, fixed RK4, r = 1, z0 = x^2
    auto tr = simulate(md, gs, cached_basis(), cfg);
    const int S = static_cast<int>(tr.t.size());
    CHECK(std::fabs(tr.y_r[S - 1] - 1.0) <= 1e-3);

    auto eq = solve_equilibrium(md, gs, 1.0);
    auto metrics = fit_decay_metrics(tr, 0.5, eq);
    CHECK_FALSE(metrics.fit_skipped);
    CHECK(metrics.fitted_rate <= -0.45); // -0.9 delta
    CHECK(metrics.steady_error <= 1e-3);

    // u is the integral of v
    for (int i = 1; i + 1 < S; i += 50) {
        const double du = (tr.u[i + 1] - tr.u[i - 1]) / (tr.t[i + 1] - tr.t[i - 1]);
        CHECK(du == doctest::Approx(tr.v[i]).epsilon(1e-2));
    }
    // reconstructed boundary value z(t,1) = u(t) by construction of the lift
    CHECK(std::fabs(tr.u[S - 1] - eq.u_e) <= 1e-8);
}

TEST_CASE("open-loop divergence at the dominant-mode rate") {
    GainSet zero;
    zero.K = Eigen::RowVectorXd::Zero(3);
    zero.L = Eigen::VectorXd::Zero(1);
    auto md = build_reduced_matrices(bench_plant(), cached_basis(), 1, 3, zero.K, zero.L);
    SimConfig cfg;
    cfg.M = 10;
    cfg.horizon = 10.0;
    cfg.r = ReferenceSignal::constant(0.0);
    cfg.z0 = poly_ic(cached_basis(), 0.3, pi / 2.0);
    cfg.u0 = 1.0;
    cfg.u0_given = true;
    auto tr = simulate(md, zero, cached_basis(), cfg);
    const int S = static_cast<int>(tr.t.size());
    const int j = S - 1 - S / 4;
    const double rate = std::log(std::fabs(tr.w(S - 1, 0) / tr.w(j, 0))) /
                        (tr.t[S - 1] - tr.t[j]);
    const double expect = 3.0 - pi * pi / 4.0; // q_c - lambda_1
    CHECK(rate == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("observer error is autonomous and integrates at order 4") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg;
    cfg.M = 6;
    cfg.horizon = 2.0;
    cfg.z0 = poly_ic(cached_basis(), 0.3, 3.0 * pi / 2.0); // excites mode 2
    auto zero_tr = simulate(md, gs, cached_basis(), cfg);
    // default z0 = x^2 gives zero shifted modes, so Etilde stays zero
    SimConfig triv;
    triv.M = 6;
    triv.horizon = 1.0;
    CHECK(observer_error_check(simulate(md, gs, cached_basis(), triv), md) == 0.0);

    cfg.step = 2e-3;
    auto t1 = simulate(md, gs, cached_basis(), cfg);
    cfg.step = 1e-3;
    auto t2 = simulate(md, gs, cached_basis(), cfg);
    const double d1 = observer_error_check(t1, md);
    const double d2 = observer_error_check(t2, md);
    CHECK(d1 > 0.0);
    const double order = std::log2(d1 / d2);
    CHECK(order >= 3.5);
    // deviation stays at integration-tolerance level
    CHECK(observer_error_check(zero_tr, md) <= 1e-8);
}

TEST_CASE("fixed-step convergence of order >= 4") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg;
    cfg.M = 6;
    cfg.horizon = 2.0;
    cfg.z0 = poly_ic(cached_basis(), 0.2, 3.0 * pi / 2.0);
    auto y_at = [&](double h) {
        cfg.step = h;
        auto tr = simulate(md, gs, cached_basis(), cfg);
        return tr.y_r[tr.t.size() - 1];
    };
    const double y1 = y_at(4e-3), y2 = y_at(2e-3), y3 = y_at(1e-3);
    const double d1 = std::fabs(y1 - y2), d2 = std::fabs(y2 - y3);
    CHECK(d1 > 0.0);
    CHECK(std::log2(d1 / d2) >= 3.5);
}

TEST_CASE("modal truncation is converged at M = 50") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg;
    cfg.horizon = 5.0;
    cfg.M = 50;
    auto a = simulate(md, gs, cached_basis(), cfg);
    cfg.M = 80;
    auto b = simulate(md, gs, cached_basis(), cfg);
    CHECK(std::fabs(a.y_r.cwiseAbs().maxCoeff() - b.y_r.cwiseAbs().maxCoeff()) <=
          0.01 * a.y_r.cwiseAbs().maxCoeff());
}

TEST_CASE("adaptive integration matches the fixed-step result") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg;
    cfg.horizon = 5.0;
    auto fixed = simulate(md, gs, cached_basis(), cfg);
    cfg.step_mode = StepMode::Adaptive;
    cfg.adaptive_tol = 1e-9;
    auto adap = simulate(md, gs, cached_basis(), cfg);
    CHECK(adap.y_r[adap.t.size() - 1] ==
          doctest::Approx(fixed.y_r[fixed.t.size() - 1]).epsilon(1e-5));
}

TEST_CASE("piecewise reference is tracked step by step") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg;
    cfg.horizon = 20.0;
    cfg.r = ReferenceSignal::schedule({{0.0, 1.0}, {10.0, 2.0}});
    auto tr = simulate(md, gs, cached_basis(), cfg);
    const int S = static_cast<int>(tr.t.size());
    CHECK(std::fabs(tr.y_r[S - 1] - 2.0) <= 1e-3);
    int mid = 0;
    while (tr.t[mid] < 10.0) ++mid;
    CHECK(std::fabs(tr.y_r[mid - 1] - 1.0) <= 1e-3);
}

TEST_CASE("error paths") {
    auto md = bench_model();
    auto gs = bench_gains();
    SimConfig cfg;
    cfg.M = 3; // < N + 1
    CHECK_THROWS_AS(simulate(md, gs, cached_basis(), cfg), ConfigError);

    SimConfig bad;
    bad.z0.grid = cached_basis().grid;
    bad.z0.v.resize(bad.z0.grid.points);
    for (int i = 0; i < bad.z0.grid.points; ++i) bad.z0.v[i] = bad.z0.grid.x(i); // z'(0) = 1
    CHECK_THROWS_AS(simulate(md, gs, cached_basis(), bad), IncompatibleInitialCondition);

    SimConfig u0bad;
    u0bad.u0 = 0.5; // but z0(1) = 1
    u0bad.u0_given = true;
    CHECK_THROWS_AS(simulate(md, gs, cached_basis(), u0bad), IncompatibleInitialCondition);

    // unstable open loop overflows and reports it
    GainSet zero;
    zero.K = Eigen::RowVectorXd::Zero(3);
    zero.L = Eigen::VectorXd::Zero(1);
    auto md0 = build_reduced_matrices(bench_plant(), cached_basis(), 1, 3, zero.K, zero.L);
    SimConfig ol;
    ol.M = 6;
    ol.horizon = 80.0;
    ol.r = ReferenceSignal::constant(0.0);
    ol.z0 = poly_ic(cached_basis(), 0.3, pi / 2.0);
    CHECK_THROWS_AS(simulate(md0, zero, cached_basis(), ol), InstabilityOverflow);
}

TEST_CASE("decay metric edge cases") {
    auto md = bench_model();
    auto gs = bench_gains();
    // zero equilibrium with zero data: the fit is skipped
    SimConfig cfg;
    cfg.M = 10;
    cfg.horizon = 1.0;
    cfg.r = ReferenceSignal::constant(0.0);
    GridFunction z0;
    z0.grid = cached_basis().grid;
    z0.v = Eigen::ArrayXd::Zero(z0.grid.points);
    cfg.z0 = z0;
    auto tr = simulate(md, gs, cached_basis(), cfg);
    auto eq = solve_equilibrium(md, gs, 0.0);
    auto m = fit_decay_metrics(tr, 0.5, eq);
    CHECK(m.fit_skipped);

    // far-from-converged window: no usable transient samples
    SimConfig shorty;
    shorty.M = 10;
    shorty.horizon = 1e-3;
    auto eq1 = solve_equilibrium(md, gs, 1.0);
    CHECK_THROWS_AS(fit_decay_metrics(simulate(md, gs, cached_basis(), shorty), 0.5, eq1),
                    WindowTooShort);
}
