#include <doctest.h>

#include <cmath>

#include "rdreg/equilibrium.hpp"

using namespace rdreg;

namespace {

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
    return build_reduced_matrices(bench_plant(), cached_basis(Scenario::DirichletMeasNeumannReg), 1,
                                  N, gs.K, gs.L);
}
} // namespace

TEST_CASE("zero reference gives the zero equilibrium") {
    auto st = solve_equilibrium(bench_model(), bench_gains(), 0.0);
    CHECK(st.u_e == 0.0);
    CHECK(st.xi_e == 0.0);
    CHECK(st.y_e == 0.0);
    CHECK(st.w_modal.cwiseAbs().maxCoeff() == 0.0);

    auto rep = equilibrium_profile(st, cached_basis(st.scenario));
    CHECK(rep.z_e.v.abs().maxCoeff() == 0.0);
}

TEST_CASE("equilibrium map is linear in the reference") {
    auto md = bench_model();
    auto s1 = solve_equilibrium(md, bench_gains(), 0.7);
    auto s2 = solve_equilibrium(md, bench_gains(), 1.4);
    CHECK(std::fabs(s2.u_e - 2.0 * s1.u_e) <= 1e-12);
    CHECK(std::fabs(s2.xi_e - 2.0 * s1.xi_e) <= 1e-12);
    CHECK(std::fabs(s2.y_e - 2.0 * s1.y_e) <= 1e-12);
    CHECK((s2.w_modal - 2.0 * s1.w_modal).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("benchmark fixture equilibrium") {
    auto st = solve_equilibrium(bench_model(), bench_gains(), 1.0);
    // frozen from an independent closed-form evaluation
    CHECK(st.u_e == doctest::Approx(0.0939158).epsilon(1e-5));
    CHECK(st.xi_e == doctest::Approx(-1.5843629).epsilon(1e-5));
    CHECK(st.what_e[0] == doctest::Approx(-0.4077347).epsilon(1e-5));
    CHECK(std::fabs(st.v_e) <= 1e-10);
    CHECK(std::fabs(st.y_e - 1.0) <= 1e-8);
    CHECK(st.max_residual <= 1e-9);
    // observer equals the plant modes over the estimated band
    for (int n = 1; n <= st.N; ++n)
        CHECK(std::fabs(st.what_e[n - 1] - st.w_modal[n - 1]) <= 1e-10);
}

TEST_CASE("regulation identity across scenarios") {
    for (Scenario scen : {Scenario::DirichletMeasDirichletReg, Scenario::NeumannMeasNeumannReg,
                          Scenario::DirichletMeasNeumannReg}) {
        auto plant = bench_plant(scen);
        const auto& basis = cached_basis(scen);
        auto gs = scen == Scenario::DirichletMeasNeumannReg
                      ? bench_gains()
                      : default_gains(plant, basis, 1, 0.5);
        auto md = build_reduced_matrices(plant, basis, 1, 3, gs.K, gs.L);
        auto st = solve_equilibrium(md, gs, 1.0);
        CHECK(std::fabs(st.y_e - 1.0) <= 1e-6);
        CHECK(std::fabs(st.y_e - 1.0) <= st.y_tail_bound + 1e-12);
        CHECK(st.max_residual <= 1e-9);
    }
}

TEST_CASE("equilibrium profile") {
    auto st = solve_equilibrium(bench_model(), bench_gains(), 1.0);
    const auto& basis = cached_basis(st.scenario);
    auto rep = equilibrium_profile(st, basis);
    const int G = rep.z_e.grid.points;
    CHECK(rep.z_e.v[G - 1] == doctest::Approx(st.u_e).epsilon(1e-14));
    // Neumann regulated trace reproduces the reference
    CHECK(rep.regulated_trace == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.static_residual <= rep.residual_bound);
    CHECK(rep.static_residual > 0.0);
}

TEST_CASE("singular closed loop is rejected") {
    auto md = bench_model();
    GainSet zero = bench_gains();
    zero.K.setZero(); // A1 alone is singular (integrator chain)
    CHECK_THROWS_AS(solve_equilibrium(md, zero, 1.0), SingularClosedLoop);
}
