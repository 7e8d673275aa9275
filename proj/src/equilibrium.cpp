#include "rdreg/equilibrium.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rdreg/errors.hpp"

namespace rdreg {

EquilibriumState solve_equilibrium(const ReducedModel& md, const GainSet& gains, double r_e) {
    const int N0 = md.N0, N = md.N;
    if (gains.K.size() != N0 + 2 || gains.L.size() != N0)
        throw DimensionMismatch("gains do not match the model order");

    EquilibriumState st;
    st.scenario = md.scenario;
    st.N0 = N0;
    st.N = N;
    st.q_c = md.q_c;
    st.r_e = r_e;

    const Eigen::MatrixXd Acl = md.A1 + md.B1 * gains.K;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Acl);
    if (!lu.isInvertible()) throw SingularClosedLoop("A1 + B1 K is singular");
    const Eigen::VectorXd Wa = lu.solve(-md.Br * r_e);
    st.u_e = Wa[0];
    st.xi_e = Wa[N0 + 1];
    st.v_e = gains.K * Wa;

    const auto& s = md.series;
    const int m = s.n_exact;
    st.w_modal.resize(m);
    for (int n = 1; n <= m; ++n)
        st.w_modal[n - 1] = n <= N0 ? Wa[n] : -s.a[n - 1] * st.u_e / s.den[n - 1];
    st.what_e.resize(N);
    for (int n = 1; n <= N; ++n) st.what_e[n - 1] = st.w_modal[n - 1];

    // regulated output via the same trace-series split used for alpha0, so the
    // integrator line cancels exactly
    const auto tail = s.sum_ta_reg(N0 + 1);
    double head = 0.0;
    for (int n = 0; n < N0; ++n) head += s.d[n] * st.what_e[n];
    st.y_e = md.reg_offset * st.u_e + head - st.u_e * tail.value;
    st.y_tail_bound = std::fabs(st.u_e) * tail.bound;
    st.slow_convergence = st.y_tail_bound > 1e-8 * (1.0 + std::fabs(r_e));
    st.trace_tail_corr = -st.u_e * s.sum_ta_reg(m + 1).value;

    // residuals of every equilibrium line: u-dot, xi-dot, plant modes, observer
    st.eq_residuals.resize(2 + 2 * N);
    st.eq_residuals[0] = st.v_e; // u-dot = v_e
    double xi_line = md.tc.alpha0 * st.u_e + md.tc.beta0 * st.v_e - r_e;
    for (int n = 0; n < N0; ++n) xi_line += md.D0[n] * st.what_e[n];
    st.eq_residuals[1] = xi_line;
    // innovation of the equilibrium statement: the estimate against the first
    // N measured modes (the alpha1 tail is the certified coupling error, not
    // part of the equilibrium condition)
    double innovation = 0.0;
    for (int n = 1; n <= N; ++n)
        innovation += s.c[n - 1] * (st.what_e[n - 1] - st.w_modal[n - 1]);
    for (int n = 1; n <= N; ++n) {
        const double plant_line =
            s.den[n - 1] * st.w_modal[n - 1] + s.a[n - 1] * st.u_e + s.b[n - 1] * st.v_e;
        st.eq_residuals[1 + n] = plant_line;
        const double l_n = n <= N0 ? gains.L[n - 1] : 0.0;
        st.eq_residuals[1 + N + n] = s.den[n - 1] * st.what_e[n - 1] + s.a[n - 1] * st.u_e +
                                     s.b[n - 1] * st.v_e - l_n * innovation;
    }
    st.max_residual = st.eq_residuals.cwiseAbs().maxCoeff();
    return st;
}

ProfileReport equilibrium_profile(const EquilibriumState& st, const SpectralBasis& basis) {
    const int m = std::min<int>(basis.n_max(), static_cast<int>(st.w_modal.size()));
    const Grid& g = basis.grid;
    ProfileReport rep;
    rep.z_e.grid = g;
    rep.z_e.v = Eigen::ArrayXd::Zero(g.points);
    for (int n = 1; n <= m; ++n) rep.z_e.v += st.w_modal[n - 1] * basis.pairs[n - 1].phi;
    const bool dd = st.scenario == Scenario::NeumannMeasNeumannReg;
    for (int i = 0; i < g.points; ++i) {
        const double x = g.x(i);
        rep.z_e.v[i] += (dd ? x : x * x) * st.u_e;
    }

    // regulated boundary trace from the eigenfunction traces plus the series
    // remainder past the solved band
    double trace = 0.0;
    switch (st.scenario) {
        case Scenario::DirichletMeasDirichletReg:
            for (int n = 1; n <= m; ++n) trace += st.w_modal[n - 1] * basis.pairs[n - 1].trace0;
            break;
        case Scenario::NeumannMeasNeumannReg:
            for (int n = 1; n <= m; ++n) trace += st.w_modal[n - 1] * basis.pairs[n - 1].dtrace0;
            trace += st.u_e; // lift'(0)
            break;
        case Scenario::DirichletMeasNeumannReg:
            for (int n = 1; n <= m; ++n) trace += st.w_modal[n - 1] * basis.pairs[n - 1].dtrace1;
            trace += 2.0 * st.u_e; // lift'(1)
            break;
    }
    rep.regulated_trace = trace + st.trace_tail_corr;

    // static ODE residual (p z')' + (q_c - q) z on interior nodes
    const double h = g.h;
    double worst = 0.0;
    for (int i = 1; i + 1 < g.points; ++i) {
        const double pl = basis.p(g.x(i) - 0.5 * h), pr = basis.p(g.x(i) + 0.5 * h);
        const double d2 = (pr * (rep.z_e.v[i + 1] - rep.z_e.v[i]) -
                           pl * (rep.z_e.v[i] - rep.z_e.v[i - 1])) /
                          (h * h);
        worst = std::max(std::fabs(d2 + (st.q_c - basis.q(g.x(i))) * rep.z_e.v[i]), worst);
    }
    rep.static_residual = worst;

    // the residual is u_e times the truncation error of expanding a(x); bound
    // it by the largest recent modal contribution
    double amax = 0.0;
    if (!basis.projections.empty()) {
        const auto& aproj = basis.projections[0];
        for (int n = std::max(1, m - m / 10); n <= m; ++n)
            amax = std::max(amax, std::fabs(aproj[n - 1]));
    }
    rep.residual_bound = 10.0 * std::fabs(st.u_e) * amax * std::sqrt(2.0) * m;
    return rep;
}

} // namespace rdreg
