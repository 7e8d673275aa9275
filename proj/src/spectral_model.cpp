#include "rdreg/spectral_model.hpp"

#include <cmath>

namespace rdreg {

LiftedInputs lifted_inputs(const PlantSpec& plant) {
    if (!plant.p.derivative_available())
        throw DerivativeUnavailable("lifting needs p'; tabulated p is too coarse");
    LiftedInputs li;
    const auto p = plant.p;
    const auto q = plant.q;
    const double qc = plant.q_c;
    if (plant.scenario == Scenario::NeumannMeasNeumannReg) {
        li.lift = [](double x) { return x; };
        li.a = [p, q, qc](double x) { return p.derivative(x) + (qc - q(x)) * x; };
        li.b = [](double x) { return -x; };
        li.meas_offset = 1.0;
        li.reg_offset = 1.0;
    } else {
        li.lift = [](double x) { return x * x; };
        li.a = [p, q, qc](double x) {
            return 2.0 * p(x) + 2.0 * x * p.derivative(x) + (qc - q(x)) * x * x;
        };
        li.b = [](double x) { return -x * x; };
        li.meas_offset = 0.0;
        li.reg_offset = plant.scenario == Scenario::DirichletMeasNeumannReg ? 2.0 : 0.0;
    }
    return li;
}

SpectralBasis solve_plant_basis(const PlantSpec& plant, int n_max, int grid_points) {
    const LiftedInputs li = lifted_inputs(plant);
    return solve_eigenproblem(plant.p, plant.q, plant.domain(), n_max, grid_points, {li.a, li.b});
}

int select_N0(const PlantSpec& plant, const SpectralBasis& basis, double delta) {
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    int N0 = 1;
    for (int n = basis.n_max(); n >= 2; --n) {
        if (-basis.lambda(n) + plant.q_c >= -delta) {
            N0 = n;
            break;
        }
    }
    if (-basis.lambda(basis.n_max()) + plant.q_c >= -delta)
        throw ResolutionTooCoarse("basis does not reach the stable tail; raise n_max");
    return N0;
}

SeriesTable::Val SeriesTable::sum(const Eigen::ArrayXd& t, const TailModel& m, int from) const {
    Val v;
    for (int n = from; n <= n_exact; ++n) v.value += t[n - 1];
    const auto tail = m.sum_beyond(std::max<long long>(n_exact, from - 1), tail_horizon);
    v.value += tail.value;
    // tail.bound only covers the model misfit; the discretization bias of the
    // modes the fit was trained on carries into the extrapolation as well
    v.bound = tail.bound + rel_disc * std::fabs(tail.value);
    return v;
}

namespace {

SeriesTable build_series(const PlantSpec& plant, const SpectralBasis& basis,
                         long long tail_horizon, double epsilon) {
    if (basis.projections.size() < 2)
        throw ConfigError("basis lacks lifted-input projections; use solve_plant_basis");
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ConfigError("epsilon must lie in (0, 1/2]");
    SeriesTable st;
    const int m = basis.n_max();
    st.n_exact = m;
    st.tail_horizon = tail_horizon;
    switch (plant.scenario) {
        case Scenario::DirichletMeasDirichletReg: st.reg_const = 0.0; break;
        case Scenario::NeumannMeasNeumannReg: st.reg_const = 1.0; break;
        case Scenario::DirichletMeasNeumannReg: st.reg_const = 2.0; break;
    }
    st.lam.resize(m);
    st.a = basis.projections[0];
    st.b = basis.projections[1];
    st.c.resize(m);
    st.d.resize(m);
    st.den.resize(m);
    for (int i = 0; i < m; ++i) {
        const auto& ep = basis.pairs[i];
        st.lam[i] = ep.lambda;
        st.den[i] = -ep.lambda + plant.q_c;
        switch (plant.scenario) {
            case Scenario::DirichletMeasDirichletReg:
                st.c[i] = ep.trace0;
                st.d[i] = ep.trace0;
                break;
            case Scenario::NeumannMeasNeumannReg:
                st.c[i] = ep.dtrace0;
                st.d[i] = ep.dtrace0;
                break;
            case Scenario::DirichletMeasNeumannReg:
                st.c[i] = ep.trace0;
                st.d[i] = ep.dtrace1;
                break;
        }
    }
    st.ta_reg = st.a * st.d / st.den;
    st.tb_reg = st.b * st.d / st.den;
    st.ta_meas = st.a * st.c / st.den;
    st.m1t.resize(m);
    st.m2t.resize(m);
    for (int i = 0; i < m; ++i) {
        const double t0 = basis.pairs[i].trace0;
        const double dt0 = basis.pairs[i].dtrace0;
        st.m1t[i] = t0 * t0 / st.lam[i];
        st.m2t[i] = dt0 * dt0 / std::pow(st.lam[i], 1.5 + epsilon);
    }
    double maxrel = 0.0;
    for (int i = m / 2; i < m; ++i)
        maxrel = std::max(maxrel, basis.pairs[i].lambda_err / basis.pairs[i].lambda);
    st.rel_disc = 2.0 * maxrel;
    st.mod_ta_reg = fit_tail_model(st.ta_reg, 1, 2.0);
    st.mod_tb_reg = fit_tail_model(st.tb_reg, 1, 2.0);
    st.mod_ta_meas = fit_tail_model(st.ta_meas, 1, 2.0);
    st.mod_m1 = fit_tail_model(st.m1t, 1, 2.0);
    st.mod_m2 = fit_tail_model(st.m2t, 1, 1.0 + 2.0 * epsilon);
    return st;
}

TailConstants constants_from(const SeriesTable& st, int N0, int N, double epsilon, double tol) {
    TailConstants tc;
    tc.epsilon = epsilon;
    const auto a0 = st.sum_ta_reg(N0 + 1);
    tc.alpha0 = st.reg_const - a0.value;
    tc.alpha0_bound = a0.bound;
    const auto b0 = st.sum_tb_reg(N0 + 1);
    tc.beta0 = -b0.value;
    tc.beta0_bound = b0.bound;
    const auto a1 = st.sum_ta_meas(N + 1);
    tc.alpha1 = a1.value;
    tc.alpha1_bound = a1.bound;
    const auto m1 = st.sum(st.m1t, st.mod_m1, 2);
    tc.M1_phi = m1.value;
    tc.M1_bound = m1.bound;
    const auto m2 = st.sum(st.m2t, st.mod_m2, 2);
    tc.M2_phi = m2.value;
    tc.M2_bound = m2.bound;
    const double worst = std::max({tc.alpha0_bound, tc.beta0_bound, tc.alpha1_bound, tc.M1_bound,
                                   tc.M2_bound});
    if (worst > tol)
        throw TailNotConverged("tail remainder bound " + std::to_string(worst) +
                               " above requested tolerance");
    return tc;
}

} // namespace

TailConstants tail_constants(const PlantSpec& plant, const SpectralBasis& basis, int N0, int N,
                             long long tail_horizon, double epsilon, double tol) {
    const SeriesTable st = build_series(plant, basis, tail_horizon, epsilon);
    return constants_from(st, N0, N, epsilon, tol);
}

ReducedModel build_reduced_matrices(const PlantSpec& plant, const SpectralBasis& basis, int N0,
                                    int N, const Eigen::RowVectorXd& K, const Eigen::VectorXd& L,
                                    const BuildOptions& opts) {
    if (N0 < 1) throw DimensionMismatch("N0 must be >= 1");
    if (N < N0 + 1) throw DimensionMismatch("N must be >= N0 + 1");
    if (N > basis.n_max()) throw DimensionMismatch("N exceeds the computed spectrum");
    if (K.size() != N0 + 2) throw DimensionMismatch("K must have length N0 + 2");
    if (L.size() != N0) throw DimensionMismatch("L must have length N0");

    ReducedModel md;
    md.scenario = plant.scenario;
    md.N0 = N0;
    md.N = N;
    md.q_c = plant.q_c;
    md.delta = opts.delta;
    md.K = K;
    md.L = L;
    md.series = build_series(plant, basis, opts.tail_horizon, opts.epsilon);
    md.tc = constants_from(md.series, N0, N, opts.epsilon, opts.tail_tol);
    md.alpha1 = md.tc.alpha1;

    const LiftedInputs li = lifted_inputs(plant);
    md.meas_offset = li.meas_offset;
    md.reg_offset = li.reg_offset;
    {
        auto av = GridFunction::sample(basis.grid, li.a);
        auto bv = GridFunction::sample(basis.grid, li.b);
        md.aL2 = simpson((av.v * av.v).eval(), basis.grid.h);
        md.bL2 = simpson((bv.v * bv.v).eval(), basis.grid.h);
    }

    const auto& st = md.series;
    const int Nm = N - N0;
    md.A0 = Eigen::MatrixXd::Zero(N0, N0);
    md.B0a.resize(N0);
    md.B0b.resize(N0);
    md.C0.resize(N0);
    md.D0.resize(N0);
    for (int i = 0; i < N0; ++i) {
        md.A0(i, i) = st.den[i];
        md.B0a[i] = st.a[i];
        md.B0b[i] = st.b[i];
        md.C0[i] = st.c[i];
        md.D0[i] = st.d[i];
    }
    if (plant.scenario == Scenario::DirichletMeasNeumannReg) md.C0star = md.D0;

    md.A2 = Eigen::MatrixXd::Zero(Nm, Nm);
    md.B2a.resize(Nm);
    md.B2b.resize(Nm);
    md.C1.resize(Nm);
    const bool lam_scaling = plant.scenario == Scenario::NeumannMeasNeumannReg;
    for (int i = 0; i < Nm; ++i) {
        const int j = N0 + i;
        md.A2(i, i) = st.den[j];
        md.B2a[i] = st.a[j];
        md.B2b[i] = st.b[j];
        md.C1[i] = st.c[j] / (lam_scaling ? st.lam[j] : std::sqrt(st.lam[j]));
    }

    md.A1 = Eigen::MatrixXd::Zero(N0 + 2, N0 + 2);
    md.A1.block(1, 0, N0, 1) = md.B0a;
    md.A1.block(1, 1, N0, N0) = md.A0;
    md.A1(N0 + 1, 0) = md.tc.alpha0;
    md.A1.block(N0 + 1, 1, 1, N0) = md.D0;
    md.B1.resize(N0 + 2);
    md.B1[0] = 1.0;
    md.B1.segment(1, N0) = md.B0b;
    md.B1[N0 + 1] = md.tc.beta0;
    md.Br = Eigen::VectorXd::Zero(N0 + 2);
    md.Br[N0 + 1] = -1.0;

    const int dim = 2 * N + 2;
    md.i1 = N0 + 2;
    md.i2 = md.i1 + N0;
    md.i3 = md.i2 + Nm;
    md.i4 = md.i3 + Nm;
    Eigen::VectorXd Lt = Eigen::VectorXd::Zero(N0 + 2);
    Lt.segment(1, N0) = L;
    Eigen::RowVectorXd E1 = Eigen::RowVectorXd::Zero(N0 + 2);
    E1[0] = 1.0;

    md.F = Eigen::MatrixXd::Zero(dim, dim);
    md.F.block(0, 0, md.i1, md.i1) = md.A1 + md.B1 * K + md.alpha1 * Lt * E1;
    md.F.block(0, md.i1, md.i1, N0) = Lt * md.C0;
    md.F.block(0, md.i3, md.i1, Nm) = Lt * md.C1;
    md.F.block(md.i1, 0, N0, md.i1) = -md.alpha1 * L * E1;
    md.F.block(md.i1, md.i1, N0, N0) = md.A0 - L * md.C0;
    md.F.block(md.i1, md.i3, N0, Nm) = -L * md.C1;
    md.F.block(md.i2, 0, Nm, md.i1) = md.B2b * K;
    md.F.block(md.i2, 0, Nm, 1) += md.B2a;
    md.F.block(md.i2, md.i2, Nm, Nm) = md.A2;
    md.F.block(md.i3, md.i3, Nm, Nm) = md.A2;

    md.F1 = md.F;
    md.F1.block(0, 0, md.i1, md.i1) = md.A1 + md.B1 * K;
    md.F1.block(md.i1, 0, N0, md.i1).setZero();

    md.Lcal = Eigen::VectorXd::Zero(dim);
    md.Lcal.segment(0, md.i1) = Lt;
    md.Lcal.segment(md.i1, N0) = -L;
    md.Lcal_r = Eigen::VectorXd::Zero(dim);
    md.Lcal_r.segment(0, md.i1) = md.Br;

    Eigen::RowVectorXd E = Eigen::RowVectorXd::Zero(dim);
    E[0] = 1.0;
    Eigen::RowVectorXd Kt = Eigen::RowVectorXd::Zero(dim);
    Kt.segment(0, md.i1) = K;
    md.G = md.aL2 * E.transpose() * E + md.bL2 * Kt.transpose() * Kt;
    md.g = md.aL2 + md.bL2 * K.squaredNorm();
    return md;
}

} // namespace rdreg
