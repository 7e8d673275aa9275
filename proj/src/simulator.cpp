#include "rdreg/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "rdreg/errors.hpp"

namespace rdreg {

ReferenceSignal ReferenceSignal::constant(double value) {
    ReferenceSignal r;
    r.kind_ = Kind::Constant;
    r.value_ = value;
    return r;
}

ReferenceSignal ReferenceSignal::schedule(std::vector<std::pair<double, double>> steps) {
    if (steps.empty()) throw ConfigError("reference schedule is empty");
    ReferenceSignal r;
    r.kind_ = Kind::Schedule;
    for (const auto& [t, v] : steps) {
        if (!r.times_.empty() && t <= r.times_.back())
            throw ConfigError("reference schedule times must increase");
        r.times_.push_back(t);
        r.values_.push_back(v);
    }
    return r;
}

ReferenceSignal ReferenceSignal::sampled(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw ConfigError("sampled reference needs matching times and values");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw ConfigError("sampled reference times must increase");
    ReferenceSignal r;
    r.kind_ = Kind::Sampled;
    r.times_ = std::move(times);
    r.values_ = std::move(values);
    return r;
}

double ReferenceSignal::operator()(double t) const {
    switch (kind_) {
        case Kind::Constant: return value_;
        case Kind::Schedule: {
            double v = values_.front();
            for (size_t i = 0; i < times_.size() && times_[i] <= t; ++i) v = values_[i];
            return v;
        }
        case Kind::Sampled: {
            if (t <= times_.front()) return values_.front();
            if (t >= times_.back()) return values_.back();
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            const size_t i = static_cast<size_t>(it - times_.begin());
            const double s = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
            return values_[i - 1] + s * (values_[i] - values_[i - 1]);
        }
    }
    return 0.0;
}

namespace {

struct Recorder {
    const ReducedModel* md;
    const SimConfig* cfg;
    int M, N, N0;
    double Treg, Tmeas;
    std::vector<double> t;
    std::vector<Eigen::VectorXd> rows; // state snapshots
    std::vector<double> vs, yrs, yms, rs;

    void push(double time, const Eigen::VectorXd& y, double v, double rv) {
        const auto& s = md->series;
        double yr = md->reg_offset * y[M] + Treg * y[M];
        double ym = md->meas_offset * y[M] + Tmeas * y[M];
        for (int n = 0; n < M; ++n) {
            yr += s.d[n] * y[n];
            ym += s.c[n] * y[n];
        }
        t.push_back(time);
        rows.push_back(y);
        vs.push_back(v);
        yrs.push_back(yr);
        yms.push_back(ym);
        rs.push_back(rv);
    }
};

} // namespace

Trajectory simulate(const ReducedModel& md, const GainSet& gains, const SpectralBasis& basis,
                    const SimConfig& cfg) {
    const int M = cfg.M, N = md.N, N0 = md.N0;
    if (M < N + 1) throw ConfigError("plant truncation M must exceed the observer order N");
    if (M > md.series.n_exact || M > basis.n_max())
        throw ResolutionTooCoarse("plant truncation M exceeds the solved modal band");
    if (gains.K.size() != N0 + 2 || gains.L.size() != N0)
        throw DimensionMismatch("gains do not match the model order");
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");

    // initial condition and compatibility
    GridFunction z0 = cfg.z0;
    if (z0.v.size() == 0) {
        z0.grid = basis.grid;
        z0.v.resize(z0.grid.points);
        for (int i = 0; i < z0.grid.points; ++i) z0.v[i] = z0.grid.x(i) * z0.grid.x(i);
    }
    if (z0.grid.points != basis.grid.points || std::fabs(z0.grid.h - basis.grid.h) > 1e-15)
        throw GridMismatch("initial condition grid does not match the basis grid");
    const double u0 = cfg.u0_given ? cfg.u0 : z0.v[z0.grid.points - 1];
    const double scale0 = 1.0 + z0.v.abs().maxCoeff();
    const bool dd = md.scenario == Scenario::NeumannMeasNeumannReg;
    if (dd) {
        if (std::fabs(z0.v[0]) > 1e-6 * scale0)
            throw IncompatibleInitialCondition("z0(0) must vanish for Dirichlet measurement");
    } else if (std::fabs(deriv_left(z0.v, z0.grid.h)) > 1e-4 * scale0) {
        throw IncompatibleInitialCondition("z0'(0) must vanish for Neumann boundary");
    }
    if (std::fabs(z0.v[z0.grid.points - 1] - u0) > 1e-6 * (scale0 + std::fabs(u0)))
        throw IncompatibleInitialCondition("u0 must equal z0(1)");

    GridFunction shifted = z0;
    for (int i = 0; i < shifted.grid.points; ++i) {
        const double x = shifted.grid.x(i);
        shifted.v[i] -= (dd ? x : x * x) * u0;
    }

    const int dim = M + 2 + N;
    Eigen::VectorXd y(dim);
    for (int n = 1; n <= M; ++n) y[n - 1] = project(shifted, basis, n);
    y[M] = u0;
    y[M + 1] = 0.0;
    y.tail(N).setZero(); // observer starts at zero

    const auto& s = md.series;
    const double Tmeas = md.tail_meas_feedthrough(M);
    auto rhs = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx, double& v_out) {
        double v = gains.K[0] * x[M] + gains.K[N0 + 1] * x[M + 1];
        for (int n = 0; n < N0; ++n) v += gains.K[1 + n] * x[M + 2 + n];
        v_out = v;
        for (int n = 0; n < M; ++n) dx[n] = s.den[n] * x[n] + s.a[n] * x[M] + s.b[n] * v;
        dx[M] = v;
        double dxi = md.tc.alpha0 * x[M] + md.tc.beta0 * v - cfg.r(t);
        for (int n = 0; n < N0; ++n) dxi += md.D0[n] * x[M + 2 + n];
        dx[M + 1] = dxi;
        double ym = md.meas_offset * x[M] + Tmeas * x[M];
        for (int n = 0; n < M; ++n) ym += s.c[n] * x[n];
        // predicted measurement: estimated modes plus the known boundary term
        // and the quasi-static tail, so the innovation vanishes at equilibrium
        double innov = (md.meas_offset - md.alpha1) * x[M] - ym;
        for (int n = 0; n < N; ++n) innov += s.c[n] * x[M + 2 + n];
        for (int n = 0; n < N; ++n) {
            const double ln = n < N0 ? gains.L[n] : 0.0;
            dx[M + 2 + n] = s.den[n] * x[M + 2 + n] + s.a[n] * x[M] + s.b[n] * v - ln * innov;
        }
    };

    Recorder rec;
    rec.md = &md;
    rec.cfg = &cfg;
    rec.M = M;
    rec.N = N;
    rec.N0 = N0;
    rec.Treg = md.tail_reg_feedthrough(M);
    rec.Tmeas = Tmeas;

    auto overflow_check = [&](double t, const Eigen::VectorXd& x) {
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e12)
            throw InstabilityOverflow("state norm exceeded 1e12", t);
    };

    double step_used = 0.0;
    Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    double vdump;
    if (cfg.step_mode == StepMode::Fixed) {
        const double lamM = s.lam[M - 1];
        double h = cfg.step > 0.0 ? cfg.step : 1.0 / (2.0 * (lamM + std::fabs(md.q_c)));
        const long long nsteps = std::max<long long>(1, std::llround(std::ceil(cfg.horizon / h)));
        h = cfg.horizon / static_cast<double>(nsteps);
        step_used = h;
        const long long stride = std::max<long long>(1, nsteps / std::max(1, cfg.store_max));
        double v0;
        rhs(0.0, y, k1, v0);
        rec.push(0.0, y, v0, cfg.r(0.0));
        for (long long i = 0; i < nsteps; ++i) {
            const double t = static_cast<double>(i) * h;
            double v;
            rhs(t, y, k1, v);
            tmp = y + 0.5 * h * k1;
            rhs(t + 0.5 * h, tmp, k2, vdump);
            tmp = y + 0.5 * h * k2;
            rhs(t + 0.5 * h, tmp, k3, vdump);
            tmp = y + h * k3;
            rhs(t + h, tmp, k4, vdump);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double tn = static_cast<double>(i + 1) * h;
            overflow_check(tn, y);
            if ((i + 1) % stride == 0 || i + 1 == nsteps) {
                double vn;
                rhs(tn, y, k1, vn);
                rec.push(tn, y, vn, cfg.r(tn));
            }
        }
    } else {
        // Cash-Karp embedded 4(5) pair
        static const double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
        static const double b21 = 0.2;
        static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
        static const double b41 = 0.3, b42 = -0.9, b43 = 1.2;
        static const double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
        static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
        static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
        static const double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                            d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                            d6 = c6 - 0.25;
        const double tol = cfg.adaptive_tol;
        double t = 0.0;
        double h = cfg.step > 0.0 ? cfg.step : cfg.horizon / 1000.0;
        Eigen::VectorXd k5(dim), k6(dim), yerr(dim), ynew(dim);
        double v0;
        rhs(0.0, y, k1, v0);
        rec.push(0.0, y, v0, cfg.r(0.0));
        const double store_dt = cfg.horizon / std::max(1, cfg.store_max);
        double last_store = 0.0;
        long long iters = 0;
        while (t < cfg.horizon) {
            if (++iters > 50'000'000) throw IntegrationFailure("adaptive step count exceeded");
            h = std::min(h, cfg.horizon - t);
            double v;
            rhs(t, y, k1, v);
            tmp = y + h * b21 * k1;
            rhs(t + a2 * h, tmp, k2, vdump);
            tmp = y + h * (b31 * k1 + b32 * k2);
            rhs(t + a3 * h, tmp, k3, vdump);
            tmp = y + h * (b41 * k1 + b42 * k2 + b43 * k3);
            rhs(t + a4 * h, tmp, k4, vdump);
            tmp = y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4);
            rhs(t + a5 * h, tmp, k5, vdump);
            tmp = y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5);
            rhs(t + a6 * h, tmp, k6, vdump);
            ynew = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
            yerr = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
            double errn = 0.0;
            for (int i = 0; i < dim; ++i)
                errn = std::max(errn, std::fabs(yerr[i]) / (tol + tol * std::fabs(y[i])));
            if (errn <= 1.0) {
                t += h;
                y = ynew;
                overflow_check(t, y);
                if (t - last_store >= store_dt || t >= cfg.horizon) {
                    double vn;
                    rhs(t, y, k1, vn);
                    rec.push(t, y, vn, cfg.r(t));
                    last_store = t;
                }
            }
            const double fac = errn > 0.0 ? 0.9 * std::pow(errn, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
            step_used = h;
        }
    }

    // assemble the trajectory from the recorded snapshots
    const int S = static_cast<int>(rec.t.size());
    Trajectory tr;
    tr.M = M;
    tr.N = N;
    tr.N0 = N0;
    tr.step_used = step_used;
    tr.t.resize(S);
    tr.w.resize(S, M);
    tr.what.resize(S, N);
    tr.u.resize(S);
    tr.xi.resize(S);
    tr.v.resize(S);
    tr.y_m.resize(S);
    tr.y_r.resize(S);
    tr.ytilde.resize(S);
    tr.zeta.resize(S);
    tr.r.resize(S);
    tr.err.resize(S);
    tr.energy.resize(S);
    for (int i = 0; i < S; ++i) {
        const Eigen::VectorXd& x = rec.rows[i];
        tr.t[i] = rec.t[i];
        tr.w.row(i) = x.head(M).transpose();
        tr.what.row(i) = x.tail(N).transpose();
        tr.u[i] = x[M];
        tr.xi[i] = x[M + 1];
        tr.v[i] = rec.vs[i];
        tr.y_r[i] = rec.yrs[i];
        tr.y_m[i] = rec.yms[i];
        tr.ytilde[i] = rec.yms[i];
        tr.r[i] = rec.rs[i];
        tr.err[i] = rec.yrs[i] - rec.rs[i];
        double en = 0.0, ze = 0.0;
        for (int n = 0; n < M; ++n) en += s.lam[n] * x[n] * x[n];
        for (int n = N; n < M; ++n) ze += s.c[n] * x[n];
        tr.energy[i] = en;
        tr.zeta[i] = ze;
    }
    return tr;
}

double observer_error_check(const Trajectory& tr, const ReducedModel& md) {
    const int N0 = md.N0, N = md.N, Nm = N - N0;
    if (Nm <= 0 || tr.t.size() == 0) return 0.0;
    if (tr.M < N) throw ConfigError("trajectory retains fewer modes than the observer");
    const auto& s = md.series;
    Eigen::VectorXd sc(Nm);
    for (int j = 0; j < Nm; ++j) {
        const double lam = s.lam[N0 + j];
        sc[j] = md.scenario == Scenario::NeumannMeasNeumannReg ? lam : std::sqrt(lam);
    }
    Eigen::VectorXd E0(Nm);
    for (int j = 0; j < Nm; ++j) E0[j] = sc[j] * (tr.what(0, N0 + j) - tr.w(0, N0 + j));
    double worst = 0.0;
    for (int i = 0; i < tr.t.size(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < Nm; ++j) {
            const double ref = std::exp(s.den[N0 + j] * tr.t[i]) * E0[j];
            const double cur = sc[j] * (tr.what(i, N0 + j) - tr.w(i, N0 + j));
            acc += (cur - ref) * (cur - ref);
        }
        worst = std::max(worst, std::sqrt(acc));
    }
    return worst;
}

DecayMetrics fit_decay_metrics(const Trajectory& tr, double delta,
                               const EquilibriumState& eq) {
    (void)delta;
    const int S = static_cast<int>(tr.t.size());
    if (S < 8) throw WindowTooShort("trajectory has too few stored samples");
    const int M = tr.M, N = tr.N;
    if (eq.w_modal.size() < M)
        throw DimensionMismatch("equilibrium modal band shorter than the trajectory's");

    DecayMetrics out;
    out.tracking_sup = tr.err.cwiseAbs().maxCoeff();
    out.steady_error = std::fabs(tr.y_r[S - 1] - eq.r_e);

    Eigen::VectorXd dev(S);
    for (int i = 0; i < S; ++i) {
        double acc = (tr.u[i] - eq.u_e) * (tr.u[i] - eq.u_e) +
                     (tr.xi[i] - eq.xi_e) * (tr.xi[i] - eq.xi_e);
        for (int n = 0; n < M; ++n) {
            const double d = tr.w(i, n) - eq.w_modal[n];
            acc += d * d;
        }
        for (int n = 0; n < N; ++n) {
            const double d = tr.what(i, n) - eq.w_modal[n];
            acc += d * d;
        }
        dev[i] = std::sqrt(acc);
    }
    const double dev_max = dev.maxCoeff();
    const double eq_scale = 1.0 + std::fabs(eq.u_e) + std::fabs(eq.xi_e);
    if (dev_max <= 1e-10 * eq_scale) {
        out.fit_skipped = true;
        return out;
    }
    // transient window: above the terminal plateau and the numerical floor
    const double lo = std::max(100.0 * dev[S - 1], 1e-8 * dev_max);
    std::vector<int> idx;
    for (int i = 0; i < S; ++i)
        if (dev[i] >= lo && dev[i] > 0.0) idx.push_back(i);
    if (idx.size() >= 4) idx.erase(idx.begin(), idx.begin() + static_cast<long>(idx.size() / 10));
    if (idx.size() < 8 || tr.t[idx.back()] - tr.t[idx.front()] < 1e-3)
        throw WindowTooShort("transient window has too few usable samples");
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i : idx) {
        const double x = tr.t[i], yv = std::log(dev[i]);
        st += x;
        sy += yv;
        stt += x * x;
        sty += x * yv;
    }
    const double n = static_cast<double>(idx.size());
    out.fitted_rate = (n * sty - st * sy) / (n * stt - st * st);
    return out;
}

} // namespace rdreg
