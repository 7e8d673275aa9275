#include "rdreg/tail.hpp"

#include <cmath>

#include "rdreg/errors.hpp"

namespace rdreg {

double zeta_tail(double s, long long H) {
    if (!(s > 1.0)) throw ConfigError("zeta_tail needs s > 1");
    const double a = static_cast<double>(H + 1);
    const double as = std::pow(a, -s);
    // Euler-Maclaurin about the lower limit a.
    return a * as / (s - 1.0) + 0.5 * as + s * as / a / 12.0 -
           s * (s + 1.0) * (s + 2.0) * as / (a * a * a) / 720.0;
}

double alt_tail(double s, long long H) {
    if (!(s > 0.0)) throw ConfigError("alt_tail needs s > 0");
    const double a = static_cast<double>(H + 1);
    const double as = std::pow(a, -s);
    const double mag = 0.5 * as + 0.25 * s * as / a - s * (s + 1.0) * (s + 2.0) * as / (a * a * a) / 48.0;
    return ((H + 1) % 2 == 0 ? mag : -mag);
}

double TailModel::eval(long long n) const {
    const double ns = std::pow(static_cast<double>(n), -s);
    const double alt = (n % 2 == 0) ? 1.0 : -1.0;
    return (coef[0] + alt * coef[2]) * ns + (coef[1] + alt * coef[3]) * ns / n;
}

TailModel::Sum TailModel::sum_beyond(long long from, long long tail_horizon) const {
    Sum out;
    if (tail_horizon < from) tail_horizon = from;
    for (long long n = from + 1; n <= tail_horizon; ++n) out.value += eval(n);
    out.value += coef[0] * zeta_tail(s, tail_horizon) + coef[1] * zeta_tail(s + 1.0, tail_horizon) +
                 coef[2] * alt_tail(s, tail_horizon) + coef[3] * alt_tail(s + 1.0, tail_horizon);
    // Model error: bounded per-term by resid_max on the first stretch past the
    // window, decaying like the leading power afterwards.
    const double W = static_cast<double>(fit_last);
    out.bound = resid_max * 2.0 * W * (1.0 + 1.0 / std::max(s - 1.0, 0.1)) + 1e-14 * std::fabs(out.value);
    return out;
}

TailModel fit_tail_model(const Eigen::ArrayXd& t, int first_n, double s) {
    TailModel model;
    model.s = s;
    const int len = static_cast<int>(t.size());
    const int w0 = len / 2; // fit on the last half
    const int W = len - w0;
    model.fit_first = first_n + w0;
    model.fit_last = first_n + len - 1;
    if (W < 16) {
        // Too few terms to fit: zero model, crude bound from the last terms.
        double m = 0.0;
        for (int i = std::max(0, len - 4); i < len; ++i) m = std::max(m, std::fabs(t[i]));
        model.resid_max = m;
        return model;
    }
    Eigen::MatrixXd A(W, 4);
    Eigen::VectorXd rhs(W);
    for (int i = 0; i < W; ++i) {
        const long long n = first_n + w0 + i;
        const double ns = std::pow(static_cast<double>(n), -s);
        const double alt = (n % 2 == 0) ? 1.0 : -1.0;
        A(i, 0) = ns;
        A(i, 1) = ns / n;
        A(i, 2) = alt * ns;
        A(i, 3) = alt * ns / n;
        rhs[i] = t[first_n + w0 + i - first_n];
    }
    // Column scaling for conditioning.
    Eigen::Vector4d scale;
    for (int j = 0; j < 4; ++j) scale[j] = A.col(j).norm() + 1e-300;
    for (int j = 0; j < 4; ++j) A.col(j) /= scale[j];
    Eigen::Vector4d c = A.colPivHouseholderQr().solve(rhs);
    for (int j = 0; j < 4; ++j) model.coef[j] = c[j] / scale[j];
    double rmax = 0.0;
    for (int i = 0; i < W; ++i) {
        const long long n = first_n + w0 + i;
        rmax = std::max(rmax, std::fabs(rhs[i] - model.eval(n)));
    }
    model.resid_max = rmax;
    return model;
}

} // namespace rdreg
