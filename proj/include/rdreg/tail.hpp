#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace rdreg {

// Analytic remainders used by the tail models.
// zeta_tail(s, H)  = sum_{n > H} n^{-s}            (Euler-Maclaurin, s > 1)
// alt_tail(s, H)   = sum_{n > H} (-1)^n n^{-s}     (Boole asymptotics, s > 0)
double zeta_tail(double s, long long H);
double alt_tail(double s, long long H);

// Least-squares model for the tail of a series whose terms decay like n^{-s}:
//   t_n ~ c0 n^{-s} + c1 n^{-s-1} + (-1)^n (c2 n^{-s} + c3 n^{-s-1})
// fitted on a window of exactly computed terms.
struct TailModel {
    double s{2.0};
    std::array<double, 4> coef{{0, 0, 0, 0}};
    double resid_max{0.0}; // worst fit residual on the window
    int fit_first{0};      // first mode index of the fit window (1-based)
    int fit_last{0};

    double eval(long long n) const;

    struct Sum {
        double value{0.0};
        double bound{0.0}; // remainder-error bound for `value`
    };
    // sum_{n > from} t_n estimated by the model: direct summation up to
    // tail_horizon, analytic remainder beyond.
    Sum sum_beyond(long long from, long long tail_horizon) const;
};

// Fit on terms t[i] corresponding to modes first_n + i (1-based modes); the fit
// window is the last half of the supplied range.
TailModel fit_tail_model(const Eigen::ArrayXd& t, int first_n, double s);

} // namespace rdreg
