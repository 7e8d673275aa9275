#include "rdreg/grid.hpp"

namespace rdreg {

double simpson(const Eigen::ArrayXd& v, double h) {
    const int n = static_cast<int>(v.size());
    if (n < 3 || n % 2 == 0) throw GridMismatch("Simpson rule needs an odd node count >= 3");
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n - 1; i += 2) odd += v[i];
    for (int i = 2; i < n - 1; i += 2) even += v[i];
    return h / 3.0 * (v[0] + v[n - 1] + 4.0 * odd + 2.0 * even);
}

double simpson_dot(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g, double h) {
    if (f.size() != g.size()) throw GridMismatch("simpson_dot: size mismatch");
    return simpson((f * g).eval(), h);
}

double deriv_left(const Eigen::ArrayXd& v, double h) {
    if (v.size() < 5) throw GridMismatch("deriv_left needs >= 5 samples");
    return (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
}

double deriv_right(const Eigen::ArrayXd& v, double h) {
    const auto n = v.size();
    if (n < 5) throw GridMismatch("deriv_right needs >= 5 samples");
    return (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) /
           (12.0 * h);
}

} // namespace rdreg
