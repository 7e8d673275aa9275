#include "rdreg/coefficient.hpp"

#include <algorithm>
#include <cmath>

namespace rdreg {

double CoefficientFunction::operator()(double x) const {
    if (kind == Kind::Polynomial) {
        double acc = 0.0;
        for (auto it = data.rbegin(); it != data.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    // Linear interpolation on the uniform table.
    const int n = static_cast<int>(data.size());
    const double h = 1.0 / (n - 1);
    double s = std::clamp(x, 0.0, 1.0) / h;
    int i = std::min(static_cast<int>(s), n - 2);
    double t = s - i;
    return (1.0 - t) * data[i] + t * data[i + 1];
}

double CoefficientFunction::derivative(double x) const {
    if (kind == Kind::Polynomial) {
        double acc = 0.0;
        for (int k = static_cast<int>(data.size()) - 1; k >= 1; --k) acc = acc * x + k * data[k];
        return acc;
    }
    if (!derivative_available())
        throw DerivativeUnavailable("tabulated coefficient too coarse for a derivative");
    const int n = static_cast<int>(data.size());
    const double h = 1.0 / (n - 1);
    int i = std::clamp(static_cast<int>(std::lround(std::clamp(x, 0.0, 1.0) / h)), 1, n - 2);
    return (data[i + 1] - data[i - 1]) / (2.0 * h);
}

double CoefficientFunction::min_on_grid(int samples) const {
    double m = (*this)(0.0);
    for (int i = 1; i < samples; ++i) m = std::min(m, (*this)(static_cast<double>(i) / (samples - 1)));
    return m;
}

double CoefficientFunction::max_on_grid(int samples) const {
    double m = (*this)(0.0);
    for (int i = 1; i < samples; ++i) m = std::max(m, (*this)(static_cast<double>(i) / (samples - 1)));
    return m;
}

} // namespace rdreg
