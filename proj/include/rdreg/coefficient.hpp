#pragma once

#include <vector>

#include "rdreg/errors.hpp"

namespace rdreg {

// Spatially varying coefficient on [0,1]: either a polynomial (coefficients in
// ascending degree) or samples on a uniform grid.
struct CoefficientFunction {
    enum class Kind { Polynomial, Tabulated };

    Kind kind{Kind::Polynomial};
    std::vector<double> data;

    static CoefficientFunction constant(double c) {
        return CoefficientFunction{Kind::Polynomial, {c}};
    }
    static CoefficientFunction polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) coeffs.push_back(0.0);
        return CoefficientFunction{Kind::Polynomial, std::move(coeffs)};
    }
    static CoefficientFunction tabulated(std::vector<double> samples) {
        if (samples.size() < 2) throw ConfigError("tabulated coefficient needs >= 2 samples");
        return CoefficientFunction{Kind::Tabulated, std::move(samples)};
    }

    double operator()(double x) const;
    // df/dx; exact for polynomials, central differences on the table otherwise.
    double derivative(double x) const;
    bool derivative_available() const {
        return kind == Kind::Polynomial || data.size() >= 5;
    }

    // Extremes over a sampling of [0,1] (used for p_*, p^*, q^*).
    double min_on_grid(int samples = 2001) const;
    double max_on_grid(int samples = 2001) const;
};

} // namespace rdreg
