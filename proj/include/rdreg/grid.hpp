#pragma once

#include <Eigen/Dense>

#include "rdreg/errors.hpp"

namespace rdreg {

// Uniform grid on [0,1]; `points` is the node count (odd for Simpson).
struct Grid {
    int points{0};
    double h{0.0};

    static Grid uniform(int points) {
        if (points < 3) throw ConfigError("grid needs at least 3 points");
        return Grid{points, 1.0 / (points - 1)};
    }
    double x(int i) const { return i * h; }
    bool operator==(const Grid& o) const { return points == o.points; }
};

// Scalar function sampled on a uniform grid over [0,1].
struct GridFunction {
    Grid grid;
    Eigen::ArrayXd v;

    template <class F>
    static GridFunction sample(const Grid& g, F&& f) {
        GridFunction out;
        out.grid = g;
        out.v.resize(g.points);
        for (int i = 0; i < g.points; ++i) out.v[i] = f(g.x(i));
        return out;
    }
};

// Composite Simpson rule; v.size() must be odd.
double simpson(const Eigen::ArrayXd& v, double h);

// Simpson inner product of two samples on the same grid.
double simpson_dot(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g, double h);

// Fourth-order one-sided first derivative at the left / right end.
double deriv_left(const Eigen::ArrayXd& v, double h);
double deriv_right(const Eigen::ArrayXd& v, double h);

} // namespace rdreg
