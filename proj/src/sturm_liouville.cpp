#include "rdreg/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rdreg {

namespace {

// Symmetric tridiagonal FD discretization of A f = -(p f')' + q f.
// Unknowns: DirichletDirichlet -> nodes 1..G-2; NeumannDirichlet -> nodes 0..G-2
// with the half-weight symmetrization at node 0 (f_0 = sqrt(2) * g_0).
struct Tridiag {
    std::vector<double> d, e; // diagonal, off-diagonal (size m, m-1)
    int first_node{0};        // grid node of the first unknown
};

Tridiag assemble(const CoefficientFunction& p, const CoefficientFunction& q, BoundaryDomain domain,
                 int G) {
    const double h = 1.0 / (G - 1);
    const double h2 = h * h;
    Tridiag T;
    if (domain == BoundaryDomain::DirichletDirichlet) {
        const int m = G - 2;
        T.first_node = 1;
        T.d.resize(m);
        T.e.resize(m - 1);
        for (int i = 0; i < m; ++i) {
            const double x = (i + 1) * h;
            T.d[i] = (p(x - 0.5 * h) + p(x + 0.5 * h)) / h2 + q(x);
            if (i + 1 < m) T.e[i] = -p(x + 0.5 * h) / h2;
        }
    } else {
        const int m = G - 1;
        T.first_node = 0;
        T.d.resize(m);
        T.e.resize(m - 1);
        const double phalf = p(0.5 * h);
        T.d[0] = 2.0 * phalf / h2 + q(0.0);
        T.e[0] = -std::sqrt(2.0) * phalf / h2;
        for (int i = 1; i < m; ++i) {
            const double x = i * h;
            T.d[i] = (p(x - 0.5 * h) + p(x + 0.5 * h)) / h2 + q(x);
            if (i + 1 < m) T.e[i] = -p(x + 0.5 * h) / h2;
        }
    }
    return T;
}

// Number of eigenvalues of (d,e) strictly below each shift (Sturm count via the
// LDL^T recurrence), batched so the row sweep is shared across shifts.
void sturm_counts(const std::vector<double>& d, const std::vector<double>& e2,
                  const double* sigma, int ns, int* out, double pivmin) {
    constexpr int B = 16;
    const int m = static_cast<int>(d.size());
    for (int j0 = 0; j0 < ns; j0 += B) {
        const int nb = std::min(B, ns - j0);
        double qv[B];
        int cv[B];
        for (int j = 0; j < nb; ++j) {
            double qq = d[0] - sigma[j0 + j];
            if (std::fabs(qq) < pivmin) qq = -pivmin;
            qv[j] = qq;
            cv[j] = qq < 0.0 ? 1 : 0;
        }
        for (int i = 1; i < m; ++i) {
            const double di = d[i];
            const double e2i = e2[i - 1];
            for (int j = 0; j < nb; ++j) {
                double qq = di - sigma[j0 + j] - e2i / qv[j];
                if (std::fabs(qq) < pivmin) qq = -pivmin;
                cv[j] += qq < 0.0 ? 1 : 0;
                qv[j] = qq;
            }
        }
        for (int j = 0; j < nb; ++j) out[j0 + j] = cv[j];
    }
}

// Solve (T - sigma I) x = b with partial pivoting (dgtsv-style); b is overwritten.
void shifted_solve(const Tridiag& T, double sigma, Eigen::ArrayXd& b) {
    const int m = static_cast<int>(T.d.size());
    std::vector<double> dl(T.e), dd(m), du(T.e), du2(std::max(m - 1, 0), 0.0);
    for (int i = 0; i < m; ++i) dd[i] = T.d[i] - sigma;
    double scale = 0.0;
    for (double v : dd) scale = std::max(scale, std::fabs(v));
    for (double v : T.e) scale = std::max(scale, std::fabs(v));
    const double tiny = scale * 1e-280 + std::numeric_limits<double>::min();
    for (int i = 0; i < m - 1; ++i) {
        if (std::fabs(dd[i]) >= std::fabs(dl[i])) {
            if (std::fabs(dd[i]) < tiny) dd[i] = (dd[i] < 0 ? -tiny : tiny);
            const double fac = dl[i] / dd[i];
            dd[i + 1] -= fac * du[i];
            b[i + 1] -= fac * b[i];
            if (i < m - 2) du2[i] = 0.0;
        } else {
            const double fac = dd[i] / dl[i];
            dd[i] = dl[i];
            const double tmp = dd[i + 1];
            dd[i + 1] = du[i] - fac * tmp;
            if (i < m - 2) {
                du2[i] = du[i + 1];
                du[i + 1] = -fac * du[i + 1];
            }
            du[i] = tmp;
            const double bt = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bt - fac * b[i];
        }
    }
    if (std::fabs(dd[m - 1]) < tiny) dd[m - 1] = (dd[m - 1] < 0 ? -tiny : tiny);
    b[m - 1] /= dd[m - 1];
    if (m > 1) b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / dd[m - 2];
    for (int i = m - 3; i >= 0; --i)
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
}

double rayleigh(const Tridiag& T, const Eigen::ArrayXd& v) {
    const int m = static_cast<int>(T.d.size());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
        double tv = T.d[i] * v[i];
        if (i > 0) tv += T.e[i - 1] * v[i - 1];
        if (i + 1 < m) tv += T.e[i] * v[i + 1];
        num += v[i] * tv;
        den += v[i] * v[i];
    }
    return num / den;
}

double eig_residual(const Tridiag& T, const Eigen::ArrayXd& v, double lam) {
    const int m = static_cast<int>(T.d.size());
    double acc = 0.0, nrm = 0.0;
    for (int i = 0; i < m; ++i) {
        double tv = (T.d[i] - lam) * v[i];
        if (i > 0) tv += T.e[i - 1] * v[i - 1];
        if (i + 1 < m) tv += T.e[i] * v[i + 1];
        acc += tv * tv;
        nrm += v[i] * v[i];
    }
    return std::sqrt(acc / nrm);
}

uint64_t xorshift(uint64_t& s) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
}

// One-grid solve: eigenvalues, traces and projections for modes 1..n_max.
struct GridSolve {
    Eigen::ArrayXd lambda, trace0, dtrace0, trace1, dtrace1;
    std::vector<Eigen::ArrayXd> proj;         // per projectee, length n_max
    std::vector<Eigen::ArrayXd> phi_restrict; // per mode, samples at every `stride` node
};

GridSolve solve_on_grid(const CoefficientFunction& p, const CoefficientFunction& q,
                        BoundaryDomain domain, int G, int n_max,
                        const std::vector<std::function<double(double)>>& projectees, int stride) {
    const double h = 1.0 / (G - 1);
    const Tridiag T = assemble(p, q, domain, G);
    const int m = static_cast<int>(T.d.size());
    if (n_max > m) throw ResolutionTooCoarse("more modes requested than grid unknowns");

    std::vector<double> e2(std::max(m - 1, 0));
    double emax2 = 0.0;
    for (int i = 0; i < m - 1; ++i) {
        e2[i] = T.e[i] * T.e[i];
        emax2 = std::max(emax2, e2[i]);
    }
    const double pivmin = std::max(emax2 * std::numeric_limits<double>::min(),
                                   std::numeric_limits<double>::min());

    // Gershgorin bounds.
    double glo = T.d[0], ghi = T.d[0];
    for (int i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(T.e[i - 1]);
        if (i + 1 < m) r += std::fabs(T.e[i]);
        glo = std::min(glo, T.d[i] - r);
        ghi = std::max(ghi, T.d[i] + r);
    }

    // Batched bisection to 1e-6 relative (Rayleigh polish finishes the job).
    std::vector<double> lo(n_max, glo), hi(n_max, ghi);
    std::vector<int> active(n_max);
    for (int k = 0; k < n_max; ++k) active[k] = k;
    std::vector<double> shifts;
    std::vector<int> counts;
    int sweeps = 0;
    while (!active.empty()) {
        if (++sweeps > 200) throw EigensolveFailure("bisection did not converge");
        shifts.resize(active.size());
        counts.resize(active.size());
        for (size_t j = 0; j < active.size(); ++j)
            shifts[j] = 0.5 * (lo[active[j]] + hi[active[j]]);
        sturm_counts(T.d, e2, shifts.data(), static_cast<int>(shifts.size()), counts.data(), pivmin);
        std::vector<int> next;
        next.reserve(active.size());
        for (size_t j = 0; j < active.size(); ++j) {
            const int k = active[j];
            if (counts[j] >= k + 1)
                hi[k] = shifts[j];
            else
                lo[k] = shifts[j];
            const double mid = 0.5 * (lo[k] + hi[k]);
            if (hi[k] - lo[k] > 1e-6 * std::max(1.0, std::fabs(mid))) next.push_back(k);
        }
        active.swap(next);
    }

    GridSolve out;
    out.lambda.resize(n_max);
    out.trace0.resize(n_max);
    out.dtrace0.resize(n_max);
    out.trace1.resize(n_max);
    out.dtrace1.resize(n_max);
    out.proj.assign(projectees.size(), Eigen::ArrayXd(n_max));
    out.phi_restrict.resize(n_max);

    // Sampled projectees (on this grid).
    std::vector<Eigen::ArrayXd> pf(projectees.size());
    for (size_t k = 0; k < projectees.size(); ++k) {
        pf[k].resize(G);
        for (int i = 0; i < G; ++i) pf[k][i] = projectees[k](i * h);
    }

    const double tnorm = ghi - std::min(glo, 0.0);
    Eigen::ArrayXd v(m), full(G);
    for (int k = 0; k < n_max; ++k) {
        double lam = 0.5 * (lo[k] + hi[k]);
        uint64_t seed = 0x9e3779b97f4a7c15ull + 0x1000193ull * static_cast<uint64_t>(k + 1);
        for (int i = 0; i < m; ++i)
            v[i] = static_cast<double>(xorshift(seed) >> 11) * (1.0 / 9007199254740992.0) - 0.5;
        double resid = std::numeric_limits<double>::max();
        for (int iter = 0; iter < 10; ++iter) {
            shifted_solve(T, lam, v);
            v /= v.abs().maxCoeff();
            const double lr = rayleigh(T, v);
            const double r = eig_residual(T, v, lr);
            lam = lr;
            const bool stalled = r > 0.5 * resid;
            resid = std::min(resid, r);
            if (resid <= 1e-15 * tnorm || (iter >= 2 && stalled)) break;
        }
        if (resid > 1e-10 * tnorm)
            throw EigensolveFailure("inverse iteration stalled at mode " + std::to_string(k + 1));
        out.lambda[k] = lam;

        // Rebuild the full grid sample (boundary values + Neumann recovery).
        full.setZero(G);
        for (int i = 0; i < m; ++i) full[T.first_node + i] = v[i];
        if (domain == BoundaryDomain::NeumannDirichlet) full[0] = std::sqrt(2.0) * v[0];
        const double nrm = std::sqrt(simpson((full * full).eval(), h));
        double sign = (domain == BoundaryDomain::NeumannDirichlet) ? full[0] : full[1];
        full *= (sign >= 0 ? 1.0 : -1.0) / nrm;

        out.trace0[k] = full[0];
        out.trace1[k] = full[G - 1];
        out.dtrace0[k] = deriv_left(full, h);
        out.dtrace1[k] = deriv_right(full, h);
        for (size_t j = 0; j < projectees.size(); ++j)
            out.proj[j][k] = simpson((pf[j] * full).eval(), h);

        const int np = (G - 1) / stride + 1;
        Eigen::ArrayXd r(np);
        for (int i = 0; i < np; ++i) r[i] = full[i * stride];
        out.phi_restrict[k] = std::move(r);
    }
    return out;
}

} // namespace

SpectralBasis solve_eigenproblem(const CoefficientFunction& p, const CoefficientFunction& q,
                                 BoundaryDomain domain, int n_max, int grid_points,
                                 const std::vector<std::function<double(double)>>& projectees) {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (grid_points % 2 == 0) ++grid_points; // Simpson needs an odd node count
    if (grid_points < 33) throw ResolutionTooCoarse("grid_points too small");
    if (n_max > (grid_points - 1) / 8)
        throw ResolutionTooCoarse("n_max " + std::to_string(n_max) + " exceeds grid_points/8");
    const double pmin = p.min_on_grid(grid_points);
    if (!(pmin > 0.0)) throw NonPositiveDiffusion("p must be strictly positive on [0,1]");

    const int Gc = grid_points;
    const int Gf = 2 * grid_points - 1;
    GridSolve coarse = solve_on_grid(p, q, domain, Gc, n_max, projectees, 1);
    GridSolve fine = solve_on_grid(p, q, domain, Gf, n_max, projectees, 2);

    SpectralBasis basis;
    basis.domain = domain;
    basis.p = p;
    basis.q = q;
    basis.p_min = pmin;
    basis.p_max = p.max_on_grid(grid_points);
    basis.q_max = q.max_on_grid(grid_points);
    basis.grid = Grid::uniform(Gc);
    basis.pairs.resize(n_max);
    basis.projections.assign(projectees.size(), Eigen::ArrayXd(n_max));

    const double hc = basis.grid.h;
    for (int k = 0; k < n_max; ++k) {
        EigenPair& ep = basis.pairs[k];
        ep.n = k + 1;
        ep.lambda = (4.0 * fine.lambda[k] - coarse.lambda[k]) / 3.0;
        ep.lambda_err = std::fabs(fine.lambda[k] - coarse.lambda[k]) / 3.0;
        ep.trace0 = (4.0 * fine.trace0[k] - coarse.trace0[k]) / 3.0;
        ep.dtrace0 = (4.0 * fine.dtrace0[k] - coarse.dtrace0[k]) / 3.0;
        ep.trace1 = (4.0 * fine.trace1[k] - coarse.trace1[k]) / 3.0;
        ep.dtrace1 = (4.0 * fine.dtrace1[k] - coarse.dtrace1[k]) / 3.0;
        ep.phi = fine.phi_restrict[k];
        const double nrm = std::sqrt(simpson((ep.phi * ep.phi).eval(), hc));
        ep.phi /= nrm;
        if (k > 0 && basis.pairs[k - 1].lambda >= ep.lambda)
            throw EigensolveFailure("eigenvalues not strictly increasing");
    }
    for (size_t j = 0; j < projectees.size(); ++j)
        basis.projections[j] = (4.0 * fine.proj[j] - coarse.proj[j]) / 3.0;
    return basis;
}

double project(const GridFunction& f, const SpectralBasis& basis, int n) {
    if (!(f.grid == basis.grid)) throw GridMismatch("project: f not sampled on the basis grid");
    if (n < 1 || n > basis.n_max()) throw DimensionMismatch("project: mode index out of range");
    return simpson((f.v * basis.pairs[n - 1].phi).eval(), basis.grid.h);
}

double energy_identity_residual(const GridFunction& f, const SpectralBasis& basis, int n_terms) {
    if (!(f.grid == basis.grid)) throw GridMismatch("energy residual: grid mismatch");
    if (n_terms < 1 || n_terms > basis.n_max())
        throw DimensionMismatch("energy residual: n_terms out of range");
    const double h = basis.grid.h;
    const int G = f.grid.points;
    const double scale = f.v.abs().maxCoeff() + 1.0;
    const double bc_tol = 1e-6 * scale;
    if (std::fabs(f.v[G - 1]) > bc_tol)
        throw BoundaryViolation("f(1) != 0");
    if (basis.domain == BoundaryDomain::DirichletDirichlet) {
        if (std::fabs(f.v[0]) > bc_tol) throw BoundaryViolation("f(0) != 0");
    } else {
        if (std::fabs(deriv_left(f.v, h)) > 1e-4 * scale) throw BoundaryViolation("f'(0) != 0");
    }

    double lhs = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        const double c = project(f, basis, n);
        lhs += basis.pairs[n - 1].lambda * c * c;
    }
    // RHS: int p (f')^2 + q f^2 with a 4th-order first derivative.
    Eigen::ArrayXd df(G);
    for (int i = 2; i < G - 2; ++i)
        df[i] = (f.v[i - 2] - 8.0 * f.v[i - 1] + 8.0 * f.v[i + 1] - f.v[i + 2]) / (12.0 * h);
    df[0] = deriv_left(f.v, h);
    df[G - 1] = deriv_right(f.v, h);
    df[1] = (-3.0 * f.v[0] - 10.0 * f.v[1] + 18.0 * f.v[2] - 6.0 * f.v[3] + f.v[4]) / (12.0 * h);
    df[G - 2] = (3.0 * f.v[G - 1] + 10.0 * f.v[G - 2] - 18.0 * f.v[G - 3] + 6.0 * f.v[G - 4] -
                 f.v[G - 5]) /
                (12.0 * h);
    Eigen::ArrayXd integrand(G);
    for (int i = 0; i < G; ++i) {
        const double x = i * h;
        integrand[i] = basis.p(x) * df[i] * df[i] + basis.q(x) * f.v[i] * f.v[i];
    }
    return std::fabs(lhs - simpson(integrand, h));
}

} // namespace rdreg
