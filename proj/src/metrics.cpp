#include "hproj/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hproj {

namespace {

constexpr double kGolden = 0.6180339887498948482;
constexpr double kInVPerpTol = 1e-9;

// d_H((w,0) * p, q) with w = sum_i c_i b_i, no temporaries beyond one Vec
double translated_dist(const IsotropicPlane& V, const std::vector<double>& c,
                       const HeisPoint& p, const HeisPoint& q) {
    const size_t d = p.z.size();
    Vec w(d, 0.0);
    for (int i = 0; i < V.m; ++i)
        for (size_t k = 0; k < d; ++k) w[k] += c[i] * V.basis[i][k];
    double t = p.t + 0.5 * symplectic_form(w, p.z);
    for (size_t k = 0; k < d; ++k) w[k] += p.z[k];
    // Koranyi distance to q, inlined
    double tt = t - q.t - 0.5 * symplectic_form(q.z, w);
    double zz = 0.0;
    for (size_t k = 0; k < d; ++k) {
        double dz = w[k] - q.z[k];
        zz += dz * dz;
    }
    return std::pow(zz * zz + 16.0 * tt * tt, 0.25);
}

double one_sided_quotient(const IsotropicPlane& V, const HeisPoint& p, const HeisPoint& q,
                          const QuotientMetricOptions& opts) {
    const int m = V.m;
    double zdiff = 0.0;
    for (size_t k = 0; k < p.z.size(); ++k) {
        double d = p.z[k] - q.z[k];
        zdiff += d * d;
    }
    // any minimizer satisfies |w + z_p - z_q| <= d_H(p,q), so this ball
    // always contains it
    const double radius = opts.radius_slack * (std::sqrt(zdiff) + koranyi_dist(p, q));
    const int g = opts.coarse_grid_points_per_axis;
    const double step = (g > 1) ? 2.0 * radius / (g - 1) : 0.0;

    std::vector<double> best(m, 0.0);
    double best_val = translated_dist(V, best, p, q);  // w = 0 is admissible

    // coarse grid over [-radius, radius]^m
    std::vector<int> idx(m, 0);
    std::vector<double> c(m);
    for (;;) {
        for (int i = 0; i < m; ++i) c[i] = -radius + idx[i] * step;
        double val = translated_dist(V, c, p, q);
        if (val < best_val) {
            best_val = val;
            best = c;
        }
        int i = 0;
        while (i < m && ++idx[i] == g) idx[i++] = 0;
        if (i == m) break;
    }

    // cyclic golden-section refinement, bracket = one grid cell each way
    const int passes = (m == 1) ? 1 : 3;
    c = best;
    for (int pass = 0; pass < passes; ++pass) {
        for (int i = 0; i < m; ++i) {
            double lo = c[i] - step, hi = c[i] + step;
            double x1 = hi - kGolden * (hi - lo);
            double x2 = lo + kGolden * (hi - lo);
            c[i] = x1;
            double f1 = translated_dist(V, c, p, q);
            c[i] = x2;
            double f2 = translated_dist(V, c, p, q);
            for (int it = 0; it < opts.refine_iters; ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - kGolden * (hi - lo);
                    c[i] = x1;
                    f1 = translated_dist(V, c, p, q);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + kGolden * (hi - lo);
                    c[i] = x2;
                    f2 = translated_dist(V, c, p, q);
                }
            }
            c[i] = (f1 < f2) ? x1 : x2;
            double f = std::min(f1, f2);
            if (f < best_val) {
                best_val = f;
                best = c;
            } else {
                c = best;
            }
        }
    }
    return best_val;
}

}  // namespace

void QuotientMetricOptions::validate() const {
    if (coarse_grid_points_per_axis < 9)
        throw std::invalid_argument("QuotientMetricOptions: need >= 9 grid points per axis");
    if (refine_iters < 40)
        throw std::invalid_argument("QuotientMetricOptions: need >= 40 refine iterations");
    if (!(radius_slack >= 1.0))
        throw std::invalid_argument("QuotientMetricOptions: radius_slack must be >= 1");
}

double quotient_dist(const IsotropicPlane& V, const HeisPoint& p, const HeisPoint& q,
                     const QuotientMetricOptions& opts) {
    opts.validate();
    if (p.ambient_n() != V.n || q.ambient_n() != V.n)
        throw std::invalid_argument("quotient_dist: ambient mismatch");
    if (vertical_defect(V, p) > kInVPerpTol || vertical_defect(V, q) > kInVPerpTol)
        throw std::invalid_argument("quotient_dist: inputs must lie in VPerp x R (project first)");
    // symmetrize; the exact infimum is symmetric, the solver is not quite
    return std::min(one_sided_quotient(V, p, q, opts), one_sided_quotient(V, q, p, opts));
}

double grushin_dist(const GrushinPoint& a, const GrushinPoint& b) {
    double dv = std::abs(a.v - b.v);
    double dtau = std::abs(a.tau - b.tau);
    double vmax = std::max(std::abs(a.v), std::abs(b.v));
    double ratio = (vmax > 0.0) ? dtau / vmax : std::numeric_limits<double>::infinity();
    return std::max(dv, std::min(std::sqrt(dtau), ratio));
}

namespace {

constexpr double kSingularV = 1e-12;

void check_path(const PlanarPath& path) {
    if (path.samples.size() < 2)
        throw std::invalid_argument("PlanarPath: need at least 2 samples");
    const auto& s = path.samples;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
        bool tau_moves = std::abs(s[i].tau - s[i - 1].tau) > 0.0 ||
                         std::abs(s[i + 1].tau - s[i].tau) > 0.0;
        if (std::abs(s[i].v) < kSingularV && tau_moves)
            throw std::invalid_argument("path crosses the singular line {v=0} with moving tau");
    }
}

// central differences on the uniform grid, one-sided at the ends
std::vector<double> grid_derivative(const std::vector<double>& f) {
    const size_t n = f.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> d(n);
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    return d;
}

double trapezoid(const std::vector<double>& f) {
    const double h = 1.0 / static_cast<double>(f.size() - 1);
    double s = 0.5 * (f.front() + f.back());
    for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

}  // namespace

double grushin_length(const PlanarPath& path) {
    check_path(path);
    const size_t n = path.samples.size();
    std::vector<double> v(n), tau(n);
    for (size_t i = 0; i < n; ++i) {
        v[i] = path.samples[i].v;
        tau[i] = path.samples[i].tau;
    }
    std::vector<double> vd = grid_derivative(v);
    std::vector<double> taud = grid_derivative(tau);
    std::vector<double> f(n);
    for (size_t i = 0; i < n; ++i) {
        double q = (std::abs(v[i]) < kSingularV) ? 0.0 : taud[i] / v[i];
        f[i] = std::sqrt(vd[i] * vd[i] + q * q);
    }
    return trapezoid(f);
}

double heis_horizontal_length(const HeisPath& path) {
    if (path.samples.size() < 2)
        throw std::invalid_argument("HeisPath: need at least 2 samples");
    const size_t n = path.samples.size();
    if (path.samples[0].ambient_n() != 1)
        throw std::invalid_argument("heis_horizontal_length: H^1 paths only");
    // horizontality: t' = (x y' - y x') / 2, checked per step at midpoints
    double defect = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
        const auto& a = path.samples[i];
        const auto& b = path.samples[i + 1];
        double xm = 0.5 * (a.z[0] + b.z[0]);
        double ym = 0.5 * (a.z[1] + b.z[1]);
        double dt = b.t - a.t;
        double dx = b.z[0] - a.z[0];
        double dy = b.z[1] - a.z[1];
        defect += std::abs(dt - 0.5 * (xm * dy - ym * dx));
    }
    if (defect > 1e-6 * static_cast<double>(n))
        throw std::invalid_argument("heis_horizontal_length: path is not horizontal");

    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = path.samples[i].z[0];
        y[i] = path.samples[i].z[1];
    }
    std::vector<double> xd = grid_derivative(x);
    std::vector<double> yd = grid_derivative(y);
    std::vector<double> f(n);
    for (size_t i = 0; i < n; ++i) f[i] = std::sqrt(xd[i] * xd[i] + yd[i] * yd[i]);
    return trapezoid(f);
}

HeisPath grushin_lift(const PlanarPath& path) {
    check_path(path);
    const size_t n = path.samples.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> v(n), tau(n);
    for (size_t i = 0; i < n; ++i) {
        v[i] = path.samples[i].v;
        tau[i] = path.samples[i].tau;
    }
    std::vector<double> taud = grid_derivative(tau);
    // u(s) = -int_0^s tau' / v, cumulative trapezoid
    std::vector<double> integrand(n);
    for (size_t i = 0; i < n; ++i)
        integrand[i] = (std::abs(v[i]) < kSingularV) ? 0.0 : -taud[i] / v[i];
    HeisPath lift;
    lift.samples.reserve(n);
    double u = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (i > 0) u += 0.5 * h * (integrand[i - 1] + integrand[i]);
        lift.samples.push_back(HeisPoint({u, v[i]}, tau[i] + 0.5 * u * v[i]));
    }
    return lift;
}

IsotropicPlane canonical_plane(int n, int m) {
    IsotropicPlane V;
    V.n = n;
    V.m = m;
    V.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        Vec b(2 * static_cast<size_t>(n), 0.0);
        b[i] = 1.0;
        V.basis[i] = std::move(b);
    }
    V.validate();
    return V;
}

}  // namespace hproj
