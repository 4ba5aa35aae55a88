#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hproj {

using Vec = std::vector<double>;

/// A point (z, t) of H^n with z = (x_1..x_n, y_1..y_n).
struct HeisPoint {
    Vec z;
    double t = 0.0;

    HeisPoint() = default;
    HeisPoint(Vec z_, double t_) : z(std::move(z_)), t(t_) {
        if (z.size() % 2 != 0 || z.empty())
            throw std::invalid_argument("HeisPoint: z must have even positive length");
    }

    int ambient_n() const { return static_cast<int>(z.size() / 2); }
};

inline void check_same_ambient(const HeisPoint& p, const HeisPoint& q) {
    if (p.z.size() != q.z.size())
        throw std::invalid_argument("ambient dimension mismatch");
}

/// Symplectic form on R^{2n}: sum_j (x_j v_j - y_j u_j).
inline double symplectic_form(const Vec& z, const Vec& w) {
    if (z.size() != w.size() || z.size() % 2 != 0 || z.empty())
        throw std::invalid_argument("symplectic_form: mismatched or odd vector lengths");
    const size_t n = z.size() / 2;
    double s = 0.0;
    for (size_t j = 0; j < n; ++j)
        s += z[j] * w[n + j] - z[n + j] * w[j];
    return s;
}

/// Group law: (z,t)*(w,s) = (z+w, t+s+omega(z,w)/2).
inline HeisPoint group_mul(const HeisPoint& p, const HeisPoint& q) {
    check_same_ambient(p, q);
    Vec z(p.z.size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = p.z[i] + q.z[i];
    return HeisPoint(std::move(z), p.t + q.t + 0.5 * symplectic_form(p.z, q.z));
}

inline HeisPoint group_inv(const HeisPoint& p) {
    Vec z(p.z.size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = -p.z[i];
    return HeisPoint(std::move(z), -p.t);
}

inline HeisPoint identity_point(int n) {
    return HeisPoint(Vec(2 * static_cast<size_t>(n), 0.0), 0.0);
}

/// Non-isotropic dilation delta_r(z,t) = (r z, r^2 t), r > 0.
inline HeisPoint dilate(double r, const HeisPoint& p) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
    Vec z(p.z.size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = r * p.z[i];
    return HeisPoint(std::move(z), r * r * p.t);
}

/// Koranyi gauge: ||(z,t)||^4 = |z|^4 + 16 t^2.
inline double koranyi_norm(const HeisPoint& p) {
    double zz = 0.0;
    for (double c : p.z) zz += c * c;
    return std::pow(zz * zz + 16.0 * p.t * p.t, 0.25);
}

inline double koranyi_dist(const HeisPoint& p, const HeisPoint& q) {
    check_same_ambient(p, q);
    return koranyi_norm(group_mul(group_inv(q), p));
}

inline double euclid_dist(const HeisPoint& p, const HeisPoint& q) {
    check_same_ambient(p, q);
    double s = 0.0;
    for (size_t i = 0; i < p.z.size(); ++i) {
        double d = p.z[i] - q.z[i];
        s += d * d;
    }
    double dt = p.t - q.t;
    return std::sqrt(s + dt * dt);
}

/// Reflection (z,t) -> (-z,-t); relates left and right coset projections.
inline HeisPoint negate_point(const HeisPoint& p) { return group_inv(p); }

}  // namespace hproj
