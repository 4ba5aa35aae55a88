#include "hproj/grassmann.hpp"

#include <Eigen/Dense>
#include <complex>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "hproj/rng.hpp"

namespace hproj {

namespace {

constexpr double kPlaneTol = 1e-10;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void IsotropicPlane::validate() const {
    if (n < 1 || m < 1 || m > n)
        throw std::invalid_argument("IsotropicPlane: need 1 <= m <= n");
    if (basis.size() != static_cast<size_t>(m))
        throw std::invalid_argument("IsotropicPlane: wrong basis size");
    for (const auto& b : basis)
        if (b.size() != static_cast<size_t>(2 * n))
            throw std::invalid_argument("IsotropicPlane: basis vector length != 2n");
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double g = dot(basis[i], basis[j]) - (i == j ? 1.0 : 0.0);
            if (std::abs(g) > kPlaneTol)
                throw std::invalid_argument("IsotropicPlane: basis not orthonormal");
            if (std::abs(symplectic_form(basis[i], basis[j])) > kPlaneTol)
                throw std::invalid_argument("IsotropicPlane: basis not isotropic");
        }
    }
}

PlaneSampler::PlaneSampler(int n, int m, uint64_t seed) : n_(n), m_(m), seed_(seed) {
    if (n < 1 || m < 1 || m > n)
        throw std::invalid_argument("PlaneSampler: need 1 <= m <= n");
}

PlaneSampler PlaneSampler::fork(uint64_t task_index) const {
    return PlaneSampler(n_, m_, derive_seed(seed_, task_index));
}

IsotropicPlane PlaneSampler::sample() {
    Rng rng(derive_seed(seed_, draws_++));
    const int n = n_;

    // complex Ginibre -> QR -> unit-phase rescale: exact Haar on U(n)
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        std::complex<double> d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0.0 ? d / a : 1.0);
    }

    // real embedding of R = A + iB acting on (x_1..x_n, y_1..y_n)
    IsotropicPlane plane;
    plane.n = n;
    plane.m = m_;
    plane.basis.resize(m_);
    for (int k = 0; k < m_; ++k) {
        Vec b(2 * static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            b[i] = q(i, k).real();
            b[n + i] = q(i, k).imag();
        }
        plane.basis[k] = std::move(b);
    }

    // re-orthogonalize (modified Gram-Schmidt); the embedding is already
    // orthogonal up to roundoff
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < i; ++j) {
            double c = dot(plane.basis[i], plane.basis[j]);
            for (size_t k = 0; k < plane.basis[i].size(); ++k)
                plane.basis[i][k] -= c * plane.basis[j][k];
        }
        double nrm = std::sqrt(dot(plane.basis[i], plane.basis[i]));
        for (double& c : plane.basis[i]) c /= nrm;
    }

    plane.validate();
    return plane;
}

Vec proj_subspace(const IsotropicPlane& V, const Vec& z, SubspacePart which) {
    if (z.size() != static_cast<size_t>(2 * V.n))
        throw std::invalid_argument("proj_subspace: vector length != 2n");
    Vec pv(z.size(), 0.0);
    for (const auto& b : V.basis) {
        double c = dot(b, z);
        for (size_t i = 0; i < z.size(); ++i) pv[i] += c * b[i];
    }
    if (which == SubspacePart::V) return pv;
    Vec out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = z[i] - pv[i];
    return out;
}

HeisPoint proj_horizontal(const IsotropicPlane& V, const HeisPoint& p) {
    if (p.ambient_n() != V.n)
        throw std::invalid_argument("proj_horizontal: ambient mismatch");
    return HeisPoint(proj_subspace(V, p.z, SubspacePart::V), 0.0);
}

HeisPoint proj_right_coset(const IsotropicPlane& V, const HeisPoint& p) {
    if (p.ambient_n() != V.n)
        throw std::invalid_argument("proj_right_coset: ambient mismatch");
    Vec pv = proj_subspace(V, p.z, SubspacePart::V);
    Vec pw(p.z.size());
    for (size_t i = 0; i < pw.size(); ++i) pw[i] = p.z[i] - pv[i];
    double t = p.t - 0.5 * symplectic_form(pv, pw);
    return HeisPoint(std::move(pw), t);
}

HeisPoint proj_left_coset(const IsotropicPlane& V, const HeisPoint& p) {
    return negate_point(proj_right_coset(V, negate_point(p)));
}

double vertical_defect(const IsotropicPlane& V, const HeisPoint& p) {
    Vec pv = proj_subspace(V, p.z, SubspacePart::V);
    return std::sqrt(dot(pv, pv));
}

std::string plane_to_json(const IsotropicPlane& V) {
    nlohmann::json j;
    j["n"] = V.n;
    j["m"] = V.m;
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(V.m) * 2 * V.n);
    for (const auto& b : V.basis) flat.insert(flat.end(), b.begin(), b.end());
    j["basis"] = flat;
    return j.dump();
}

IsotropicPlane plane_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    IsotropicPlane V;
    V.n = j.at("n").get<int>();
    V.m = j.at("m").get<int>();
    std::vector<double> flat = j.at("basis").get<std::vector<double>>();
    if (flat.size() != static_cast<size_t>(V.m) * 2 * V.n)
        throw std::invalid_argument("plane_from_json: basis size mismatch");
    V.basis.resize(V.m);
    for (int i = 0; i < V.m; ++i)
        V.basis[i] = Vec(flat.begin() + static_cast<long>(i) * 2 * V.n,
                         flat.begin() + static_cast<long>(i + 1) * 2 * V.n);
    V.validate();
    return V;
}

double projector_distance(const IsotropicPlane& V, const IsotropicPlane& W) {
    if (V.n != W.n) throw std::invalid_argument("projector_distance: n mismatch");
    const int d = 2 * V.n;
    Eigen::MatrixXd pv = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd pw = Eigen::MatrixXd::Zero(d, d);
    for (const auto& b : V.basis) {
        Eigen::Map<const Eigen::VectorXd> v(b.data(), d);
        pv += v * v.transpose();
    }
    for (const auto& b : W.basis) {
        Eigen::Map<const Eigen::VectorXd> v(b.data(), d);
        pw += v * v.transpose();
    }
    return (pv - pw).jacobiSvd().singularValues()(0);
}

}  // namespace hproj
