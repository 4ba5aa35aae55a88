#include "hproj/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hproj {

void PointCloud::validate() const {
    if (points.empty()) throw std::invalid_argument("PointCloud: empty");
    if (!(resolution > 0.0)) throw std::invalid_argument("PointCloud: resolution must be > 0");
    for (const auto& p : points) {
        if (p.ambient_n() != n) throw std::invalid_argument("PointCloud: ambient mismatch");
        if (!std::isfinite(p.t)) throw std::invalid_argument("PointCloud: non-finite coordinate");
        for (double c : p.z)
            if (!std::isfinite(c)) throw std::invalid_argument("PointCloud: non-finite coordinate");
    }
}

void IfsSpec::validate() const {
    if (maps.empty()) throw std::invalid_argument("IfsSpec: no maps");
    if (ambient_dim < 1) throw std::invalid_argument("IfsSpec: ambient_dim must be >= 1");
    if (depth < 1) throw std::invalid_argument("IfsSpec: depth must be >= 1");
    for (const auto& m : maps) {
        if (!(m.ratio > 0.0 && m.ratio < 1.0))
            throw std::invalid_argument("IfsSpec: ratios must lie in (0,1)");
        if (m.translation.size() != static_cast<size_t>(ambient_dim))
            throw std::invalid_argument("IfsSpec: translation dimension mismatch");
    }
}

namespace {

void check_cap(double count) {
    if (count > static_cast<double>(kPointCountCap))
        throw std::invalid_argument("point count cap (2^24) exceeded");
}

// left endpoints of the depth-level intervals of the two-map Cantor
// construction with the given contraction, scaled to [lo, hi]
std::vector<double> cantor_axis(double lo, double hi, double ratio, int depth) {
    check_cap(std::pow(2.0, depth));
    std::vector<double> pts{0.0};
    for (int d = 0; d < depth; ++d) {
        std::vector<double> next;
        next.reserve(2 * pts.size());
        for (double x : pts) {
            next.push_back(ratio * x);
            next.push_back(ratio * x + (1.0 - ratio));
        }
        pts = std::move(next);
    }
    for (double& x : pts) x = lo + (hi - lo) * x;
    return pts;
}

std::vector<double> interval_axis(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("interval axis needs at least 1 point");
    std::vector<double> pts(count);
    if (count == 1) {
        pts[0] = 0.5 * (lo + hi);
    } else {
        for (int i = 0; i < count; ++i)
            pts[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return pts;
}

}  // namespace

PointCloud cantor_vertical_line(double ratio, int depth, int n) {
    if (!(ratio > 0.0 && ratio <= 0.5))
        throw std::invalid_argument("cantor_vertical_line: ratio must lie in (0, 1/2]");
    if (depth < 1 || depth > 24)
        throw std::invalid_argument("cantor_vertical_line: depth out of range");
    std::vector<double> ts = cantor_axis(-0.25, 0.25, ratio, depth);
    PointCloud cloud;
    cloud.n = n;
    cloud.points.reserve(ts.size());
    Vec e1(2 * static_cast<size_t>(n), 0.0);
    e1[0] = 1.0;
    for (double t : ts) cloud.points.emplace_back(e1, t);
    cloud.resolution = 0.25 * std::pow(ratio, depth);  // half a depth-level cell
    cloud.label = "cantor_vertical_line";
    cloud.validate();
    return cloud;
}

PointCloud product_set(double alpha, int n, int m, int depth) {
    if (m < 1 || m > n) throw std::invalid_argument("product_set: need 1 <= m <= n");
    if (!(alpha > 0.0 && alpha <= 2.0 * n - m))
        throw std::invalid_argument("product_set: alpha out of (0, 2n-m]");
    if (depth < 1) throw std::invalid_argument("product_set: depth must be >= 1");

    // horizontal directions of V_0-perp, e_0 = e_{n+1} (the y_1 axis) first
    std::vector<int> dirs;
    for (int j = n; j < 2 * n; ++j) dirs.push_back(j);          // y_1..y_n
    for (int j = m; j < n; ++j) dirs.push_back(j);              // x_{m+1}..x_n
    const int k = static_cast<int>(std::ceil(alpha));
    if (k > static_cast<int>(dirs.size()))
        throw std::invalid_argument("product_set: alpha too large for available directions");
    const double ratio = std::pow(2.0, -static_cast<double>(k) / alpha);

    // spreads kept small so the whole set stays inside B_H((e_0,0), 1/4)
    const double len_z = 1.0 / 8.0;
    const double len_t = 1.0 / 40.0;
    const double cell = std::pow(ratio, depth) * len_z;
    int gt = std::clamp(static_cast<int>(std::lround(len_t / cell)), 2, 1 << 16);
    check_cap(std::pow(2.0, k * depth) * gt);

    std::vector<std::vector<double>> axis_pts(k);
    for (int a = 0; a < k; ++a)
        axis_pts[a] = cantor_axis(-0.5 * len_z, 0.5 * len_z, ratio, depth);
    std::vector<double> ts = interval_axis(-0.5 * len_t, 0.5 * len_t, gt);

    PointCloud cloud;
    cloud.n = n;
    std::vector<int> idx(k, 0);
    for (;;) {
        Vec z(2 * static_cast<size_t>(n), 0.0);
        z[n] = 1.0;  // e_0
        for (int a = 0; a < k; ++a) z[dirs[a]] += axis_pts[a][idx[a]];
        for (double t : ts) cloud.points.emplace_back(z, t);
        int a = 0;
        while (a < k && ++idx[a] == static_cast<int>(axis_pts[a].size())) idx[a++] = 0;
        if (a == k) break;
    }
    cloud.resolution = 0.5 * std::max(cell, len_t / (gt - 1));
    cloud.label = "product_set";
    cloud.validate();
    return cloud;
}

PointCloud ifs_dust(const IfsSpec& spec, const AffineEmbedding& embed) {
    spec.validate();
    check_cap(std::pow(static_cast<double>(spec.maps.size()), spec.depth));
    if (embed.axes.size() != static_cast<size_t>(spec.ambient_dim))
        throw std::invalid_argument("ifs_dust: embedding axis count != ambient_dim");
    const size_t dim_h = 2 * static_cast<size_t>(embed.n) + 1;
    if (embed.offset.size() != dim_h)
        throw std::invalid_argument("ifs_dust: embedding offset length != 2n+1");
    for (const auto& a : embed.axes)
        if (a.size() != dim_h)
            throw std::invalid_argument("ifs_dust: embedding axis length != 2n+1");

    std::vector<Vec> pts{Vec(spec.ambient_dim, 0.0)};
    double rmax = 0.0;
    for (const auto& f : spec.maps) rmax = std::max(rmax, f.ratio);
    for (int d = 0; d < spec.depth; ++d) {
        std::vector<Vec> next;
        next.reserve(pts.size() * spec.maps.size());
        for (const auto& x : pts) {
            for (const auto& f : spec.maps) {
                Vec y(spec.ambient_dim);
                for (int i = 0; i < spec.ambient_dim; ++i)
                    y[i] = f.ratio * x[i] + f.translation[i];
                next.push_back(std::move(y));
            }
        }
        pts = std::move(next);
    }

    double tr_spread = 0.0;
    for (size_t i = 0; i < spec.maps.size(); ++i)
        for (size_t j = i + 1; j < spec.maps.size(); ++j) {
            double s = 0.0;
            for (int d = 0; d < spec.ambient_dim; ++d) {
                double c = spec.maps[i].translation[d] - spec.maps[j].translation[d];
                s += c * c;
            }
            tr_spread = std::max(tr_spread, std::sqrt(s));
        }
    double diam = (spec.maps.size() > 1) ? tr_spread / (1.0 - rmax) : 1.0;

    PointCloud cloud;
    cloud.n = embed.n;
    cloud.points.reserve(pts.size());
    for (const auto& x : pts) {
        Vec h = embed.offset;
        for (int i = 0; i < spec.ambient_dim; ++i)
            for (size_t c = 0; c < dim_h; ++c) h[c] += embed.scale * x[i] * embed.axes[i][c];
        Vec z(h.begin(), h.end() - 1);
        cloud.points.emplace_back(std::move(z), h.back());
    }
    cloud.resolution = 0.5 * embed.scale * std::pow(rmax, spec.depth) * diam;
    if (!(cloud.resolution > 0.0)) cloud.resolution = embed.scale * 1e-12;
    cloud.label = "ifs_dust";
    cloud.validate();
    return cloud;
}

PointCloud box_product_set(const std::vector<AxisSpec>& axes) {
    if (axes.size() < 3 || axes.size() % 2 == 0)
        throw std::invalid_argument("box_product_set: need 2n+1 axes");
    const int n = static_cast<int>((axes.size() - 1) / 2);

    std::vector<std::vector<double>> axis_pts;
    double resolution = 0.0;
    double total = 1.0;
    for (const auto& a : axes) {
        std::vector<double> pts;
        switch (a.kind) {
            case AxisSpec::Kind::Point:
                pts = {a.lo};
                break;
            case AxisSpec::Kind::Interval:
                if (a.count < 1) throw std::invalid_argument("box_product_set: empty axis");
                pts = interval_axis(a.lo, a.hi, a.count);
                if (a.count > 1)
                    resolution = std::max(resolution, 0.5 * (a.hi - a.lo) / (a.count - 1));
                break;
            case AxisSpec::Kind::Cantor:
                if (a.count < 1) throw std::invalid_argument("box_product_set: empty axis");
                pts = cantor_axis(a.lo, a.hi, a.ratio, a.count);
                resolution = std::max(
                    resolution, 0.5 * std::pow(a.ratio, a.count) * (a.hi - a.lo));
                break;
        }
        if (pts.empty()) throw std::invalid_argument("box_product_set: empty axis");
        total *= static_cast<double>(pts.size());
        check_cap(total);
        axis_pts.push_back(std::move(pts));
    }
    if (!(resolution > 0.0))
        throw std::invalid_argument("box_product_set: all axes degenerate");

    PointCloud cloud;
    cloud.n = n;
    const size_t d = axes.size();
    std::vector<size_t> idx(d, 0);
    for (;;) {
        Vec z(2 * static_cast<size_t>(n));
        for (size_t i = 0; i + 1 < d; ++i) z[i] = axis_pts[i][idx[i]];
        cloud.points.emplace_back(std::move(z), axis_pts[d - 1][idx[d - 1]]);
        size_t i = 0;
        while (i < d && ++idx[i] == axis_pts[i].size()) idx[i++] = 0;
        if (i == d) break;
    }
    cloud.resolution = resolution;
    cloud.label = "box_product_set";
    cloud.validate();
    return cloud;
}

PointCloud negate_cloud(const PointCloud& cloud) {
    PointCloud out = cloud;
    for (auto& p : out.points) p = negate_point(p);
    out.label = cloud.label + "_neg";
    return out;
}

std::string cloud_to_csv(const PointCloud& cloud) {
    std::ostringstream os;
    os.precision(17);
    os << "# n=" << cloud.n << " resolution=" << cloud.resolution << " label=" << cloud.label
       << " seed=" << (cloud.seed ? std::to_string(*cloud.seed) : std::string("none")) << "\n";
    for (size_t i = 0; i < 2 * static_cast<size_t>(cloud.n); ++i) os << "z" << i << ",";
    os << "t\n";
    for (const auto& p : cloud.points) {
        for (double c : p.z) os << c << ",";
        os << p.t << "\n";
    }
    return os.str();
}

}  // namespace hproj
