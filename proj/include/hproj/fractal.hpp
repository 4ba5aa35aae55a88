#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hproj/heis.hpp"

namespace hproj {

/// Finite delta-separated sample of a set, with provenance.
struct PointCloud {
    int n = 0;
    std::vector<HeisPoint> points;
    double resolution = 0.0;  // generation scale
    std::string label;
    std::optional<uint64_t> seed;

    void validate() const;
};

/// Equal-ratio IFS: maps x -> ratio * x + translation on R^{ambient_dim}.
/// Open-set condition is the caller's duty; the generators in this file
/// all use separated translations.
struct IfsSpec {
    struct Map {
        double ratio = 0.0;  // in (0,1)
        Vec translation;
    };
    std::vector<Map> maps;
    int ambient_dim = 0;
    int depth = 1;

    void validate() const;
};

/// Affine placement of an R^d IFS attractor into H^n coordinates
/// (2n z-coordinates followed by t).
struct AffineEmbedding {
    int n = 0;
    double scale = 1.0;
    std::vector<Vec> axes;  // d vectors of length 2n+1
    Vec offset;             // length 2n+1
};

constexpr size_t kPointCountCap = size_t(1) << 24;

/// Two-map Cantor set in the t-coordinate of the vertical line
/// {(e_1, s) : s in [-1/4, 1/4]}. Ideal dim_E = log2/log(1/ratio),
/// ideal dim_H = 2 dim_E.
PointCloud cantor_vertical_line(double ratio, int depth, int n);

/// C_alpha x I near (e_0, 0) with e_0 = e_{n+1}: an IFS dust of ideal
/// Euclidean dimension alpha in the horizontal directions of V_0-perp,
/// times a uniform t-grid, all inside B_H((e_0,0), 1/4).
/// Ideal dim_E = alpha + 1, ideal dim_H = alpha + 2.
PointCloud product_set(double alpha, int n, int m, int depth);

/// Generic generator: depth-fold IFS iteration from the origin, embedded.
PointCloud ifs_dust(const IfsSpec& spec, const AffineEmbedding& embed);

/// One axis of a Cartesian product cloud.
struct AxisSpec {
    enum class Kind { Point, Interval, Cantor };
    Kind kind = Kind::Point;
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;       // Interval: grid points; Cantor: depth
    double ratio = 1.0 / 3.0;  // Cantor only

    static AxisSpec point(double x) { return {Kind::Point, x, x, 1, 0.0}; }
    static AxisSpec interval(double lo, double hi, int count) {
        return {Kind::Interval, lo, hi, count, 0.0};
    }
    static AxisSpec cantor(double lo, double hi, double ratio, int depth) {
        return {Kind::Cantor, lo, hi, depth, ratio};
    }
};

/// Cartesian product of per-axis 1-D clouds over the 2n+1 coordinates.
PointCloud box_product_set(const std::vector<AxisSpec>& axes);

/// z -> -z, t -> -t applied pointwise (the reflection trick).
PointCloud negate_cloud(const PointCloud& cloud);

/// CSV: header lines (n, resolution, label, seed), then one point per row.
std::string cloud_to_csv(const PointCloud& cloud);

}  // namespace hproj
