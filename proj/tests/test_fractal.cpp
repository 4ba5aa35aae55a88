#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hproj/fractal.hpp"

using namespace hproj;

namespace {

double min_pairwise_euclid(const PointCloud& c) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < c.points.size(); ++i)
        for (size_t j = i + 1; j < c.points.size(); ++j)
            best = std::min(best, euclid_dist(c.points[i], c.points[j]));
    return best;
}

std::vector<double> sorted_pairwise_euclid(const PointCloud& c) {
    std::vector<double> d;
    d.reserve(c.points.size() * (c.points.size() - 1) / 2);
    for (size_t i = 0; i < c.points.size(); ++i)
        for (size_t j = i + 1; j < c.points.size(); ++j)
            d.push_back(euclid_dist(c.points[i], c.points[j]));
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

TEST_CASE("cantor_vertical_line: counts, geometry, separation, determinism") {
    PointCloud c = cantor_vertical_line(1.0 / 3.0, 6, 1);
    CHECK(c.points.size() == 64);
    CHECK(c.n == 1);
    for (const auto& p : c.points) {
        CHECK(p.z[0] == 1.0);
        CHECK(p.z[1] == 0.0);
        CHECK(p.t >= -0.25);
        CHECK(p.t <= 0.25);
    }
    CHECK(min_pairwise_euclid(c) >= c.resolution / 4.0);

    PointCloud c2 = cantor_vertical_line(1.0 / 3.0, 6, 1);
    CHECK(cloud_to_csv(c) == cloud_to_csv(c2));

    CHECK_THROWS_AS(cantor_vertical_line(0.7, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(cantor_vertical_line(1.0 / 3.0, 0, 1), std::invalid_argument);
}

TEST_CASE("reflection closure preserves counts and distance multisets") {
    PointCloud c = product_set(std::log(2.0) / std::log(3.0), 1, 1, 4);
    PointCloud r = negate_cloud(c);
    CHECK(r.points.size() == c.points.size());
    std::vector<double> a = sorted_pairwise_euclid(c);
    std::vector<double> b = sorted_pairwise_euclid(r);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15);
}

TEST_CASE("product_set stays inside the gauge ball around its base point") {
    double alpha = std::log(2.0) / std::log(3.0);
    PointCloud c = product_set(alpha, 1, 1, 5);
    HeisPoint e0({0, 1}, 0);
    double worst = 0.0;
    for (const auto& p : c.points) worst = std::max(worst, koranyi_dist(e0, p));
    CHECK(worst < 0.25);
    CHECK(min_pairwise_euclid(c) >= c.resolution / 4.0);

    // base point and dust directions: x_1 is identically 0 (V_0 direction)
    for (const auto& p : c.points) CHECK(p.z[0] == 0.0);

    CHECK_THROWS_AS(product_set(0.0, 1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(product_set(1.5, 1, 1, 3), std::invalid_argument);  // > 2n-m
}

TEST_CASE("product_set in H^2 uses only the VPerp horizontal directions") {
    PointCloud c = product_set(1.3, 2, 1, 3);
    for (const auto& p : c.points) {
        CHECK(p.z[0] == 0.0);  // x_1 spans V_0, never touched
        CHECK(p.z[1] == 0.0);  // alpha <= 2 uses only the y axes
        CHECK(std::abs(p.z[2] - 1.0) <= 1.0 / 16.0);  // y_1 base offset plus dust
    }
}

TEST_CASE("ifs_dust examples") {
    AffineEmbedding embed;
    embed.n = 1;
    embed.scale = 1.0;
    embed.axes = {{1, 0, 0}};
    embed.offset = {0, 0, 0};

    IfsSpec single;
    single.ambient_dim = 1;
    single.depth = 5;
    single.maps = {{0.5, {0.25}}};
    PointCloud one = ifs_dust(single, embed);
    CHECK(one.points.size() == 1);

    IfsSpec dyadic;
    dyadic.ambient_dim = 1;
    dyadic.depth = 6;
    dyadic.maps = {{0.5, {0.0}}, {0.5, {0.5}}};
    PointCloud line = ifs_dust(dyadic, embed);
    CHECK(line.points.size() == 64);
    std::vector<double> xs;
    for (const auto& p : line.points) xs.push_back(p.z[0]);
    std::sort(xs.begin(), xs.end());
    for (size_t i = 0; i < xs.size(); ++i)
        CHECK(xs[i] == doctest::Approx(i / 64.0).epsilon(1e-12));

    AffineEmbedding planar;
    planar.n = 1;
    planar.scale = 1.0;
    planar.axes = {{1, 0, 0}, {0, 1, 0}};
    planar.offset = {0, 0, 0};
    IfsSpec four;
    four.ambient_dim = 2;
    four.depth = 4;
    four.maps = {{0.25, {0, 0}}, {0.25, {0.75, 0}}, {0.25, {0, 0.75}}, {0.25, {0.75, 0.75}}};
    PointCloud dust = ifs_dust(four, planar);
    CHECK(dust.points.size() == 256);
    CHECK(min_pairwise_euclid(dust) >= dust.resolution / 4.0);

    IfsSpec bad;
    bad.ambient_dim = 1;
    bad.depth = 2;
    bad.maps = {{1.5, {0.0}}};
    CHECK_THROWS_AS(ifs_dust(bad, embed), std::invalid_argument);
}

TEST_CASE("box_product_set") {
    PointCloud seg = box_product_set(
        {AxisSpec::point(0), AxisSpec::point(0), AxisSpec::interval(0, 1, 101)});
    CHECK(seg.points.size() == 101);
    CHECK(seg.n == 1);
    for (const auto& p : seg.points) {
        CHECK(p.z[0] == 0.0);
        CHECK(p.z[1] == 0.0);
    }

    PointCloud prod = box_product_set({AxisSpec::interval(0, 1, 16), AxisSpec::interval(0, 1, 16),
                                       AxisSpec::cantor(0, 1, 1.0 / 3.0, 4)});
    CHECK(prod.points.size() == 16 * 16 * 16);
    CHECK(min_pairwise_euclid(prod) >= prod.resolution / 4.0);

    CHECK_THROWS_AS(box_product_set({AxisSpec::point(0), AxisSpec::point(0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(box_product_set({AxisSpec::point(0), AxisSpec::point(0),
                                     AxisSpec::interval(0, 1, 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        box_product_set({AxisSpec::point(0), AxisSpec::point(0), AxisSpec::point(1)}),
        std::invalid_argument);
}

TEST_CASE("csv serialization is deterministic and well-formed") {
    PointCloud c = cantor_vertical_line(0.4, 3, 2);
    std::string csv = cloud_to_csv(c);
    CHECK(csv.rfind("# n=2", 0) == 0);
    CHECK(csv.find("z0,z1,z2,z3,t\n") != std::string::npos);
    size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == c.points.size() + 2);
}
