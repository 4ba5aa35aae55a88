#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hproj/metrics.hpp"
#include "hproj/rng.hpp"

using namespace hproj;

namespace {

// random point already in VPerp x R for the canonical plane in H^1
HeisPoint random_v0perp_point(Rng& rng, double box) {
    return HeisPoint({0.0, rng.uniform(-box, box)}, rng.uniform(-box, box));
}

PlanarPath smooth_random_path(Rng& rng, size_t samples) {
    // low-frequency Fourier path with v bounded away from 0
    double a1 = rng.uniform(-0.3, 0.3), a2 = rng.uniform(-0.15, 0.15);
    double b1 = rng.uniform(-0.5, 0.5), b2 = rng.uniform(-0.25, 0.25);
    double v0 = rng.uniform(1.0, 2.0);
    PlanarPath path;
    path.samples.resize(samples);
    for (size_t i = 0; i < samples; ++i) {
        double s = static_cast<double>(i) / static_cast<double>(samples - 1);
        double v = v0 + a1 * std::sin(2 * M_PI * s) + a2 * std::sin(4 * M_PI * s);
        double tau = b1 * s + b2 * std::sin(2 * M_PI * s);
        path.samples[i] = {v, tau};
    }
    return path;
}

}  // namespace

TEST_CASE("quotient distance matches the 1-D dense-grid reference on H^1") {
    IsotropicPlane V = canonical_plane(1, 1);
    HeisPoint p({0, 1}, 0), q({0, 1}, 1);

    // brute force over the translation parameter, step 1e-5 on [-4,4]
    double ref = std::numeric_limits<double>::infinity();
    for (long i = -400000; i <= 400000; ++i) {
        double w = static_cast<double>(i) * 1e-5;
        double d = koranyi_dist(group_mul(HeisPoint({w, 0}, 0), p), q);
        ref = std::min(ref, d);
    }
    // the reference minimizes (w^4 + 16(w-1)^2)^{1/4}; the stationary point
    // solves w^3 + 8w - 8 = 0
    double w = 0.9068;
    for (int it = 0; it < 60; ++it) w -= (w * w * w + 8 * w - 8) / (3 * w * w + 8);
    double closed = std::pow(w * w * w * w + 16 * (w - 1) * (w - 1), 0.25);
    CHECK(std::abs(ref - closed) <= 1e-8);

    double got = quotient_dist(V, p, q);
    CHECK(std::abs(got - ref) / ref <= 1e-4);
    CHECK(got == doctest::Approx(0.9502).epsilon(1e-3));
}

TEST_CASE("quotient distance: dominance, symmetry, identity, misuse") {
    IsotropicPlane V = canonical_plane(1, 1);
    Rng rng(31);
    for (int k = 0; k < 10000; ++k) {
        HeisPoint p = random_v0perp_point(rng, 2), q = random_v0perp_point(rng, 2);
        double d = quotient_dist(V, p, q);
        CHECK(d <= koranyi_dist(p, q) + 1e-9);
        CHECK(quotient_dist(V, q, p) == d);  // symmetrized by construction
    }
    HeisPoint p = random_v0perp_point(rng, 2);
    CHECK(quotient_dist(V, p, p) == 0.0);
    CHECK_THROWS_AS(quotient_dist(V, HeisPoint({1, 0}, 0), p), std::invalid_argument);
    QuotientMetricOptions bad;
    bad.coarse_grid_points_per_axis = 3;
    CHECK_THROWS_AS(quotient_dist(V, p, p, bad), std::invalid_argument);
}

TEST_CASE("quotient distance: dilation homogeneity within solver error") {
    IsotropicPlane V = canonical_plane(1, 1);
    Rng rng(37);
    for (int k = 0; k < 200; ++k) {
        HeisPoint p = random_v0perp_point(rng, 1), q = random_v0perp_point(rng, 1);
        double d = quotient_dist(V, p, q);
        if (d < 1e-6) continue;
        for (double r : {0.25, 4.0}) {
            double dr = quotient_dist(V, dilate(r, p), dilate(r, q));
            CHECK(std::abs(dr - r * d) / (r * d) <= 1e-3);
        }
    }
}

TEST_CASE("vertical axis carries the square-root metric") {
    IsotropicPlane V = canonical_plane(1, 1);
    Rng rng(41);
    for (int k = 0; k < 200; ++k) {
        double t1 = rng.uniform(-1, 1), t2 = rng.uniform(-1, 1);
        double d = quotient_dist(V, HeisPoint({0, 0}, t1), HeisPoint({0, 0}, t2));
        CHECK(std::abs(d - 2.0 * std::sqrt(std::abs(t1 - t2))) <= 1e-9);
    }
}

TEST_CASE("quotient distance on embedded H^1 inside H^2 equals the H^1 distance") {
    IsotropicPlane V = canonical_plane(2, 1);
    Rng rng(43);
    for (int k = 0; k < 500; ++k) {
        // z supported on (x_2, y_2) only: the orbit where the quotient
        // metric restricts to the lower-dimensional group metric
        HeisPoint p({0, rng.uniform(-1, 1), 0, rng.uniform(-1, 1)}, rng.uniform(-1, 1));
        HeisPoint q({0, rng.uniform(-1, 1), 0, rng.uniform(-1, 1)}, rng.uniform(-1, 1));
        double dq = quotient_dist(V, p, q);
        HeisPoint ph({p.z[1], p.z[3]}, p.t), qh({q.z[1], q.z[3]}, q.t);
        double dh = koranyi_dist(ph, qh);
        CHECK(std::abs(dq - dh) <= 1e-3 * std::max(dh, 1e-12));
    }
}

TEST_CASE("quotient-to-ambient ratio decays on a nonzero-y orbit") {
    IsotropicPlane V = canonical_plane(1, 1);
    double prev = std::numeric_limits<double>::infinity();
    double last = 0;
    for (double dt : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        HeisPoint p({0, 1}, 0), q({0, 1}, dt);
        double ratio = quotient_dist(V, p, q) / koranyi_dist(p, q);
        CHECK(ratio < prev);
        prev = ratio;
        last = ratio;
    }
    CHECK(last < 0.1);
}

TEST_CASE("euclidean distance is Lipschitz against the quotient distance locally") {
    IsotropicPlane V = canonical_plane(1, 1);
    auto pct99 = [&](int pairs, uint64_t seed) {
        Rng rng(seed);
        std::vector<double> ratios;
        while (static_cast<int>(ratios.size()) < pairs) {
            HeisPoint p = random_v0perp_point(rng, 1.4), q = random_v0perp_point(rng, 1.4);
            double d = quotient_dist(V, p, q);
            if (d < 1e-9) continue;
            ratios.push_back(euclid_dist(p, q) / d);
        }
        std::sort(ratios.begin(), ratios.end());
        return ratios[static_cast<size_t>(0.99 * pairs)];
    };
    double k1 = pct99(10000, 47);
    double k2 = pct99(20000, 47);
    CHECK(std::isfinite(k1));
    CHECK(k1 > 0);
    CHECK(std::abs(k2 - k1) / k1 <= 0.25);
}

TEST_CASE("vertical-line projections separate at unit rate on tilted planes") {
    // planes V_theta with |omega(e_1, w)| > 1/2 for the unit spanning w
    Rng rng(53);
    int planes_done = 0;
    while (planes_done < 20) {
        double theta = rng.uniform(0, M_PI);
        if (std::abs(std::sin(theta)) <= 0.5) continue;
        ++planes_done;
        IsotropicPlane V;
        V.n = 1;
        V.m = 1;
        V.basis = {{std::cos(theta), std::sin(theta)}};
        V.validate();
        for (int k = 0; k < 20; ++k) {
            double s = rng.uniform(-0.25, 0.25), t = rng.uniform(-0.25, 0.25);
            if (std::abs(s - t) < 1e-3) continue;
            HeisPoint p = proj_right_coset(V, HeisPoint({1, 0}, s));
            HeisPoint q = proj_right_coset(V, HeisPoint({1, 0}, t));
            double ratio = quotient_dist(V, p, q) / std::abs(s - t);
            CHECK(ratio >= 0.1);
            CHECK(ratio <= 10.0);
        }
    }
}

TEST_CASE("Grushin distance values and axioms") {
    CHECK(grushin_dist({0, 0}, {0, 1}) == 1.0);
    CHECK(grushin_dist({1, 0}, {1, 1}) == 1.0);
    CHECK(grushin_dist({0, 0}, {2, 0}) == 2.0);

    Rng rng(59);
    for (int k = 0; k < 10000; ++k) {
        GrushinPoint a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        GrushinPoint b{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double d = grushin_dist(a, b);
        CHECK(d >= 0.0);
        CHECK(grushin_dist(b, a) == d);
        CHECK(grushin_dist(a, a) == 0.0);
        if (a.v != b.v || a.tau != b.tau) CHECK(d > 0.0);
        // degree-1 homogeneity under (v,tau) -> (rv, r^2 tau)
        double r = rng.uniform(0.25, 4);
        GrushinPoint ar{r * a.v, r * r * a.tau}, br{r * b.v, r * r * b.tau};
        CHECK(grushin_dist(ar, br) == doctest::Approx(r * d).epsilon(1e-12));
    }
}

TEST_CASE("quotient and Grushin distances are comparable on V0-perp") {
    IsotropicPlane V = canonical_plane(1, 1);
    Rng rng(61);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < 10000; ++k) {
        HeisPoint p = random_v0perp_point(rng, 1), q = random_v0perp_point(rng, 1);
        double dg = grushin_dist({p.z[1], p.t}, {q.z[1], q.t});
        if (dg < 1e-9) continue;
        double ratio = quotient_dist(V, p, q) / dg;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(lo >= 0.1);
    CHECK(hi <= 10.0);
}

TEST_CASE("Grushin length on straight segments and dilations") {
    auto segment = [](GrushinPoint a, GrushinPoint b, size_t n) {
        PlanarPath path;
        path.samples.resize(n);
        for (size_t i = 0; i < n; ++i) {
            double s = static_cast<double>(i) / static_cast<double>(n - 1);
            path.samples[i] = {a.v + s * (b.v - a.v), a.tau + s * (b.tau - a.tau)};
        }
        return path;
    };
    CHECK(grushin_length(segment({1, 0}, {2, 0}, 1001)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(grushin_length(segment({1, 0}, {1, 1}, 1001)) == doctest::Approx(1.0).epsilon(1e-9));

    Rng rng(67);
    PlanarPath path = smooth_random_path(rng, 1001);
    double len = grushin_length(path);
    PlanarPath scaled = path;
    for (auto& s : scaled.samples) {
        s.v *= 3.0;
        s.tau *= 9.0;
    }
    CHECK(grushin_length(scaled) == doctest::Approx(3.0 * len).epsilon(1e-8));

    // interior crossing of {v=0} with moving tau is rejected
    PlanarPath badpath;
    badpath.samples = {{1, 0}, {0, 0.5}, {1, 1}};
    CHECK_THROWS_AS(grushin_length(badpath), std::invalid_argument);
}

TEST_CASE("horizontal length on explicit paths") {
    HeisPath seg;
    seg.samples.resize(1001);
    for (size_t i = 0; i < seg.samples.size(); ++i) {
        double s = static_cast<double>(i) / 1000.0;
        seg.samples[i] = HeisPoint({s, 0}, 0);
    }
    CHECK(heis_horizontal_length(seg) == doctest::Approx(1.0).epsilon(1e-9));

    HeisPath vertical;
    vertical.samples = {HeisPoint({0, 0}, 0), HeisPoint({0, 0}, 1)};
    CHECK_THROWS_AS(heis_horizontal_length(vertical), std::invalid_argument);
}

TEST_CASE("lift round-trip: project back, preserve length, stay horizontal") {
    IsotropicPlane V = canonical_plane(1, 1);
    Rng rng(71);
    for (int k = 0; k < 100; ++k) {
        PlanarPath path = smooth_random_path(rng, 8001);
        HeisPath lift = grushin_lift(path);
        // projecting each lifted sample reproduces the planar path
        for (size_t i = 0; i < path.samples.size(); i += 97) {
            HeisPoint back = proj_right_coset(V, lift.samples[i]);
            CHECK(std::abs(back.z[0]) <= 1e-9);
            CHECK(std::abs(back.z[1] - path.samples[i].v) <= 1e-9);
            CHECK(std::abs(back.t - path.samples[i].tau) <= 1e-9);
        }
        double lg = grushin_length(path);
        double lh = heis_horizontal_length(lift);  // throws if not horizontal
        CHECK(std::abs(lh - lg) <= 1e-6 * std::max(1.0, lg));
    }
}

TEST_CASE("lift of the vertical Grushin segment") {
    PlanarPath path;
    path.samples.resize(1001);
    for (size_t i = 0; i < path.samples.size(); ++i) {
        double s = static_cast<double>(i) / 1000.0;
        path.samples[i] = {1.0, s};
    }
    HeisPath lift = grushin_lift(path);
    // u(s) = -s
    CHECK(lift.samples.back().z[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(heis_horizontal_length(lift) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(grushin_length(path) == doctest::Approx(1.0).epsilon(1e-9));
}
