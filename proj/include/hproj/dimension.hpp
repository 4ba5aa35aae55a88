#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hproj/fractal.hpp"
#include "hproj/grassmann.hpp"
#include "hproj/heis.hpp"
#include "hproj/metrics.hpp"

namespace hproj {

/// Which distance the estimators use. QuotientRightCoset requires all
/// queried points in VPerp x R; Grushin requires H^1 points in V_0-perp
/// (read as (v, tau) = (y, t)).
struct MetricKind {
    enum class Tag { Euclidean, Koranyi, QuotientRightCoset, Grushin };
    Tag tag = Tag::Euclidean;
    IsotropicPlane plane;        // QuotientRightCoset only
    QuotientMetricOptions opts;  // QuotientRightCoset only

    static MetricKind euclidean() { return {Tag::Euclidean, {}, {}}; }
    static MetricKind koranyi() { return {Tag::Koranyi, {}, {}}; }
    static MetricKind grushin() { return {Tag::Grushin, {}, {}}; }
    static MetricKind quotient(IsotropicPlane plane, QuotientMetricOptions opts = {}) {
        return {Tag::QuotientRightCoset, std::move(plane), opts};
    }

    std::string name() const;
    bool expensive() const { return tag == Tag::QuotientRightCoset; }
};

double metric_dist(const MetricKind& metric, const HeisPoint& p, const HeisPoint& q);

/// Scales (descending), greedy net counts, and the log-log fit.
struct DimensionEstimate {
    std::vector<double> scales;
    std::vector<size_t> counts;
    double slope = 0.0;
    double stderr_ = 0.0;
    int window_lo = 0;  // inclusive
    int window_hi = 0;  // exclusive
    std::string label;
    std::string metric;

    std::string to_json() const;
};

/// Size of a greedy r-net: scan points in cloud order, keep a point iff
/// its distance to every kept point exceeds r.
size_t net_count(const PointCloud& cloud, const MetricKind& metric, double r);

/// Net counts over a geometric scale ladder and the least-squares slope
/// of log count against log scale (negated). When levels >= 7 the
/// largest and smallest scales are dropped from the fit window.
/// Pairwise distances are memoized across scales for expensive metrics.
DimensionEstimate estimate_dim(const PointCloud& cloud, const MetricKind& metric,
                               double scale_lo, double scale_hi, int levels);

/// Monte Carlo s-energy of the empirical measure: mean of d(p,q)^{-s}
/// over uniformly sampled distinct index pairs.
double energy_mc(const PointCloud& cloud, double s, const MetricKind& metric, size_t pairs,
                 uint64_t seed);

/// max{dim_E, 2 dim_E - 2n} <= dim_H <= min{2 dim_E, dim_E + 1},
/// checked with slack 0.15 on each side.
struct DimensionComparisonReport {
    DimensionEstimate euclidean;
    DimensionEstimate koranyi;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double slack = 0.15;
    bool pass = false;
};

DimensionComparisonReport dimension_comparison_check(const PointCloud& cloud);

/// Least-squares slope and its standard error; shared fit helper.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_ = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hproj
