#include "hproj/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <unordered_map>

#include "hproj/rng.hpp"

namespace hproj {

std::string MetricKind::name() const {
    switch (tag) {
        case Tag::Euclidean: return "euclidean";
        case Tag::Koranyi: return "koranyi";
        case Tag::QuotientRightCoset: return "quotient_right_coset";
        case Tag::Grushin: return "grushin";
    }
    return "?";
}

double metric_dist(const MetricKind& metric, const HeisPoint& p, const HeisPoint& q) {
    switch (metric.tag) {
        case MetricKind::Tag::Euclidean:
            return euclid_dist(p, q);
        case MetricKind::Tag::Koranyi:
            return koranyi_dist(p, q);
        case MetricKind::Tag::QuotientRightCoset:
            return quotient_dist(metric.plane, p, q, metric.opts);
        case MetricKind::Tag::Grushin: {
            if (p.ambient_n() != 1 || q.ambient_n() != 1)
                throw std::invalid_argument("Grushin metric needs H^1 points in V_0-perp");
            return grushin_dist({p.z[1], p.t}, {q.z[1], q.t});
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

// lazy pairwise-distance memo shared across scales of one estimate
class PairCache {
public:
    PairCache(const PointCloud& cloud, const MetricKind& metric, bool enabled)
        : cloud_(cloud), metric_(metric), enabled_(enabled) {}

    double dist(size_t i, size_t j) {
        if (!enabled_) return metric_dist(metric_, cloud_.points[i], cloud_.points[j]);
        if (i > j) std::swap(i, j);
        uint64_t key = (static_cast<uint64_t>(i) << 32) | j;
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        double d = metric_dist(metric_, cloud_.points[i], cloud_.points[j]);
        memo_.emplace(key, d);
        return d;
    }

private:
    const PointCloud& cloud_;
    const MetricKind& metric_;
    bool enabled_;
    std::unordered_map<uint64_t, double> memo_;
};

size_t greedy_net(const PointCloud& cloud, PairCache& cache, double r) {
    std::vector<size_t> kept;
    for (size_t i = 0; i < cloud.points.size(); ++i) {
        bool keep = true;
        for (size_t k : kept) {
            if (cache.dist(i, k) <= r) {
                keep = false;
                break;
            }
        }
        if (keep) kept.push_back(i);
    }
    return kept.size();
}

}  // namespace

size_t net_count(const PointCloud& cloud, const MetricKind& metric, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("net_count: r must be positive");
    PairCache cache(cloud, metric, false);
    return greedy_net(cloud, cache, r);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t k = x.size();
    if (k < 2 || y.size() != k) throw std::invalid_argument("fit_line: need >= 2 points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < k; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (k > 2) {
        double ss = 0.0;
        for (size_t i = 0; i < k; ++i) {
            double resid = y[i] - fit.intercept - fit.slope * x[i];
            ss += resid * resid;
        }
        fit.stderr_ = std::sqrt(ss / (static_cast<double>(k) - 2.0) / sxx);
    }
    return fit;
}

DimensionEstimate estimate_dim(const PointCloud& cloud, const MetricKind& metric,
                               double scale_lo, double scale_hi, int levels) {
    cloud.validate();
    if (levels < 5) throw std::invalid_argument("estimate_dim: levels must be >= 5");
    if (!(scale_lo > 0.0 && scale_lo < scale_hi))
        throw std::invalid_argument("estimate_dim: need 0 < scale_lo < scale_hi");
    if (metric.tag == MetricKind::Tag::Euclidean && scale_lo < 10.0 * cloud.resolution)
        throw std::invalid_argument("estimate_dim: scale_lo below 10x generation resolution");
    // diameter check, against the cheap upper estimate 2 * max dist to points[0]
    double rad = 0.0;
    for (size_t i = 1; i < cloud.points.size(); ++i)
        rad = std::max(rad, metric_dist(metric, cloud.points[0], cloud.points[i]));
    if (scale_hi > 2.0 * rad)
        throw std::invalid_argument("estimate_dim: scale_hi above cloud diameter");

    DimensionEstimate est;
    est.label = cloud.label;
    est.metric = metric.name();
    PairCache cache(cloud, metric, metric.expensive());
    for (int i = 0; i < levels; ++i) {
        double f = static_cast<double>(i) / (levels - 1);
        double r = scale_hi * std::pow(scale_lo / scale_hi, f);
        est.scales.push_back(r);
        est.counts.push_back(greedy_net(cloud, cache, r));
    }
    est.window_lo = (levels >= 7) ? 1 : 0;
    est.window_hi = (levels >= 7) ? levels - 1 : levels;

    std::vector<double> lx, ly;
    for (int i = est.window_lo; i < est.window_hi; ++i) {
        lx.push_back(std::log(est.scales[i]));
        ly.push_back(std::log(static_cast<double>(est.counts[i])));
    }
    LineFit fit = fit_line(lx, ly);
    est.slope = -fit.slope;
    est.stderr_ = fit.stderr_;
    return est;
}

std::string DimensionEstimate::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["metric"] = metric;
    j["scales"] = scales;
    j["counts"] = counts;
    j["slope"] = slope;
    j["stderr"] = stderr_;
    j["window"] = {window_lo, window_hi};
    return j.dump();
}

double energy_mc(const PointCloud& cloud, double s, const MetricKind& metric, size_t pairs,
                 uint64_t seed) {
    cloud.validate();
    if (!(s > 0.0)) throw std::invalid_argument("energy_mc: s must be positive");
    if (pairs < 10000) throw std::invalid_argument("energy_mc: need at least 10^4 pairs");
    const size_t npts = cloud.points.size();
    if (npts < 2) throw std::invalid_argument("energy_mc: need at least 2 points");
    Rng rng(seed);
    double acc = 0.0;
    for (size_t k = 0; k < pairs; ++k) {
        size_t i = rng.uniform_index(npts);
        size_t j = rng.uniform_index(npts - 1);
        if (j >= i) ++j;
        acc += std::pow(metric_dist(metric, cloud.points[i], cloud.points[j]), -s);
    }
    return acc / static_cast<double>(pairs);
}

DimensionComparisonReport dimension_comparison_check(const PointCloud& cloud) {
    DimensionComparisonReport rep;
    auto auto_estimate = [&](const MetricKind& metric) {
        double rad = 0.0;
        for (size_t i = 1; i < cloud.points.size(); ++i)
            rad = std::max(rad, metric_dist(metric, cloud.points[0], cloud.points[i]));
        double hi = rad / 2.0;
        double lo = std::max(10.0 * cloud.resolution, hi / 128.0);
        if (metric.tag == MetricKind::Tag::Koranyi)
            lo = std::max(lo, hi / 128.0);  // Koranyi resolution dominates Euclidean locally
        return estimate_dim(cloud, metric, lo, hi, 7);
    };
    rep.euclidean = auto_estimate(MetricKind::euclidean());
    rep.koranyi = auto_estimate(MetricKind::koranyi());
    double de = rep.euclidean.slope;
    rep.lower_bound = std::max(de, 2.0 * de - 2.0 * cloud.n);
    rep.upper_bound = std::min(2.0 * de, de + 1.0);
    rep.pass = rep.koranyi.slope >= rep.lower_bound - rep.slack &&
               rep.koranyi.slope <= rep.upper_bound + rep.slack;
    return rep;
}

}  // namespace hproj
