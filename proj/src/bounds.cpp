#include "hproj/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hproj {

namespace {

void check_nm(int n, int m) {
    if (n < 1 || m < 1 || m > n) throw std::invalid_argument("bounds: need 1 <= m <= n");
}

void check_domain(double s, double lo, double hi) {
    if (!(s >= lo && s <= hi)) throw std::out_of_range("bounds: s outside curve domain");
}

}  // namespace

double bound_euclidean_right(int n, int m, double s) {
    check_nm(n, m);
    check_domain(s, 0.0, 2.0 * n + 1.0);
    if (s <= 2.0 * n - m) return s;
    if (s <= 2.0 * n) return 2.0 * n - m;
    return s - m;
}

double bound_quotient_right(int n, int m, double s) {
    check_nm(n, m);
    check_domain(s, 0.0, 2.0 * n + 2.0);
    if (s <= 2.0) return s / 2.0;
    if (s <= 2.0 * n - m + 1.0) return s - 1.0;
    if (s <= 2.0 * n + 1.0) return 2.0 * n - m;
    return s - m - 1.0;
}

double bound_left_best(int n, int m, double s) {
    check_nm(n, m);
    check_domain(s, 0.0, 2.0 * n + 2.0);
    if (s <= 1.0) return s;
    if (s <= 2.0) return 1.0;
    if (s <= 2.0 * n - m + 1.0) return s - 1.0;
    if (s <= 2.0 * n + 1.0) return 2.0 * n - m;
    return 2.0 * (s - n - 1.0) - m;
}

double h1_cor_breakpoint() { return 2.5 + std::sqrt(105.0) / 14.0; }

double bound_h1_left_best(double s) {
    check_domain(s, 0.0, 4.0);
    if (s <= 1.0) return s;
    if (s <= 2.0) return 1.0;
    if (s <= 2.5) return s / 2.0;
    if (s <= h1_cor_breakpoint()) return (s * s + s - 5.0) / (4.0 * s - 7.0);
    return 2.0 * s - 5.0;
}

double bound_h1_cor(double s, CorFlavor flavor) {
    if (flavor == CorFlavor::Euclidean) {
        check_domain(s, 1.0, 3.0);
        if (s <= 1.5) return (1.0 + s) / 2.0;
        return (s * s + 3.0 * s - 3.0) / (4.0 * s - 3.0);
    }
    check_domain(s, 2.0, 4.0);
    if (s <= 2.5) return s / 2.0;
    return (s * s + s - 5.0) / (4.0 * s - 7.0);
}

double conjecture_euclidean(int n, int m, double s) {
    check_nm(n, m);
    check_domain(s, 0.0, 2.0 * n + 1.0);
    return std::min(s, 2.0 * n - m + 1.0);
}

double conjecture_quotient(int n, int m, double s) {
    check_nm(n, m);
    check_domain(s, 0.0, 2.0 * n + 2.0);
    if (s <= 2.0) return s / 2.0;
    return std::min(s - 1.0, 2.0 * n + 1.0 - m);
}

BoundCurve BoundCurve::make(Kind kind, int n, int m) {
    BoundCurve c;
    c.kind = kind;
    c.n = n;
    c.m = m;
    switch (kind) {
        case Kind::EuclideanRight:
        case Kind::ConjectureEuclidean:
            c.domain_lo = 0.0;
            c.domain_hi = 2.0 * n + 1.0;
            break;
        case Kind::QuotientRight:
        case Kind::LeftCosetHeis:
        case Kind::ConjectureQuotient:
            c.domain_lo = 0.0;
            c.domain_hi = 2.0 * n + 2.0;
            break;
        case Kind::H1LeftBest:
            c.domain_lo = 0.0;
            c.domain_hi = 4.0;
            break;
        case Kind::H1EuclideanCor:
            c.domain_lo = 1.0;
            c.domain_hi = 3.0;
            break;
        case Kind::H1QuotientCor:
            c.domain_lo = 2.0;
            c.domain_hi = 4.0;
            break;
    }
    c.conjecture =
        (kind == Kind::ConjectureEuclidean || kind == Kind::ConjectureQuotient);
    return c;
}

double BoundCurve::eval(double s) const {
    switch (kind) {
        case Kind::EuclideanRight: return bound_euclidean_right(n, m, s);
        case Kind::QuotientRight: return bound_quotient_right(n, m, s);
        case Kind::LeftCosetHeis: return bound_left_best(n, m, s);
        case Kind::H1LeftBest: return bound_h1_left_best(s);
        case Kind::H1EuclideanCor: return bound_h1_cor(s, CorFlavor::Euclidean);
        case Kind::H1QuotientCor: return bound_h1_cor(s, CorFlavor::Quotient);
        case Kind::ConjectureEuclidean: return conjecture_euclidean(n, m, s);
        case Kind::ConjectureQuotient: return conjecture_quotient(n, m, s);
    }
    throw std::logic_error("unreachable");
}

std::string BoundCurve::name() const {
    switch (kind) {
        case Kind::EuclideanRight: return "euclidean_right";
        case Kind::QuotientRight: return "quotient_right";
        case Kind::LeftCosetHeis: return "left_coset_heis";
        case Kind::H1LeftBest: return "h1_left_best";
        case Kind::H1EuclideanCor: return "h1_euclidean_cor";
        case Kind::H1QuotientCor: return "h1_quotient_cor";
        case Kind::ConjectureEuclidean: return "conjecture_euclidean";
        case Kind::ConjectureQuotient: return "conjecture_quotient";
    }
    return "?";
}

std::vector<BoundCurve> all_bound_curves(int n, int m) {
    std::vector<BoundCurve> out;
    using K = BoundCurve::Kind;
    for (K k : {K::EuclideanRight, K::QuotientRight, K::LeftCosetHeis, K::ConjectureEuclidean,
                K::ConjectureQuotient})
        out.push_back(BoundCurve::make(k, n, m));
    if (n == 1 && m == 1)
        for (K k : {K::H1LeftBest, K::H1EuclideanCor, K::H1QuotientCor})
            out.push_back(BoundCurve::make(k));
    return out;
}

std::string tabulate_curve(const BoundCurve& curve, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("tabulate_curve: step must be positive");
    std::ostringstream os;
    os.precision(17);
    long count = std::lround((curve.domain_hi - curve.domain_lo) / step);
    for (long i = 0; i <= count; ++i) {
        double s = curve.domain_lo + static_cast<double>(i) * step;
        if (s > curve.domain_hi) s = curve.domain_hi;
        os << s << "," << curve.eval(s) << "," << curve.name() << ","
           << (curve.conjecture ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace hproj
