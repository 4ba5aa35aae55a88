#pragma once

#include <string>
#include <vector>

namespace hproj {

/// Piecewise lower-bound reference curves for projection dimension
/// distortion; conjecture curves are flagged and never asserted.
double bound_euclidean_right(int n, int m, double s);  // s in [0, 2n+1]
double bound_quotient_right(int n, int m, double s);   // s in [0, 2n+2]
double bound_left_best(int n, int m, double s);        // s in [0, 2n+2]
double bound_h1_left_best(double s);                   // s in [0, 4]

enum class CorFlavor { Euclidean, Quotient };
double bound_h1_cor(double s, CorFlavor flavor);  // (1,3] resp. (2,4]

double conjecture_euclidean(int n, int m, double s);  // s in [0, 2n+1]
double conjecture_quotient(int n, int m, double s);   // s in [0, 2n+2]

/// Breakpoint between the quadratic and linear pieces of the best H^1
/// left-coset bound, 5/2 + sqrt(105)/14.
double h1_cor_breakpoint();

struct BoundCurve {
    enum class Kind {
        EuclideanRight,
        QuotientRight,
        LeftCosetHeis,
        H1LeftBest,
        H1EuclideanCor,
        H1QuotientCor,
        ConjectureEuclidean,
        ConjectureQuotient,
    };
    Kind kind = Kind::EuclideanRight;
    int n = 1;
    int m = 1;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    bool conjecture = false;

    static BoundCurve make(Kind kind, int n = 1, int m = 1);
    double eval(double s) const;
    std::string name() const;
};

std::vector<BoundCurve> all_bound_curves(int n, int m);

/// CSV rows (s, value, kind, conjecture) with the given step.
std::string tabulate_curve(const BoundCurve& curve, double step);

}  // namespace hproj
