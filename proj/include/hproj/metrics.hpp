#pragma once

#include <vector>

#include "hproj/grassmann.hpp"
#include "hproj/heis.hpp"

namespace hproj {

/// Solver controls for the quotient-metric infimum.
struct QuotientMetricOptions {
    int coarse_grid_points_per_axis = 17;  // >= 9
    int refine_iters = 60;                 // >= 40
    double radius_slack = 1.5;             // >= 1

    void validate() const;
};

/// Right-coset quotient distance on VPerp x R:
///   d(p,q) = inf_{w in V} d_H((w,0) * p, q),
/// minimized over |w| <= slack * (|z_p - z_q| + d_H(p,q)) by coarse grid
/// search plus cyclic golden-section refinement. Output is symmetrized
/// as min of the two directions. Inputs must already lie in VPerp x R.
double quotient_dist(const IsotropicPlane& V, const HeisPoint& p, const HeisPoint& q,
                     const QuotientMetricOptions& opts = {});

struct GrushinPoint {
    double v = 0.0;
    double tau = 0.0;
};

/// Comparable Grushin distance:
///   d'((x,y),(u,v)) = max{ |x-u|, min{ |y-v|^{1/2}, |y-v| / max{|x|,|u|} } }
/// (division by zero yields +inf, so the min picks the square root).
double grushin_dist(const GrushinPoint& a, const GrushinPoint& b);

/// Path sampled on a uniform parameter grid over [0,1].
struct PlanarPath {
    std::vector<GrushinPoint> samples;  // >= 2
};

struct HeisPath {
    std::vector<HeisPoint> samples;  // >= 2
};

/// Grushin length int [vdot^2 + taudot^2 / v^2]^{1/2} ds by trapezoid
/// rule. Interior samples on {v=0} with moving tau are rejected.
double grushin_length(const PlanarPath& path);

/// Horizontal length int (xdot^2 + ydot^2)^{1/2} ds (H^1 only). Rejects
/// paths whose horizontality defect exceeds 1e-6 per step.
double heis_horizontal_length(const HeisPath& path);

/// Horizontal lift of a Grushin path into H^1: u(s) = -int tau' / v,
/// then (x,y,t) = (u, v, tau + u v / 2). proj_right_coset(V_0, lift)
/// reproduces the input.
HeisPath grushin_lift(const PlanarPath& path);

/// The canonical plane V_0 = span{e_1..e_m} in H^n.
IsotropicPlane canonical_plane(int n, int m);

}  // namespace hproj
