#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hproj/heis.hpp"

namespace hproj {

/// An m-dimensional isotropic subspace V of R^{2n}, held as an
/// orthonormal basis. Orthonormality and vanishing of the symplectic
/// form on V are enforced at tolerance 1e-10.
struct IsotropicPlane {
    int n = 0;
    int m = 0;
    std::vector<Vec> basis;  // m vectors of length 2n

    void validate() const;  // throws on invariant violation
};

/// Deterministic Haar sampler for G_h(n,m): V = R * span{e_1..e_m} with
/// R drawn from U(n) (complex Ginibre -> QR, R-diagonal rescaled to unit
/// phases) and embedded in O(2n) as [[A,-B],[B,A]].
class PlaneSampler {
public:
    PlaneSampler(int n, int m, uint64_t seed);

    IsotropicPlane sample();

    /// Sampler for task k of a parallel fan-out; deterministic regardless
    /// of schedule.
    PlaneSampler fork(uint64_t task_index) const;

    int n() const { return n_; }
    int m() const { return m_; }
    uint64_t seed() const { return seed_; }

private:
    int n_;
    int m_;
    uint64_t seed_;
    uint64_t draws_ = 0;
};

/// Euclidean orthogonal projection of z onto V or its orthocomplement.
enum class SubspacePart { V, VPerp };
Vec proj_subspace(const IsotropicPlane& V, const Vec& z, SubspacePart which);

/// P_V(z,t) = (pi_V(z), 0).
HeisPoint proj_horizontal(const IsotropicPlane& V, const HeisPoint& p);

/// Right coset projection:
/// P^R(z,t) = (pi_{V+}(z), t - omega(pi_V z, pi_{V+} z)/2).
HeisPoint proj_right_coset(const IsotropicPlane& V, const HeisPoint& p);

/// Left coset projection, P^L(p) = -P^R(-p).
HeisPoint proj_left_coset(const IsotropicPlane& V, const HeisPoint& p);

/// Largest |pi_V(z_p)| coordinate; zero iff p lies in VPerp x R.
double vertical_defect(const IsotropicPlane& V, const HeisPoint& p);

/// JSON round-trip: {n, m, basis: row-major array}. Bit-exact.
std::string plane_to_json(const IsotropicPlane& V);
IsotropicPlane plane_from_json(const std::string& text);

/// Operator norm of pi_V - pi_W as matrices on R^{2n}.
double projector_distance(const IsotropicPlane& V, const IsotropicPlane& W);

}  // namespace hproj
