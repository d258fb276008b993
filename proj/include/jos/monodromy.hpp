#ifndef JOS_MONODROMY_HPP
#define JOS_MONODROMY_HPP

// Linear systems with two irregular nonresonant rank-1 singular points (0 and
// infinity), their monodromy, formal residues, Stokes-type decomposition of
// the monodromy matrix, q-points and the transition cross-ratio.

#include <array>
#include <optional>
#include <string>

#include "jos/flows.hpp"
#include "jos/mat2.hpp"
#include "jos/params.hpp"

namespace jos {

enum class SingularPoint { Zero, Infinity };

// A point of the Riemann sphere in homogeneous coordinates [x : y]; the
// affine value is y/x (so [1 : w] is w and [0 : 1] is infinity).  This keeps
// the cross-ratio arithmetic exact through infinities.
struct ProjPoint {
    cplx x{1.0}, y{0.0};

    static ProjPoint affine(cplx w) { return {1.0, w}; }
    static ProjPoint infinity() { return {0.0, 1.0}; }
    bool is_infinite(double tol = 1e-12) const { return std::abs(x) <= tol * std::abs(y); }
    cplx value() const { return y / x; }  // may overflow to inf, intended
};

// det-normalized pairwise difference used by the cross-ratio.
cplx proj_pair(const ProjPoint& p, const ProjPoint& q);

// Cross-ratio (a-c)(b-d) / ((a-d)(b-c)) evaluated projectively.
ProjPoint cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                      const ProjPoint& d);

struct MonodromyStokesData {
    ProjPoint q10, q20, q1inf, q2inf;
    mat2 M;
    cplx base_point{1.0};
    double certified_error = 0.0;  // estimated accuracy of the q-points

    std::string to_json() const;
};

struct StokesDecomposition {
    mat2 m_norm;  // diagonal formal monodromy
    cplx c0{0.0}, c1{0.0};
    double reconstruction_residual = 0.0;
};

// The linear system equivalent to the torus flow:
//   Y' = ( diag(-mu,0)/z^2 + B/z + diag(-mu,0) ) Y,
//   B = [[-ell, -1/(2 omega)], [1/(2 omega), 0]].
// Requires mu != 0 so that both singular points are nonresonant.
LinearSystem build_josephson_system(const ReducedParams& rp);

// Same coefficients without the nonresonance requirement (used internally by
// the rotation-number machinery, where mu = 0 is a legitimate input).
LinearSystem josephson_coefficients(const ReducedParams& rp);

// Fundamental solution along the full counterclockwise unit circle from z=1.
mat2 monodromy_matrix(const LinearSystem& sys, const OdeSettings& s = {});

bool is_monodromy_trivial(const LinearSystem& sys, double tol = 1e-7, const OdeSettings& s = {});

// Diagonal part of H^-1 R H where H diagonalizes the main term at the chosen
// point (K2 at zero, K0 at infinity; the residue is K1 at both, stated in the
// z-chart).  If the main term is already diagonal H = Id; otherwise the
// eigenvalues are ordered by ascending real part (ties by imaginary part).
mat2 formal_residue(const LinearSystem& sys, SingularPoint at);

// Splits a monodromy matrix written in a canonical-type basis into formal
// monodromy and two unipotent triangular factors, M = M_norm C1^-1 C0^-1.
// upper_first selects (C0 upper, C1 lower); the flag flipped selects the
// opposite triangular types.
StokesDecomposition stokes_from_monodromy(const mat2& M, bool upper_first = true);

// q-points: projections to the Phi-sphere (Phi = Y2/Y1) of the canonical
// solutions at both singular points, evaluated at the base point z0 = 1,
// together with the monodromy matrix.  Requires a system that is real on the
// real axis.  Exact when the Stokes data is trivial (in particular at and
// near trivial-monodromy systems, which is where these are consumed); away
// from that locus the values are approximate and the certified_error field
// reflects the tail estimates of the series involved.
MonodromyStokesData q_points(const LinearSystem& sys, const OdeSettings& s = {});

// (q10-q1inf)(q20-q2inf) / ((q10-q2inf)(q20-q1inf)) as a sphere point.
ProjPoint transition_cross_ratio(const LinearSystem& sys, const OdeSettings& s = {});

}  // namespace jos

#endif
