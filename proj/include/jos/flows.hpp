#ifndef JOS_FLOWS_HPP
#define JOS_FLOWS_HPP

// Concrete flows built on the generic integrator: the scalar torus flow on
// the universal cover, fundamental solutions of 2x2 linear systems along
// paths in C*, and variational flows in the parameters.

#include <vector>

#include "jos/mat2.hpp"
#include "jos/ode.hpp"
#include "jos/params.hpp"

namespace jos {

// A path in the punctured plane along which a linear system is integrated.
// Both kinds avoid 0 and infinity by construction (radii must be positive).
struct PathInCStar {
    enum class Kind { UnitCircleArc, RadialSegment };
    Kind kind = Kind::UnitCircleArc;
    // UnitCircleArc: z = exp(i tau), tau from tau0 to tau1.
    double tau0 = 0.0, tau1 = 0.0;
    // RadialSegment: z = r exp(i phi), r from r0 to r1 (both > 0).
    double r0 = 1.0, r1 = 1.0, phi = 0.0;

    static PathInCStar circle_arc(double a, double b) {
        PathInCStar p;
        p.kind = Kind::UnitCircleArc;
        p.tau0 = a;
        p.tau1 = b;
        return p;
    }
    static PathInCStar radial(double from, double to, double angle = 0.0) {
        PathInCStar p;
        p.kind = Kind::RadialSegment;
        p.r0 = from;
        p.r1 = to;
        p.phi = angle;
        return p;
    }
    void validate() const;
};

// Coefficients of  Y' = (K2/z^2 + K1/z + K0) Y  on the Riemann sphere.
// K2 is the main term at 0, K0 the main term at infinity.
struct LinearSystem {
    mat2 K2, K1, K0;

    mat2 coefficient(cplx z) const {
        const cplx iz = 1.0 / z;
        return (iz * iz) * K2 + iz * K1 + K0;
    }
};

// theta(tau1) of  dtheta/dtau = eta cos(theta) + ell + 2 mu cos(tau),
// theta(tau0) = theta0, integrated on the universal cover (no reduction).
double flow_theta(const ReducedParams& rp, double theta0, double tau0, double tau1,
                  const OdeSettings& s = {});

// Fundamental solution along the path with Y(start) = Id.
mat2 flow_linear(const LinearSystem& sys, const PathInCStar& path, const OdeSettings& s = {});

// Derivatives of the flow in (mu, eta) at the locus mu = eta = 0, ell a
// nonzero integer.  mixed[k-1] holds d^{k+1} theta / (d eta d mu^k) for
// k = 1..ell, all evaluated at tau1.
struct VariationalResult {
    double theta = 0.0;
    double d_eta = 0.0;
    double d_mu = 0.0;
    double d2_eta = 0.0;
    std::vector<double> mixed;
};

VariationalResult flow_variational(const ReducedParams& rp0, double theta0, double tau1,
                                   const OdeSettings& s = {});

}  // namespace jos

#endif
