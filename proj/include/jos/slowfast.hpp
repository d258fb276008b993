#ifndef JOS_SLOWFAST_HPP
#define JOS_SLOWFAST_HPP

// Slow-curve geometry of the torus flow for small frequency: the zero set of
// f(theta, tau) = cos(theta) + B + A cos(tau), its topological type, a
// convexity certificate, and the pointwise comparison of lifted period maps
// for the one-parameter ordinate families A_alpha = 1 + (ell - alpha) omega.

#include <string>
#include <utility>
#include <vector>

#include "jos/ode.hpp"

namespace jos {

enum class SlowCurveLabel { ConvexContractible, SingularCross, TwoComponents, Degenerate };

struct SlowCurveClass {
    SlowCurveLabel label = SlowCurveLabel::Degenerate;
    double B = 0.0, A = 0.0;

    const char* name() const {
        switch (label) {
            case SlowCurveLabel::ConvexContractible: return "convex-contractible";
            case SlowCurveLabel::SingularCross: return "singular-cross";
            case SlowCurveLabel::TwoComponents: return "two-components";
            default: return "degenerate";
        }
    }
};

struct AlphaFamily {
    int ell = 1;
    double alpha = 1.0;
    double omega = 0.05;

    double A() const { return 1.0 + (ell - alpha) * omega; }
    double B() const { return ell * omega; }
};

// ConvexContractible iff |1-B| < A < 1+B; SingularCross on A = 1-B;
// TwoComponents for 0 < A < 1-B; anything with A >= 1+B is Degenerate.
SlowCurveClass classify_slow_curve(double B, double A);

// Minimum over [-1, 1] of P(v) = A B v^2 + v (A^2 + B^2 - 1) + A B; a positive
// value certifies strict convexity of the slow curve.
double convexity_certificate(double B, double A);

// n points on {f = 0} in the fundamental square, solved to 1e-12 per tau.
std::vector<std::pair<double, double>> slow_curve_points(double B, double A, int n);

struct MonotonicityReport {
    bool holds = false;
    double margin = 0.0;  // min over the grid of P1(theta) - P2(theta)
};

// Whether the lifted period map of the family alpha2 is pointwise below that
// of alpha1 (alpha1 < alpha2) at B = ell omega, and the minimal gap.
MonotonicityReport monotonicity_check(int ell, double alpha1, double alpha2, double omega,
                                      const std::vector<double>& theta_grid,
                                      const OdeSettings& s = {});

// SVG plot of the slow curve over the fundamental square.
std::string slow_curve_svg(double B, double A, int n = 720);

}  // namespace jos

#endif
