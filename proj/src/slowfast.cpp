#include "jos/slowfast.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jos/errors.hpp"
#include "jos/poincare.hpp"

namespace jos {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

SlowCurveClass classify_slow_curve(double B, double A) {
    if (!(B > 0.0) || !(A > 0.0)) throw domain_error("classify_slow_curve: needs A, B > 0");
    SlowCurveClass out;
    out.B = B;
    out.A = A;
    if (A >= 1.0 + B) {
        out.label = SlowCurveLabel::Degenerate;
    } else if (std::abs(A - (1.0 - B)) <= 1e-12) {
        out.label = SlowCurveLabel::SingularCross;
    } else if (std::abs(1.0 - B) < A) {
        out.label = SlowCurveLabel::ConvexContractible;
    } else if (A < 1.0 - B) {
        out.label = SlowCurveLabel::TwoComponents;
    } else {
        // A <= |1-B| with B > 1: the curve is empty/degenerate
        out.label = SlowCurveLabel::Degenerate;
    }
    return out;
}

double convexity_certificate(double B, double A) {
    if (!(B > 0.0) || !(A > 0.0)) throw domain_error("convexity_certificate: needs A, B > 0");
    const double a = A * B, b = A * A + B * B - 1.0;
    auto P = [&](double v) { return a * v * v + b * v + a; };
    double m = std::min(P(-1.0), P(1.0));
    const double vstar = -b / (2.0 * a);
    if (vstar > -1.0 && vstar < 1.0) m = std::min(m, P(vstar));
    return m;
}

std::vector<std::pair<double, double>> slow_curve_points(double B, double A, int n) {
    if (n < 2) throw domain_error("slow_curve_points: n too small");
    // theta solves cos(theta) = -(B + A cos tau); two symmetric branches.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const int half = n / 2;
    for (int i = 0; i <= half; ++i) {
        const double tau = kTwoPi * i / half;
        const double rhs = -(B + A * std::cos(tau));
        if (rhs < -1.0 || rhs > 1.0) continue;
        // bisection on cos(theta) - rhs over [0, pi] (cos decreasing there)
        double lo = 0.0, hi = kPi;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (std::cos(mid) - rhs > 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-15) break;
        }
        const double theta = 0.5 * (lo + hi);
        pts.emplace_back(theta, tau);
        pts.emplace_back(kTwoPi - theta, tau);
    }
    if (pts.empty()) throw numerics_error("slow_curve_points: empty slow curve");
    return pts;
}

MonotonicityReport monotonicity_check(int ell, double alpha1, double alpha2, double omega,
                                      const std::vector<double>& theta_grid,
                                      const OdeSettings& s) {
    if (!(omega > 0.0)) throw domain_error("monotonicity_check: omega must be positive");
    const AlphaFamily f1{ell, alpha1, omega}, f2{ell, alpha2, omega};
    const ReducedParams rp1{double(ell), f1.A() / (2.0 * omega), 1.0 / omega};
    const ReducedParams rp2{double(ell), f2.A() / (2.0 * omega), 1.0 / omega};

    MonotonicityReport rep;
    rep.margin = 1e300;
    for (double th : theta_grid) {
        const double p1 = poincare_map(rp1, th, s);
        const double p2 = poincare_map(rp2, th, s);
        rep.margin = std::min(rep.margin, p1 - p2);
    }
    rep.holds = rep.margin > 0.0;
    return rep;
}

std::string slow_curve_svg(double B, double A, int n) {
    const auto cls = classify_slow_curve(B, A);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
    os << "<!-- slow curve, B=" << B << " A=" << A << " class=" << cls.name() << " -->\n";
    os << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\" stroke=\"black\"/>\n";
    auto px = [](double theta) { return 1000.0 * theta / kTwoPi; };
    auto py = [](double tau) { return 1000.0 - 1000.0 * tau / kTwoPi; };
    try {
        const auto pts = slow_curve_points(B, A, n);
        for (const auto& [theta, tau] : pts) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\" fill=\"black\"/>\n",
                          px(theta), py(tau));
            os << buf;
        }
    } catch (const numerics_error&) {
        os << "<!-- empty curve -->\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace jos
