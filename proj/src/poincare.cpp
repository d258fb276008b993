#include "jos/poincare.hpp"

#include <algorithm>
#include <cmath>

#include "jos/monodromy.hpp"

namespace jos {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kParabolicTol = 1e-9;  // ||trace|-2| below this: parabolic band
}  // namespace

double poincare_map(const ReducedParams& rp, double theta0, const OdeSettings& s) {
    return flow_theta(rp, theta0, 0.0, kTwoPi, s);
}

std::vector<double> uniform_theta_grid(int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = kTwoPi * i / n;
    return g;
}

double displacement_sup(const ReducedParams& rp, int ell, const std::vector<double>& theta_grid,
                        const OdeSettings& s) {
    double sup = 0.0;
    for (double th : theta_grid)
        sup = std::max(sup, std::abs(poincare_map(rp, th, s) - th - kTwoPi * ell));
    return sup;
}

// ------------------------------------------------------------------
// Moebius circle map with lift
// ------------------------------------------------------------------

double MobiusCircleMap::raw_angle(double theta) const {
    const cplx w = std::polar(1.0, theta);
    const cplx num = m_.c + m_.d * w;
    const cplx den = m_.a + m_.b * w;
    return std::arg(num / den);
}

MobiusCircleMap::MobiusCircleMap(const mat2& m, double p0) : m_(m), p0_(p0) {
    // March theta over [0, 2pi] unwrapping the image angle.  For a strictly
    // increasing degree-one circle map every forward increment lies in
    // [0, 2pi), so wrapping the measured angle difference into [0, 2pi)
    // reconstructs the lift exactly; the grid is refined until increments are
    // small so that interpolation between nodes stays within half a turn.
    const int n0 = 512;
    grid_theta_.reserve(n0 + 1);
    grid_lift_.reserve(n0 + 1);
    grid_theta_.push_back(0.0);
    grid_lift_.push_back(p0_);
    double prev_raw = raw_angle(0.0);
    double lift = p0_;
    double theta = 0.0;
    const double step0 = kTwoPi / n0;
    while (theta < kTwoPi - 1e-15) {
        double h = std::min(step0, kTwoPi - theta);
        for (;;) {
            const double raw = raw_angle(theta + h);
            double inc = raw - prev_raw;
            inc -= kTwoPi * std::floor(inc / kTwoPi);  // into [0, 2pi)
            if (inc < 0.5 * 3.14159265358979323846 || h < 1e-6) {
                theta += h;
                lift += inc;
                prev_raw = raw;
                grid_theta_.push_back(theta);
                grid_lift_.push_back(lift);
                break;
            }
            h *= 0.5;
        }
    }
    // Close the period exactly: P(2pi) = P(0) + 2pi holds for the true map,
    // so distribute the tiny numerical defect over the last node.
    grid_lift_.back() = p0_ + kTwoPi;

    dmin_ = dmax_ = p0_;
    for (std::size_t i = 0; i < grid_theta_.size(); ++i) {
        const double d = grid_lift_[i] - grid_theta_[i];
        dmin_ = std::min(dmin_, d);
        dmax_ = std::max(dmax_, d);
    }
}

double MobiusCircleMap::lift(double theta) const {
    // Reduce to [0, 2pi), look up the branch from the grid, evaluate exactly.
    const double k = std::floor(theta / kTwoPi);
    const double th = theta - kTwoPi * k;
    const auto it = std::upper_bound(grid_theta_.begin(), grid_theta_.end(), th);
    const std::size_t j = std::min(grid_theta_.size() - 1,
                                   static_cast<std::size_t>(it - grid_theta_.begin()));
    const std::size_t i = j > 0 ? j - 1 : 0;
    double approx;
    if (j == i)
        approx = grid_lift_[i];
    else {
        const double t = (th - grid_theta_[i]) / (grid_theta_[j] - grid_theta_[i]);
        approx = grid_lift_[i] + t * (grid_lift_[j] - grid_lift_[i]);
    }
    const double raw = raw_angle(th);
    const double branch = std::round((approx - raw) / kTwoPi);
    return raw + kTwoPi * branch + kTwoPi * k;
}

cplx MobiusCircleMap::multiplier_interior_fixed_point() const {
    // Fixed points of Phi -> (c + d Phi)/(a + b Phi):  b Phi^2 + (a-d) Phi - c = 0.
    const cplx b = m_.b, amd = m_.a - m_.d, c = m_.c;
    cplx w;
    if (std::abs(b) < 1e-300) {
        if (std::abs(amd) < 1e-300) return 1.0;  // identity-like: rotation angle 0
        w = c / amd;
        if (std::abs(w) > 1.0) {
            // the other fixed point is at infinity; derivative there is a/d
            return m_.a / m_.d;
        }
    } else {
        const cplx disc = std::sqrt(amd * amd + 4.0 * b * c);
        const cplx w1 = (-amd + disc) / (2.0 * b);
        const cplx w2 = (-amd - disc) / (2.0 * b);
        w = (std::abs(w1) <= std::abs(w2)) ? w1 : w2;
    }
    // m'(w) = det M / (a + b w)^2
    const cplx den = m_.a + m_.b * w;
    return det(m_) / (den * den);
}

// ------------------------------------------------------------------
// Rotation number
// ------------------------------------------------------------------

RotationResult rotation_number(const PhysParams& p, const OdeSettings& s) {
    p.validate();
    const ReducedParams rp = to_reduced(p);

    const LinearSystem sys = josephson_coefficients(rp);
    const mat2 M = monodromy_matrix(sys, s);
    const double p0 = poincare_map(rp, 0.0, s);
    const MobiusCircleMap map(M, p0);

    // Normalize so the classification reads off a unimodular trace.
    const cplx sq = std::sqrt(det(M));
    const cplx tr_hat = trace(M) / sq;
    const double t = std::abs(tr_hat.real());

    RotationResult out;
    const double dmin = map.displacement_min(), dmax = map.displacement_max();
    const double mid = 0.5 * (dmin + dmax);

    auto snap_to_class = [&](double angle) {
        // unique representative of angle (mod 2pi) nearest to [dmin, dmax]
        double n = std::round((mid - angle) / kTwoPi);
        double cand = angle + kTwoPi * n;
        // distance to the enclosure interval
        auto dist = [&](double v) {
            if (v < dmin) return dmin - v;
            if (v > dmax) return v - dmax;
            return 0.0;
        };
        const double alt1 = cand + kTwoPi, alt2 = cand - kTwoPi;
        if (dist(alt1) < dist(cand)) cand = alt1;
        if (dist(alt2) < dist(cand)) cand = alt2;
        return cand;
    };

    if (t < 2.0 - kParabolicTol) {
        // Elliptic: rotation angle is the argument of the multiplier at the
        // interior fixed point; the lift enclosure picks the integer part.
        const cplx mult = map.multiplier_interior_fixed_point();
        const double angle = std::arg(mult);
        const double rot = snap_to_class(angle);
        // Ambiguity guard: another representative nearly as close means the
        // enclosure is too wide (close to parabolic) -> use iteration.
        const double width = dmax - dmin;
        if (kTwoPi - width > 0.5) {
            out.rho = rot / kTwoPi;
            out.winding = static_cast<int>(std::llround((rot - angle) / kTwoPi));
            out.method = RotationResult::Method::MobiusEigenvalue;
            out.certified_error = 1e-9;
            return out;
        }
    } else if (t > 2.0 + kParabolicTol) {
        // Hyperbolic: there are fixed points on the circle, rho is an integer.
        const double rot = snap_to_class(0.0);
        out.rho = rot / kTwoPi;
        out.winding = static_cast<int>(std::llround(out.rho));
        out.rho = out.winding;  // exactly integer
        out.method = RotationResult::Method::MobiusEigenvalue;
        out.certified_error = 1e-9;
        return out;
    }

    // Parabolic band (or ambiguous elliptic): orbit averaging of the lifted
    // Moebius iteration.  |P^N(x) - x - N rot| < 2pi gives error < 1/N.
    const int N = 1 << 17;
    double th = 0.0;
    for (int i = 0; i < N; ++i) th = map.lift(th);
    const double rho_avg = th / (kTwoPi * N);
    out.method = RotationResult::Method::Iteration;
    const double snapped = std::round(rho_avg);
    if (std::abs(rho_avg - snapped) < 2.0 / N) {
        out.rho = snapped;
        out.certified_error = std::max(1e-9, std::abs(rho_avg - snapped));
    } else {
        out.rho = rho_avg;
        out.certified_error = 1.0 / N;
    }
    out.winding = static_cast<int>(std::llround(out.rho));
    return out;
}

}  // namespace jos
