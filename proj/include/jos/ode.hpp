#ifndef JOS_ODE_HPP
#define JOS_ODE_HPP

// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) with PI
// step-size control.  The integrator is deliberately small: the systems in
// this project are non-stiff, low dimensional (<= 12 components) and are
// integrated millions of times in parameter sweeps, so the state is a fixed
// size std::array and the right-hand side is a template functor that the
// compiler can inline.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "jos/errors.hpp"

namespace jos {

struct OdeSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;        // 0 means "span of integration"
    long max_evals = 20'000'000;  // budget of right-hand-side evaluations

    void validate() const {
        if (!(rel_tol > 0.0) || rel_tol > 1e-2 || !(abs_tol > 0.0) || abs_tol > 1e-2)
            throw domain_error("OdeSettings: tolerances must lie in (0, 1e-2]");
        if (max_evals <= 0) throw domain_error("OdeSettings: max_evals must be positive");
        if (max_step < 0.0 || !std::isfinite(max_step))
            throw domain_error("OdeSettings: max_step must be finite and >= 0");
    }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5.0, dp_c3 = 3.0 / 10.0, dp_c4 = 4.0 / 5.0,
                        dp_c5 = 8.0 / 9.0;

inline constexpr double dp_a21 = 1.0 / 5.0;
inline constexpr double dp_a31 = 3.0 / 40.0, dp_a32 = 9.0 / 40.0;
inline constexpr double dp_a41 = 44.0 / 45.0, dp_a42 = -56.0 / 15.0, dp_a43 = 32.0 / 9.0;
inline constexpr double dp_a51 = 19372.0 / 6561.0, dp_a52 = -25360.0 / 2187.0,
                        dp_a53 = 64448.0 / 6561.0, dp_a54 = -212.0 / 729.0;
inline constexpr double dp_a61 = 9017.0 / 3168.0, dp_a62 = -355.0 / 33.0,
                        dp_a63 = 46732.0 / 5247.0, dp_a64 = 49.0 / 176.0,
                        dp_a65 = -5103.0 / 18656.0;
inline constexpr double dp_b1 = 35.0 / 384.0, dp_b3 = 500.0 / 1113.0, dp_b4 = 125.0 / 192.0,
                        dp_b5 = -2187.0 / 6784.0, dp_b6 = 11.0 / 84.0;
// embedded 4th order error weights (b - bhat)
inline constexpr double dp_e1 = 71.0 / 57600.0, dp_e3 = -71.0 / 16695.0, dp_e4 = 71.0 / 1920.0,
                        dp_e5 = -17253.0 / 339200.0, dp_e6 = 22.0 / 525.0, dp_e7 = -1.0 / 40.0;

}  // namespace detail

// One accepted step, reported to the observer.  f0/f1 are the derivatives at
// the endpoints, enough for cubic-Hermite reconstruction inside the step.
template <std::size_t N>
struct OdeStep {
    double t0, t1;
    std::array<double, N> y0, y1, f0, f1;

    // Cubic Hermite interpolation at t in [t0, t1].
    std::array<double, N> eval(double t) const {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
        return out;
    }
};

// Integrate y' = f(t, y) from t0 to t1 (t1 may be below t0).  f has signature
// void(double t, const std::array<double,N>& y, std::array<double,N>& dydt).
// The observer (if any) receives every accepted step and may return false to
// stop the integration early; modifying step.y1 re-seats the integrator state
// (used for constraint re-projection).
template <std::size_t N, class F, class Observer>
void integrate_adaptive(F&& f, std::array<double, N>& y, double t0, double t1,
                        const OdeSettings& s, Observer&& observer) {
    s.validate();
    if (t0 == t1) return;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = (s.max_step > 0.0) ? std::min(s.max_step, span) : span;

    using state = std::array<double, N>;
    state k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;

    long evals = 0;
    auto rhs = [&](double t, const state& yy, state& out) {
        f(t, yy, out);
        ++evals;
    };

    double t = t0;
    rhs(t, y, k1);

    // initial step heuristic
    double h = hmax;
    {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = s.abs_tol + s.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        if (d1 > 1e-10) h = std::min(hmax, 0.01 * d0 / d1);
        if (!(h > 0)) h = 1e-6 * span;
    }

    double err_prev = 1.0;
    const double minh = 16.0 * std::numeric_limits<double>::epsilon() * span;

    while (dir * (t1 - t) > 0) {
        if (evals > s.max_evals)
            throw budget_error("integrate_adaptive: evaluation budget exhausted");
        h = std::min(h, std::abs(t1 - t));
        if (h < minh) h = minh;
        const double hs = dir * h;

        using namespace detail;
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * dp_a21 * k1[i];
        rhs(t + dp_c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (dp_a31 * k1[i] + dp_a32 * k2[i]);
        rhs(t + dp_c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
        rhs(t + dp_c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] + dp_a54 * k4[i]);
        rhs(t + dp_c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                                   dp_a64 * k4[i] + dp_a65 * k5[i]);
        rhs(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (dp_b1 * k1[i] + dp_b3 * k3[i] + dp_b4 * k4[i] +
                                   dp_b5 * k5[i] + dp_b6 * k6[i]);
        rhs(t + hs, ynew, k7);  // FSAL

        double err = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = hs * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] +
                                   dp_e5 * k5[i] + dp_e6 * k6[i] + dp_e7 * k7[i]);
            const double sc = s.abs_tol + s.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0 || h <= minh) {
            OdeStep<N> step{t, t + hs, y, ynew, k1, k7};
            t += hs;
            y = ynew;
            k1 = k7;
            err_prev = std::max(err, 1e-4);
            if (!observer(step)) return;
            if (step.y1 != y) {
                // the observer adjusted the state (constraint re-projection)
                y = step.y1;
                rhs(t, y, k1);
            }
        }
        // PI controller
        const double fac =
            0.9 * std::pow(std::max(err, 1e-16), -0.2) * std::pow(err_prev, 0.08);
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::min(h, hmax);
    }
}

template <std::size_t N, class F>
void integrate_adaptive(F&& f, std::array<double, N>& y, double t0, double t1,
                        const OdeSettings& s) {
    integrate_adaptive(std::forward<F>(f), y, t0, t1, s, [](OdeStep<N>&) { return true; });
}

}  // namespace jos

#endif
