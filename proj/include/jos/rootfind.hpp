#ifndef JOS_ROOTFIND_HPP
#define JOS_ROOTFIND_HPP

// Small scalar solvers shared by the portrait and spectral scans.

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "jos/errors.hpp"

namespace jos {

// Brent's method on [a, b]; f(a) and f(b) must have opposite signs.
template <class F>
double brent_root(F&& f, double a, double b, double xtol, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw numerics_error("brent_root: endpoints do not bracket a sign change");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = e = m;  // bisection
        } else {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    return b;
}

// Golden-section minimization on [a, b].
template <class F>
double golden_minimize(F&& f, double a, double b, double xtol, int max_iter = 200) {
    constexpr double phi = 0.61803398874989484820;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

// Nelder-Mead on the plane, used by the off-axis constriction search.
template <class F>
std::pair<double, double> nelder_mead_2d(F&& f, double x0, double y0, double scale,
                                         double ftol, int max_iter = 600) {
    struct Pt {
        double x, y, v;
    };
    Pt p[3] = {{x0, y0, 0.0}, {x0 + scale, y0, 0.0}, {x0, y0 + scale, 0.0}};
    for (auto& q : p) q.v = f(q.x, q.y);
    auto sort3 = [&] {
        if (p[0].v > p[1].v) std::swap(p[0], p[1]);
        if (p[1].v > p[2].v) std::swap(p[1], p[2]);
        if (p[0].v > p[1].v) std::swap(p[0], p[1]);
    };
    sort3();
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(p[2].v - p[0].v) < ftol &&
            std::hypot(p[2].x - p[0].x, p[2].y - p[0].y) < 1e-12)
            break;
        const double cx = 0.5 * (p[0].x + p[1].x), cy = 0.5 * (p[0].y + p[1].y);
        Pt r{cx + (cx - p[2].x), cy + (cy - p[2].y), 0.0};
        r.v = f(r.x, r.y);
        if (r.v < p[0].v) {
            Pt e{cx + 2.0 * (cx - p[2].x), cy + 2.0 * (cy - p[2].y), 0.0};
            e.v = f(e.x, e.y);
            p[2] = (e.v < r.v) ? e : r;
        } else if (r.v < p[1].v) {
            p[2] = r;
        } else {
            Pt c{cx + 0.5 * (p[2].x - cx), cy + 0.5 * (p[2].y - cy), 0.0};
            c.v = f(c.x, c.y);
            if (c.v < p[2].v) {
                p[2] = c;
            } else {
                for (int i = 1; i < 3; ++i) {
                    p[i].x = 0.5 * (p[i].x + p[0].x);
                    p[i].y = 0.5 * (p[i].y + p[0].y);
                    p[i].v = f(p[i].x, p[i].y);
                }
            }
        }
        sort3();
    }
    return {p[0].x, p[0].y};
}

}  // namespace jos

#endif
