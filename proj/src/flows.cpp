#include "jos/flows.hpp"

#include <cmath>

namespace jos {

void PathInCStar::validate() const {
    if (kind == Kind::RadialSegment) {
        if (!(r0 > 0.0) || !(r1 > 0.0) || !std::isfinite(r0) || !std::isfinite(r1))
            throw domain_error("RadialSegment: radii must be positive and finite");
        if (!std::isfinite(phi)) throw domain_error("RadialSegment: angle must be finite");
    } else {
        if (!std::isfinite(tau0) || !std::isfinite(tau1))
            throw domain_error("UnitCircleArc: endpoints must be finite");
    }
}

double flow_theta(const ReducedParams& rp, double theta0, double tau0, double tau1,
                  const OdeSettings& s) {
    // Only finiteness is required here: the vector field makes sense for any
    // real (ell, mu, eta), and variational tests difference across eta = 0.
    if (!std::isfinite(rp.ell) || !std::isfinite(rp.mu) || !std::isfinite(rp.eta) ||
        !std::isfinite(theta0) || !std::isfinite(tau0) || !std::isfinite(tau1))
        throw domain_error("flow_theta: non-finite input");
    std::array<double, 1> y{theta0};
    integrate_adaptive<1>(
        [&rp](double tau, const std::array<double, 1>& th, std::array<double, 1>& d) {
            d[0] = rp.eta * std::cos(th[0]) + rp.ell + 2.0 * rp.mu * std::cos(tau);
        },
        y, tau0, tau1, s);
    return y[0];
}

namespace {

// Pack/unpack 2x2 complex matrices as 8 doubles (row major, re/im).
inline std::array<double, 8> pack(const mat2& m) {
    return {m.a.real(), m.a.imag(), m.b.real(), m.b.imag(),
            m.c.real(), m.c.imag(), m.d.real(), m.d.imag()};
}
inline mat2 unpack(const std::array<double, 8>& v) {
    return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
}

}  // namespace

mat2 flow_linear(const LinearSystem& sys, const PathInCStar& path, const OdeSettings& s) {
    path.validate();
    std::array<double, 8> y = pack(mat2::identity());

    if (path.kind == PathInCStar::Kind::UnitCircleArc) {
        // Pull back by z = exp(i tau):  dY/dtau = i z C(z) Y.
        integrate_adaptive<8>(
            [&sys](double tau, const std::array<double, 8>& yy, std::array<double, 8>& dd) {
                const cplx z = std::polar(1.0, tau);
                const mat2 m = (cplx(0.0, 1.0) * z) * sys.coefficient(z);
                dd = pack(m * unpack(yy));
            },
            y, path.tau0, path.tau1, s);
    } else {
        // z = r exp(i phi):  dY/dr = exp(i phi) C(z) Y.
        const cplx dir = std::polar(1.0, path.phi);
        integrate_adaptive<8>(
            [&sys, dir](double r, const std::array<double, 8>& yy, std::array<double, 8>& dd) {
                const mat2 m = dir * sys.coefficient(r * dir);
                dd = pack(m * unpack(yy));
            },
            y, path.r0, path.r1, s);
    }
    return unpack(y);
}

VariationalResult flow_variational(const ReducedParams& rp0, double theta0, double tau1,
                                   const OdeSettings& s) {
    // The locus mu = eta = 0 is the boundary of the parameter domain, so the
    // usual eta > 0 validation does not apply here.
    if (!std::isfinite(rp0.ell) || !std::isfinite(theta0) || !std::isfinite(tau1))
        throw domain_error("flow_variational: non-finite input");
    if (rp0.mu != 0.0 || rp0.eta != 0.0)
        throw domain_error("flow_variational: requires the locus mu = eta = 0");
    const double ell = rp0.ell;
    if (ell != std::round(ell) || ell == 0.0)
        throw domain_error("flow_variational: ell must be a nonzero integer");
    const int l = static_cast<int>(std::llround(std::abs(ell)));

    // State: theta, d_eta, d_mu, d2_eta, mixed_1..mixed_l.  On the locus the
    // base solution is theta0 + ell*tau and theta_mu = 2 sin(tau), so the
    // mixed derivatives d^{k+1}theta/(d eta d mu^k) satisfy
    //   m_k' = (2 sin tau)^k * cos^{(k)}(theta),
    // while d_eta' = cos(theta) and d2_eta' = -2 sin(theta) d_eta.
    constexpr std::size_t kMax = 4 + 8;  // supports ell up to 8
    if (l > 8) throw domain_error("flow_variational: |ell| too large (max 8)");
    const std::size_t dim = 4 + static_cast<std::size_t>(l);

    std::array<double, kMax> y{};
    y[0] = theta0;

    constexpr double half_pi = 1.57079632679489661923;
    auto rhs = [ell, l](double tau, const std::array<double, kMax>& v,
                        std::array<double, kMax>& d) {
        d.fill(0.0);
        const double th = v[0];
        d[0] = ell;                         // base flow at mu = eta = 0
        d[1] = std::cos(th);                // d_eta
        d[2] = 2.0 * std::cos(tau);         // d_mu
        d[3] = -2.0 * std::sin(th) * v[1];  // d2_eta
        const double s2 = 2.0 * std::sin(tau);
        double p = 1.0;
        for (int k = 1; k <= l; ++k) {
            p *= s2;
            // k-th derivative of cos: cos(theta + k pi/2)
            d[3 + static_cast<std::size_t>(k)] = p * std::cos(th + half_pi * k);
        }
    };

    integrate_adaptive<kMax>(rhs, y, 0.0, tau1, s);

    VariationalResult out;
    out.theta = y[0];
    out.d_eta = y[1];
    out.d_mu = y[2];
    out.d2_eta = y[3];
    out.mixed.assign(y.begin() + 4, y.begin() + static_cast<long>(dim));
    return out;
}

}  // namespace jos
