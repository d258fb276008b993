#include <doctest.h>

#include <cmath>
#include <random>

#include "jos/flows.hpp"

using namespace jos;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Composite Simpson quadrature, used as an independent oracle.
template <class F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}
}  // namespace

TEST_CASE("flow_theta: explicit solution at eta = 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double ell = u(rng), mu = u(rng), th0 = u(rng), tau = 2.0 * u(rng);
        const ReducedParams rp{ell, mu, 0.0};
        OdeSettings tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-14;
        const double got = flow_theta(rp, th0, 0.0, tau, tight);
        const double expect = th0 + ell * tau + 2.0 * mu * std::sin(tau);
        CHECK(std::abs(got - expect) < 1e-10);
    }
}

TEST_CASE("flow_theta: zero field is constant") {
    const ReducedParams rp{0.0, 0.0, 0.0};
    for (double th0 : {-2.0, 0.0, 1.0, 5.5}) {
        CHECK(std::abs(flow_theta(rp, th0, 0.0, 13.0) - th0) < 1e-12);
    }
}

TEST_CASE("flow_theta: self-consistency against tightened tolerances") {
    const ReducedParams rp{1.0, 0.5, 0.8};
    OdeSettings loose;
    loose.rel_tol = 1e-8;
    loose.abs_tol = 1e-10;
    OdeSettings tight;
    tight.rel_tol = 5e-12;
    tight.abs_tol = 5e-14;
    const double a = flow_theta(rp, 1.0, 0.0, 2.0 * kPi, loose);
    const double b = flow_theta(rp, 1.0, 0.0, 2.0 * kPi, tight);
    CHECK(std::abs(a - b) < 10.0 * loose.rel_tol);
}

TEST_CASE("flow_theta: monotone in the initial condition and equivariant") {
    const ReducedParams rp{2.0, 0.7, 1.3};
    OdeSettings tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    double prev = -1e300;
    for (int i = 0; i < 33; ++i) {
        const double th0 = -kPi + 2.0 * kPi * i / 32.0;
        const double v = flow_theta(rp, th0, 0.0, 2.0 * kPi, tight);
        CHECK(v > prev);
        prev = v;
        const double shifted = flow_theta(rp, th0 + 2.0 * kPi, 0.0, 2.0 * kPi, tight);
        CHECK(std::abs(shifted - (v + 2.0 * kPi)) < 1e-10);
    }
}

TEST_CASE("flow_linear: zero coefficients give the identity") {
    LinearSystem sys;  // all zero
    const mat2 m = flow_linear(sys, PathInCStar::circle_arc(0.0, 2.0 * kPi));
    CHECK(frobenius_norm(m - mat2::identity()) < 1e-12);
}

TEST_CASE("flow_linear: diagonal system against scalar quadrature") {
    // Y' = diag(p(z), q(z)) Y integrates to exp of the scalar integrals.
    LinearSystem sys;
    sys.K2 = mat2::diag(cplx(-0.8, 0.0), 0.0);
    sys.K1 = mat2::diag(cplx(-2.0, 0.0), cplx(0.5, 0.0));
    sys.K0 = mat2::diag(cplx(-0.8, 0.0), cplx(0.1, 0.0));

    auto entry_integral = [&](cplx k2, cplx k1, cplx k0, double tau_end) {
        // integral of i z C(z) dtau with z = exp(i tau)
        auto re = [&](double tau) {
            const cplx z = std::polar(1.0, tau);
            const cplx v = cplx(0.0, 1.0) * z * (k2 / (z * z) + k1 / z + k0);
            return v.real();
        };
        auto im = [&](double tau) {
            const cplx z = std::polar(1.0, tau);
            const cplx v = cplx(0.0, 1.0) * z * (k2 / (z * z) + k1 / z + k0);
            return v.imag();
        };
        return cplx(simpson(re, 0.0, tau_end, 4000), simpson(im, 0.0, tau_end, 4000));
    };

    for (double tau_end : {kPi, 2.0 * kPi}) {
        const mat2 m = flow_linear(sys, PathInCStar::circle_arc(0.0, tau_end));
        const cplx e1 = std::exp(entry_integral(sys.K2.a, sys.K1.a, sys.K0.a, tau_end));
        const cplx e2 = std::exp(entry_integral(sys.K2.d, sys.K1.d, sys.K0.d, tau_end));
        CHECK(std::abs(m.a - e1) < 1e-9);
        CHECK(std::abs(m.d - e2) < 1e-9);
        CHECK(std::abs(m.b) < 1e-11);
        CHECK(std::abs(m.c) < 1e-11);
    }
}

TEST_CASE("flow_linear: determinant matches the Liouville trace integral") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 10; ++i) {
        LinearSystem sys;
        sys.K2 = mat2{u(rng), u(rng), u(rng), u(rng)};
        sys.K1 = mat2{u(rng), u(rng), u(rng), u(rng)};
        sys.K0 = mat2{u(rng), u(rng), u(rng), u(rng)};
        OdeSettings tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-14;
        const mat2 m = flow_linear(sys, PathInCStar::circle_arc(0.0, 2.0 * kPi), tight);
        // closed loop: only the residue term contributes
        const cplx expect = std::exp(cplx(0.0, 2.0 * kPi) * trace(sys.K1));
        CHECK(std::abs(det(m) - expect) < 1e-10 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("flow_linear: composition of half circles") {
    LinearSystem sys;
    sys.K2 = mat2{0.3, -0.2, 0.1, 0.4};
    sys.K1 = mat2{-1.0, -0.6, 0.6, 0.2};
    sys.K0 = mat2{0.3, 0.05, -0.15, -0.25};
    const mat2 full = flow_linear(sys, PathInCStar::circle_arc(0.0, 2.0 * kPi));
    const mat2 h1 = flow_linear(sys, PathInCStar::circle_arc(0.0, kPi));
    const mat2 h2 = flow_linear(sys, PathInCStar::circle_arc(kPi, 2.0 * kPi));
    CHECK(frobenius_norm(full - h2 * h1) < 1e-9);
}

TEST_CASE("flow_variational: closed forms on the locus mu = eta = 0") {
    // d theta/d eta = (sin(theta0 + ell tau) - sin(theta0))/ell
    {
        const VariationalResult v = flow_variational({1.0, 0.0, 0.0}, 0.0, kPi / 2.0);
        CHECK(v.d_eta == doctest::Approx(1.0).epsilon(1e-10));
    }
    // d theta/d mu = 2 sin(tau): zero at tau = pi
    {
        const VariationalResult v = flow_variational({1.0, 0.0, 0.0}, 0.3, kPi);
        CHECK(v.d_mu == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(std::abs(v.d_mu) < 1e-10);
    }
    // d^2 theta/d eta^2 (2 pi) = -2 pi / ell for any theta0
    for (int ell : {1, 2, 3}) {
        for (double th0 : {0.0, 0.9, 2.5}) {
            const VariationalResult v =
                flow_variational({double(ell), 0.0, 0.0}, th0, 2.0 * kPi);
            CHECK(v.d2_eta == doctest::Approx(-2.0 * kPi / ell).epsilon(1e-9));
        }
    }
}

TEST_CASE("flow_variational: full closed forms at generic tau") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int ell : {1, 2, 3}) {
        const double th0 = u(rng), tau = u(rng);
        const VariationalResult v = flow_variational({double(ell), 0.0, 0.0}, th0, tau);
        const double deta = (std::sin(th0 + ell * tau) - std::sin(th0)) / ell;
        CHECK(v.d_eta == doctest::Approx(deta).epsilon(1e-9));
        CHECK(v.d_mu == doctest::Approx(2.0 * std::sin(tau)).epsilon(1e-9));
        const double d2 = -tau / ell +
                          (std::sin(2.0 * (th0 + ell * tau)) - std::sin(2.0 * th0)) / (2.0 * ell * ell) -
                          2.0 * std::sin(th0) * (std::cos(th0 + ell * tau) - std::cos(th0)) /
                              (ell * ell);
        CHECK(v.d2_eta == doctest::Approx(d2).epsilon(1e-8));
        // mixed derivatives against quadrature of the closed-form integrand
        for (int k = 1; k <= ell; ++k) {
            auto integrand = [&](double t) {
                return std::pow(2.0 * std::sin(t), k) *
                       std::cos(th0 + ell * t + 0.5 * kPi * k);
            };
            const double expect = simpson(integrand, 0.0, tau, 2000);
            CHECK(v.mixed[static_cast<std::size_t>(k - 1)] ==
                  doctest::Approx(expect).epsilon(1e-7));
        }
    }
}

TEST_CASE("flow_variational: matches central finite differences of flow_theta") {
    const double h = 1e-5;
    for (int ell : {1, 2}) {
        const double th0 = 0.7, tau = 2.0 * kPi;
        const VariationalResult v = flow_variational({double(ell), 0.0, 0.0}, th0, tau);
        OdeSettings tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-14;
        auto th = [&](double mu, double eta) {
            return flow_theta({double(ell), mu, eta}, th0, 0.0, tau, tight);
        };
        const double fd_eta = (th(0.0, h) - th(0.0, -h)) / (2.0 * h);
        CHECK(std::abs(fd_eta - v.d_eta) < 1e-6);
        const double fd_mu = (th(h, 0.0) - th(-h, 0.0)) / (2.0 * h);
        CHECK(std::abs(fd_mu - v.d_mu) < 1e-6);
        const double fd2_eta = (th(0.0, h) - 2.0 * th(0.0, 0.0) + th(0.0, -h)) / (h * h);
        CHECK(std::abs(fd2_eta - v.d2_eta) < 1e-4);
        // mixed d^2/(d eta d mu), central in both directions
        const double fdm =
            (th(h, h) - th(-h, h) - th(h, -h) + th(-h, -h)) / (4.0 * h * h);
        CHECK(std::abs(fdm - v.mixed[0]) < 1e-4);
    }
}

TEST_CASE("flow_variational: rejects ell = 0 and off-locus input") {
    CHECK_THROWS_AS(flow_variational({0.0, 0.0, 0.0}, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(flow_variational({1.0, 0.5, 0.0}, 0.0, 1.0), domain_error);
}
