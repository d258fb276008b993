#include <doctest.h>

#include <cmath>
#include <random>

#include "jos/monodromy.hpp"
#include "jos/poincare.hpp"

using namespace jos;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double angle_dist(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d > kPi) d -= kTwoPi;
    if (d < -kPi) d += kTwoPi;
    return std::abs(d);
}
}  // namespace

TEST_CASE("poincare_map: eta = 0 gives the rigid translation by 2 pi ell") {
    for (double ell : {0.0, 1.0, 3.0}) {
        for (double mu : {0.0, 0.4, 2.0}) {
            for (double th0 : {0.0, 1.2, -2.0}) {
                OdeSettings tight;
                tight.rel_tol = 1e-12;
                tight.abs_tol = 1e-14;
                const double p = poincare_map({ell, mu, 0.0}, th0, tight);
                CHECK(std::abs(p - (th0 + kTwoPi * ell)) < 1e-10);
            }
        }
    }
}

TEST_CASE("poincare_map agrees with the projectivized linear monodromy") {
    // Moebius consistency at 16 base points for a generic parameter choice.
    const ReducedParams rp{1.0, 1.0, 0.5};
    const LinearSystem sys = build_josephson_system(rp);
    const mat2 M = monodromy_matrix(sys);
    for (int i = 0; i < 16; ++i) {
        const double th0 = kTwoPi * i / 16.0;
        const double p = poincare_map(rp, th0);
        const cplx w = std::polar(1.0, th0);
        const cplx img = (M.c + M.d * w) / (M.a + M.b * w);
        CHECK(std::abs(std::abs(img) - 1.0) < 1e-9);  // circle preserved
        CHECK(angle_dist(p, std::arg(img)) < 1e-8);
    }
}

TEST_CASE("rotation_number: trivial zero field") {
    const auto r = rotation_number({0.0, 0.0, 1.0});
    CHECK(r.rho == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rotation_number: A = 0 closed form sqrt(B^2-1)/omega") {
    // For A = 0 the flow is autonomous and rho = sqrt(B^2 - 1)/omega.
    for (double omega : {0.5, 2.0}) {
        for (double B : {1.5, 2.5, 4.0}) {
            const auto r = rotation_number({B, 0.0, omega});
            const double expect = std::sqrt(B * B - 1.0) / omega;
            CHECK(r.rho == doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("rotation_number: brackets the growth point") {
    // B slightly above/below sqrt(r^2 omega^2 + 1) at A = 0
    const double omega = 2.0;
    const int r = 1;
    const double gp = std::sqrt(r * r * omega * omega + 1.0);
    CHECK(rotation_number({gp + 0.01, 0.0, omega}).rho > double(r));
    CHECK(rotation_number({gp - 0.01, 0.0, omega}).rho < double(r));
}

TEST_CASE("rotation_number: symmetries") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ub(0.1, 4.0), ua(0.1, 5.0), uo(0.4, 2.5);
    int used = 0;
    for (int i = 0; i < 40 && used < 25; ++i) {
        const double B = ub(rng), A = ua(rng), omega = uo(rng);
        const auto r0 = rotation_number({B, A, omega});
        if (r0.certified_error > 1e-8) continue;  // skip the parabolic band
        ++used;
        const auto rA = rotation_number({B, -A, omega});
        const auto rB = rotation_number({-B, A, omega});
        CHECK(std::abs(rA.rho - r0.rho) < 1e-8);
        CHECK(std::abs(rB.rho + r0.rho) < 1e-8);
    }
    CHECK(used >= 20);
}

TEST_CASE("rotation_number: monotone in B and quantized on plateaus") {
    const double omega = 0.7, A = 1.5;
    double prev = -1e9;
    for (int i = 0; i <= 30; ++i) {
        const double B = 0.05 + 3.0 * i / 30.0;
        const auto r = rotation_number({B, A, omega});
        CHECK(r.rho >= prev - 1e-9);
        prev = r.rho;
        // quantization: points that sit on a plateau have integer rho
        const auto rl = rotation_number({B - 2e-4, A, omega});
        const auto rr = rotation_number({B + 2e-4, A, omega});
        if (std::abs(rl.rho - rr.rho) < 1e-10) {
            CHECK(std::abs(r.rho - std::round(r.rho)) < 1e-6);
        }
    }
}

TEST_CASE("displacement_sup: zero at eta = 0, positive inside a lock area") {
    const auto grid = uniform_theta_grid(16);
    CHECK(displacement_sup({2.0, 0.8, 0.0}, 2, grid) < 1e-9);
    // an interior point of L_1 for omega = 2 (just past the growth point sqrt(5))
    const ReducedParams inside = to_reduced({2.3, 0.3, 2.0});
    const auto r = rotation_number({2.3, 0.3, 2.0});
    CHECK(r.rho == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(displacement_sup(inside, 1, grid) > 1e-3);
}
