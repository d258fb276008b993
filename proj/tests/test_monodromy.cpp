#include <doctest.h>

#include <cmath>
#include <random>

#include "jos/monodromy.hpp"

using namespace jos;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

LinearSystem diagonal_system(double ell, double mu) {
    LinearSystem sys;
    sys.K2 = mat2::diag(-mu, 0.0);
    sys.K1 = mat2::diag(-ell, 0.0);
    sys.K0 = mat2::diag(-mu, 0.0);
    return sys;
}
}  // namespace

TEST_CASE("build_josephson_system: coefficients and degeneracy guard") {
    const LinearSystem sys = build_josephson_system({1.0, 1.0, 0.5});
    CHECK(sys.K1.a == cplx(-1.0));
    CHECK(sys.K1.b == cplx(-0.25));
    CHECK(sys.K1.c == cplx(0.25));
    CHECK(sys.K1.d == cplx(0.0));
    CHECK(sys.K2.a == cplx(-1.0));
    CHECK(sys.K2.d == cplx(0.0));

    // trace of K1 is -ell
    const LinearSystem s0 = build_josephson_system({0.0, 0.5, 2.0});
    CHECK(std::abs(trace(s0.K1)) < 1e-15);

    // eigenvalues of K2 are {-mu, 0}
    const auto ev = eigenvalues(sys.K2);
    CHECK(((std::abs(ev[0] + 1.0) < 1e-15 && std::abs(ev[1]) < 1e-15) ||
           (std::abs(ev[1] + 1.0) < 1e-15 && std::abs(ev[0]) < 1e-15)));

    CHECK_THROWS_AS(build_josephson_system({1.0, 0.0, 0.5}), domain_error);
}

TEST_CASE("monodromy_matrix: diagonal closed form") {
    OdeSettings tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    for (double ell : {1.0, 2.0, 0.5}) {
        const LinearSystem sys = diagonal_system(ell, 0.8);
        const mat2 M = monodromy_matrix(sys, tight);
        const cplx expect = std::exp(cplx(0.0, -kTwoPi * ell));
        CHECK(std::abs(M.a - expect) < 1e-10);
        CHECK(std::abs(M.d - 1.0) < 1e-10);
        CHECK(std::abs(M.b) < 1e-11);
        CHECK(std::abs(M.c) < 1e-11);
    }
}

TEST_CASE("monodromy_matrix: determinant obeys the residue-trace formula") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        LinearSystem sys;
        sys.K2 = mat2{u(rng), u(rng), u(rng), u(rng)};
        sys.K1 = mat2{u(rng), u(rng), u(rng), u(rng)};
        sys.K0 = mat2{u(rng), u(rng), u(rng), u(rng)};
        const mat2 M = monodromy_matrix(sys);
        const cplx expect = std::exp(cplx(0.0, kTwoPi) * trace(sys.K1));
        CHECK(std::abs(det(M) - expect) < 1e-9 * (1.0 + std::abs(expect)));
    }
    // Josephson system with integer ell has unimodular monodromy
    const mat2 M = monodromy_matrix(build_josephson_system({2.0, 1.3, 0.7}));
    CHECK(std::abs(det(M) - 1.0) < 1e-9);
}

TEST_CASE("is_monodromy_trivial: diagonal system with integer ell") {
    CHECK(is_monodromy_trivial(diagonal_system(2.0, 0.5)));
    CHECK_FALSE(is_monodromy_trivial(diagonal_system(0.5, 0.5)));
    // generic interior point of a phase-lock area: nontrivial
    CHECK_FALSE(is_monodromy_trivial(build_josephson_system(to_reduced({2.4, 0.3, 2.0}))));
}

TEST_CASE("formal_residue: Josephson system carries diag(-ell, 0) at both points") {
    const LinearSystem sys = build_josephson_system({1.0, 1.0, 0.5});
    for (auto at : {SingularPoint::Zero, SingularPoint::Infinity}) {
        const mat2 r = formal_residue(sys, at);
        CHECK(std::abs(r.a + 1.0) < 1e-14);
        CHECK(std::abs(r.d) < 1e-14);
        CHECK(std::abs(r.b) < 1e-14);
        CHECK(std::abs(r.c) < 1e-14);
    }
}

TEST_CASE("formal_residue: diagonal main term leaves a diagonal residue unchanged") {
    LinearSystem sys = diagonal_system(1.5, 0.3);
    sys.K1 = mat2::diag(cplx(0.25, 0.0), cplx(-1.75, 0.0));
    const mat2 r0 = formal_residue(sys, SingularPoint::Zero);
    CHECK(std::abs(r0.a - 0.25) < 1e-15);
    CHECK(std::abs(r0.d + 1.75) < 1e-15);
}

TEST_CASE("formal_residue: recovered through a constant gauge") {
    // Conjugating a diagonal model by a fixed real matrix must not change the
    // formal residues (eigenvalue order is ascending by real part).
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const mat2 D2 = mat2::diag(-1.2, 0.4), D1 = mat2::diag(0.7, -0.3),
                   D0 = mat2::diag(0.2, -0.9);
        mat2 G{u(rng), u(rng), u(rng), u(rng)};
        if (std::abs(det(G)) < 0.1) continue;
        const mat2 Gi = inverse(G);
        LinearSystem sys{G * D2 * Gi, G * D1 * Gi, G * D0 * Gi};
        const mat2 r = formal_residue(sys, SingularPoint::Zero);
        CHECK(std::abs(r.a - 0.7) < 1e-10);
        CHECK(std::abs(r.d + 0.3) < 1e-10);
    }
}

TEST_CASE("formal_residue: eigenvalue collision is rejected") {
    LinearSystem sys = diagonal_system(1.0, 0.5);
    sys.K2 = mat2::diag(0.3, 0.3);
    CHECK_THROWS_AS(formal_residue(sys, SingularPoint::Zero), numerics_error);
}

TEST_CASE("stokes_from_monodromy: identity and diagonal") {
    const auto sd = stokes_from_monodromy(mat2::identity());
    CHECK(std::abs(sd.m_norm.a - 1.0) < 1e-15);
    CHECK(std::abs(sd.m_norm.d - 1.0) < 1e-15);
    CHECK(std::abs(sd.c0) < 1e-15);
    CHECK(std::abs(sd.c1) < 1e-15);

    const cplx e = std::exp(cplx(0.0, -kTwoPi * 0.3));
    const auto sd2 = stokes_from_monodromy(mat2::diag(e, 1.0));
    CHECK(std::abs(sd2.m_norm.a - e) < 1e-15);
    CHECK(std::abs(sd2.c0) < 1e-15);
    CHECK(std::abs(sd2.c1) < 1e-15);
}

TEST_CASE("stokes_from_monodromy: round-trip from random factors") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const cplx m1(u(rng) + 1.5, u(rng)), m2(u(rng) - 1.5, u(rng));
        const cplx c0(u(rng), u(rng)), c1(u(rng), u(rng));
        const mat2 Mn = mat2::diag(m1, m2);
        const mat2 C0{1.0, c0, 0.0, 1.0}, C1{1.0, 0.0, c1, 1.0};
        const mat2 M = Mn * inverse(C1) * inverse(C0);
        const auto sd = stokes_from_monodromy(M, true);
        CHECK(std::abs(sd.m_norm.a - m1) < 1e-12);
        CHECK(std::abs(sd.m_norm.d - m2) < 1e-12);
        CHECK(std::abs(sd.c0 - c0) < 1e-12);
        CHECK(std::abs(sd.c1 - c1) < 1e-12);

        // opposite triangular type
        const mat2 L0{1.0, 0.0, c0, 1.0}, L1{1.0, c1, 0.0, 1.0};
        const mat2 M2 = Mn * inverse(L1) * inverse(L0);
        const auto sd2 = stokes_from_monodromy(M2, false);
        CHECK(std::abs(sd2.c0 - c0) < 1e-12);
        CHECK(std::abs(sd2.c1 - c1) < 1e-12);
    }
}

TEST_CASE("stokes_from_monodromy: vanishing pivot is an error") {
    const mat2 M{0.0, 1.0, -1.0, 0.0};
    CHECK_THROWS_AS(stokes_from_monodromy(M, true), numerics_error);
}

TEST_CASE("q_points: diagonal system has matching eigen-direction projections") {
    // global diagonal solutions: q_{1,0} = q_{1,inf} = 0, q_{2,0} = q_{2,inf} = inf
    const LinearSystem sys = diagonal_system(2.0, 0.6);
    const auto data = q_points(sys);
    CHECK(std::abs(data.q10.value()) < 1e-12);
    CHECK(std::abs(data.q1inf.value()) < 1e-12);
    CHECK(data.q20.is_infinite(1e-10));
    CHECK(data.q2inf.is_infinite(1e-10));

    const auto cr = transition_cross_ratio(sys);
    CHECK(std::abs(cr.value()) < 1e-10);
}

TEST_CASE("cross_ratio: projective arithmetic") {
    // standard normalization: (0, 1, x, inf) type checks
    const auto a = ProjPoint::affine(0.0);
    const auto b = ProjPoint::affine(1.0);
    const auto c = ProjPoint::affine(2.0);
    const auto d = ProjPoint::infinity();
    // (a-c)(b-d)/((a-d)(b-c)) = (0-2)/(1-2) * [(b-inf)/(a-inf) = 1] = 2
    const auto cr = cross_ratio(a, b, c, d);
    CHECK(cr.value().real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(cr.value().imag()) < 1e-12);
}
