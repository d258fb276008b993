#include <doctest.h>

#include <cmath>
#include <random>

#include "jos/errors.hpp"
#include "jos/params.hpp"

using namespace jos;

TEST_CASE("to_reduced: direct arithmetic") {
    const auto rp = to_reduced({2.0, 4.0, 2.0});
    CHECK(rp.ell == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rp.mu == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rp.eta == doctest::Approx(0.5).epsilon(1e-15));

    const auto z = to_reduced({0.0, 0.0, 1.0});
    CHECK(z.ell == 0.0);
    CHECK(z.mu == 0.0);
    CHECK(z.eta == 1.0);
}

TEST_CASE("to_reduced/from_reduced round-trip on random parameters") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> val(-10.0, 10.0), om(0.05, 5.0);
    for (int i = 0; i < 500; ++i) {
        const PhysParams p{val(rng), val(rng), om(rng)};
        const PhysParams q = from_reduced(to_reduced(p));
        CHECK(q.B == doctest::Approx(p.B).epsilon(1e-15));
        CHECK(q.A == doctest::Approx(p.A).epsilon(1e-15));
        CHECK(q.omega == doctest::Approx(p.omega).epsilon(1e-15));

        const ReducedParams rp{val(rng), val(rng), om(rng)};
        const ReducedParams rq = to_reduced(from_reduced(rp));
        CHECK(rq.ell == doctest::Approx(rp.ell).epsilon(1e-14));
        CHECK(rq.mu == doctest::Approx(rp.mu).epsilon(1e-14));
        CHECK(rq.eta == doctest::Approx(rp.eta).epsilon(1e-14));
    }
}

TEST_CASE("to_heun: lambda formula") {
    // A = 1 forces lambda = 0 for any omega
    for (double omega : {0.3, 0.7, 1.0, 2.5}) {
        const auto hp = to_heun(PhysParams{omega * 1.0, 1.0, omega});
        CHECK(hp.lambda == doctest::Approx(0.0).epsilon(1e-14));
    }
    const auto hp = to_heun(PhysParams{0.7, 0.0, 0.7});
    CHECK(hp.lambda == doctest::Approx(1.0 / (4.0 * 0.49)).epsilon(1e-14));
    CHECK(hp.mu == 0.0);

    const auto h2 = to_heun(PhysParams{2.0, 4.0, 2.0});
    CHECK(h2.ell == doctest::Approx(1.0));
    CHECK(h2.mu == doctest::Approx(1.0));
    CHECK(h2.lambda == doctest::Approx(1.0 / 16.0 - 1.0).epsilon(1e-14));
}

TEST_CASE("lambda(A) = (1 - A^2)/(4 omega^2) identically") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> val(-8.0, 8.0), om(0.05, 4.0);
    for (int i = 0; i < 200; ++i) {
        const PhysParams p{val(rng), val(rng), om(rng)};
        const auto hp = to_heun(p);
        const double expect = (1.0 - p.A * p.A) / (4.0 * p.omega * p.omega);
        CHECK(hp.lambda == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("validation rejects omega <= 0 and non-finite input") {
    CHECK_THROWS_AS(to_reduced({1.0, 1.0, 0.0}), domain_error);
    CHECK_THROWS_AS(to_reduced({1.0, 1.0, -2.0}), domain_error);
    CHECK_THROWS_AS(to_reduced({std::nan(""), 1.0, 1.0}), domain_error);
    CHECK_THROWS_AS((ReducedParams{0.0, 0.0, -1.0}).validate(), domain_error);
}

TEST_CASE("JSON field names and round-trip") {
    const PhysParams p{2.0, 4.0, 2.0};
    const auto text = to_json(p);
    CHECK(text.find("\"B\"") != std::string::npos);
    CHECK(text.find("\"A\"") != std::string::npos);
    CHECK(text.find("\"omega\"") != std::string::npos);
    const auto p2 = phys_from_json(text);
    CHECK(p2.B == p.B);
    CHECK(p2.A == p.A);
    CHECK(p2.omega == p.omega);

    const auto rp = to_reduced(p);
    const auto rp2 = reduced_from_json(to_json(rp));
    CHECK(rp2.ell == rp.ell);
    CHECK(rp2.mu == rp.mu);
    CHECK(rp2.eta == rp.eta);

    const auto hp = to_heun(p);
    const auto ht = to_json(hp);
    CHECK(ht.find("\"lambda\"") != std::string::npos);
    const auto hp2 = heun_from_json(ht);
    CHECK(hp2.lambda == hp.lambda);
}
