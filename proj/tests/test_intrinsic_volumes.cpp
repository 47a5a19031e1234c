#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "doctest.h"
#include "dualvol/intrinsic_volumes.hpp"
#include "dualvol/quadrature.hpp"
#include "support.hpp"

using namespace dualvol;

namespace {

constexpr double kPi = std::numbers::pi;

// Oracle: mean-width integral of the support function over the sphere.
double v1_by_mc(const Ellipsoid& e, long samples, std::uint64_t seed) {
    auto h = [&](std::span<const double> theta) { return support_function(e, theta); };
    return mc_sphere_integral(h, e.dim(), samples, seed).first / kappa(e.dim() - 1);
}

} // namespace

TEST_CASE("first intrinsic volume of balls") {
    const Ellipsoid ball3({1.0, 1.0, 1.0});
    CHECK(v1(ball3) == doctest::Approx(4.0).epsilon(1e-11));
    const Ellipsoid ball2({1.0, 1.0});
    CHECK(v1(ball2) == doctest::Approx(kPi).epsilon(1e-11));
    const Ellipsoid ball4({1.0, 1.0, 1.0, 1.0});
    CHECK(v1(ball4) == doctest::Approx(4.0 * kappa(4) / kappa(3)).epsilon(1e-11));
}

TEST_CASE("first intrinsic volume against the mean-width oracle") {
    Xoshiro256pp rng(61);
    for (int n = 2; n <= 4; ++n) {
        const auto e = testsupport::random_ellipsoid(rng, n);
        const double exact = v1(e);
        const double mc = v1_by_mc(e, 2000000, 400 + n);
        CHECK(exact == doctest::Approx(mc).epsilon(5e-3));
    }
}

TEST_CASE("volume formula") {
    CHECK(v_n(Ellipsoid({1.0, 1.0, 1.0})) == doctest::Approx(kappa(3)).epsilon(1e-14));
    CHECK(v_n(Ellipsoid({1.0, 2.0, 3.0})) == doctest::Approx(8.0 * kPi).epsilon(1e-14));
    CHECK(v_n(Ellipsoid({2.0, 3.0})) == doctest::Approx(6.0 * kPi).epsilon(1e-14));
}

TEST_CASE("polar identity route") {
    const Ellipsoid ball({1.0, 1.0, 1.0});
    CHECK(v_k_via_polar(ball, 2) == doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(v_k_via_polar(ball, 1) == doctest::Approx(4.0).epsilon(1e-10));

    const Ellipsoid disk({1.0, 1.0});
    CHECK(v_k_via_polar(disk, 1) == doctest::Approx(kPi).epsilon(1e-10));

    const Ellipsoid e({1.0, 2.0, 3.0});
    const auto triple = v3_triple(e);
    CHECK(v_k_via_polar(e, 2) == doctest::Approx(triple[1]).epsilon(1e-8));
    CHECK(v_k_via_polar(e, 1) == doctest::Approx(triple[0]).epsilon(1e-8));

    CHECK_THROWS_AS(v_k_via_polar(Ellipsoid({1.0, 1.0, 1.0, 1.0}), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(v_k_via_polar(e, 3), std::invalid_argument);
}

TEST_CASE("three-dimensional triple") {
    const Ellipsoid ball({1.0, 1.0, 1.0});
    const auto t = v3_triple(ball);
    CHECK(t[0] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(t[1] == doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(t[2] == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));

    // Homogeneity of degree k.
    const double lambda = 1.73;
    const Ellipsoid scaled({lambda, lambda, lambda});
    const auto s = v3_triple(scaled);
    CHECK(s[0] == doctest::Approx(4.0 * lambda).epsilon(1e-9));
    CHECK(s[1] == doctest::Approx(2.0 * kPi * lambda * lambda).epsilon(1e-9));
    CHECK(s[2] == doctest::Approx(4.0 * kPi / 3.0 * lambda * lambda * lambda).epsilon(1e-12));

    Xoshiro256pp rng(67);
    const auto e = testsupport::random_ellipsoid(rng, 3);
    const auto base = v3_triple(e);
    const auto grown = v3_triple(e.scaled(lambda));
    for (int k = 0; k < 3; ++k)
        CHECK(grown[static_cast<std::size_t>(k)] ==
              doctest::Approx(std::pow(lambda, k + 1) * base[static_cast<std::size_t>(k)])
                  .epsilon(1e-8));

    // The V1 route through the direct order-4 integral agrees with v1().
    CHECK(base[0] == doctest::Approx(v1(e)).epsilon(1e-8));

    CHECK_THROWS_AS(v3_triple(Ellipsoid({1.0, 1.0})), std::invalid_argument);
}

TEST_CASE("permutation invariance") {
    const Ellipsoid a({1.0, 2.0, 3.0});
    const Ellipsoid b({3.0, 1.0, 2.0});
    const auto ta = v3_triple(a);
    const auto tb = v3_triple(b);
    for (int k = 0; k < 3; ++k)
        CHECK(ta[static_cast<std::size_t>(k)] == tb[static_cast<std::size_t>(k)]);
}

TEST_CASE("monotonicity under axis-wise inclusion") {
    const Ellipsoid small({0.8, 1.0, 1.2});
    const Ellipsoid big({0.9, 1.2, 1.5});
    const auto ts = v3_triple(small);
    const auto tb = v3_triple(big);
    for (int k = 0; k < 3; ++k)
        CHECK(ts[static_cast<std::size_t>(k)] < tb[static_cast<std::size_t>(k)]);
}

TEST_CASE("zonoid Monte Carlo on the ball") {
    const Ellipsoid ball({1.0, 1.0, 1.0});
    auto [est1, err1] = v_k_zonoid_mc(ball, 1, 400000, 71);
    CHECK(std::abs(est1 - 4.0) <= 3.0 * err1);
    CHECK(err1 < 0.02);
    auto [est2, err2] = v_k_zonoid_mc(ball, 2, 400000, 73);
    CHECK(std::abs(est2 - 2.0 * kPi) <= 3.0 * err2);

    // Reproducible and policy-independent.
    const auto again = v_k_zonoid_mc(ball, 1, 400000, 71);
    CHECK(again.first == est1);
    const auto serial = v_k_zonoid_mc(ball, 1, 400000, 71, ExecutionPolicy::serial);
    CHECK(serial.first == est1);

    CHECK_THROWS_AS(v_k_zonoid_mc(ball, 3, 400000, 71), std::invalid_argument);
    CHECK_THROWS_AS(v_k_zonoid_mc(ball, 1, 1000, 71), std::invalid_argument);
}

TEST_CASE("zonoid Monte Carlo against the exact triple") {
    const Ellipsoid e({1.0, 2.0, 3.0});
    const auto triple = v3_triple(e);
    auto [est2, err2] = v_k_zonoid_mc(e, 2, 600000, 79);
    CHECK(std::abs(est2 - triple[1]) <= 3.0 * err2);
    auto [est1, err1] = v_k_zonoid_mc(e, 1, 600000, 83);
    CHECK(std::abs(est1 - triple[0]) <= 3.0 * err1);

    // A four-dimensional middle index only exists through this route;
    // sanity against the ball value.
    const Ellipsoid ball4({1.0, 1.0, 1.0, 1.0});
    const double exact = 6.0 * kappa(4) / kappa(2);  // binom(4,2) kappa_4 / kappa_2
    auto [est4, err4] = v_k_zonoid_mc(ball4, 2, 400000, 89);
    CHECK(std::abs(est4 - exact) <= 3.0 * err4);
}

TEST_CASE("revolution route") {
    // Ball of every index.
    for (int k : {1, 2}) {
        const RevolutionSpec ball(3, k, 1.0, 1.0);
        const double expected = k == 1 ? 4.0 : 2.0 * kPi;
        CHECK(v_k_revolution(ball, k) == doctest::Approx(expected).epsilon(1e-10));
    }

    // Against the full triple on (a, a, b).
    const RevolutionSpec spec(3, 2, 1.0, 2.0);
    const Ellipsoid e({1.0, 1.0, 2.0});
    const auto triple = v3_triple(e);
    CHECK(v_k_revolution(spec, 2) == doctest::Approx(triple[1]).epsilon(1e-7));
    CHECK(v_k_revolution(spec, 1) == doctest::Approx(triple[0]).epsilon(1e-7));

    // Higher-dimensional ball sanity: V_k(B^n) = binom(n,k) kappa_n / kappa_{n-k}.
    const RevolutionSpec ball5(5, 2, 1.0, 1.0);
    CHECK(v_k_revolution(ball5, 2) ==
          doctest::Approx(10.0 * kappa(5) / kappa(3)).epsilon(1e-9));

    CHECK_THROWS_AS(v_k_revolution(spec, 3), std::invalid_argument);
}
