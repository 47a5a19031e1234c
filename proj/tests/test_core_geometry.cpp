#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dualvol/core_geometry.hpp"
#include "support.hpp"

using namespace dualvol;

namespace {

// Independent oracle: largest r with r*theta inside the ellipsoid, by
// bisection on the membership test sum (r theta_j / a_j)^2 <= 1.
double radial_by_bisection(const Ellipsoid& e, const std::vector<double>& theta) {
    auto inside = [&](double r) {
        double s = 0.0;
        for (int j = 0; j < e.dim(); ++j) {
            const double t = r * theta[static_cast<std::size_t>(j)] / e.axis(j);
            s += t * t;
        }
        return s <= 1.0;
    };
    double lo = 0.0, hi = e.max_axis() * 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("gamma classical values") {
    CHECK(dualvol::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(dualvol::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(dualvol::gamma(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(dualvol::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dualvol::gamma(10.0) == doctest::Approx(362880.0).epsilon(1e-13));
}

TEST_CASE("gamma recurrence on [-10, 10]") {
    for (double x = -9.995; x < 10.0; x += 0.127) {
        if (std::abs(x - std::nearbyint(x)) < 1e-3) continue;  // stay off the poles
        const double lhs = dualvol::gamma(x + 1.0);
        const double rhs = x * dualvol::gamma(x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("gamma rejects poles") {
    CHECK_THROWS_AS(dualvol::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(dualvol::gamma(-3.0), std::domain_error);
    CHECK_THROWS_AS(dualvol::gamma(-1.0 + 1e-13), std::domain_error);
    CHECK_NOTHROW(dualvol::gamma(-1.0 + 1e-7));
}

TEST_CASE("kappa values and recursion") {
    CHECK(kappa(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kappa(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(kappa(2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(kappa(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-13));
    for (int n = 2; n <= 12; ++n)
        CHECK(kappa(n) ==
              doctest::Approx(kappa(n - 2) * 2.0 * std::numbers::pi / n).epsilon(1e-13));
}

TEST_CASE("ellipsoid canonical form and validation") {
    const Ellipsoid e({1.0, 3.0, 2.0});
    CHECK(e.axis(0) == 3.0);
    CHECK(e.axis(1) == 2.0);
    CHECK(e.axis(2) == 1.0);
    CHECK(e.axis_product() == doctest::Approx(6.0));

    CHECK_THROWS_AS(Ellipsoid({3.0}), std::invalid_argument);
    CHECK_THROWS_AS(Ellipsoid({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Ellipsoid({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Ellipsoid({1.0, std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Ellipsoid({1.0, 1e-301}), std::invalid_argument);
}

TEST_CASE("congruence compares sorted axes") {
    const Ellipsoid a({1.0, 2.0, 3.0});
    const Ellipsoid b({3.0, 1.0, 2.0});
    CHECK(a.congruent_to(b));
    CHECK(!a.congruent_to(Ellipsoid({3.0, 2.0, 1.001})));
    CHECK(a.congruent_to(Ellipsoid({3.0, 2.0, 1.0 + 1e-12})));
}

TEST_CASE("minkowski functional boundary points") {
    const Ellipsoid e({1.0, 2.0, 3.0});
    const std::vector<double> x1{0.0, 0.0, 1.0};  // shortest axis after sorting
    CHECK(minkowski_functional(e, x1) == doctest::Approx(1.0).epsilon(1e-14));
    const std::vector<double> x2{0.0, 2.0, 0.0};
    CHECK(minkowski_functional(e, x2) == doctest::Approx(1.0).epsilon(1e-14));
    const Ellipsoid ball2({2.0, 2.0});
    const std::vector<double> x3{3.0, 4.0};
    CHECK(minkowski_functional(ball2, x3) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(minkowski_functional(e, std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(minkowski_functional(e, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("support function and polar duality") {
    const Ellipsoid e({1.0, 2.0, 3.0});
    const std::vector<double> x{1.0, 0.0, 0.0};  // longest axis first
    CHECK(support_function(e, x) == doctest::Approx(3.0).epsilon(1e-14));
    const Ellipsoid disk({1.0, 1.0});
    const std::vector<double> u{0.6, 0.8};
    CHECK(support_function(disk, u) == doctest::Approx(1.0).epsilon(1e-14));

    // h_E = Minkowski functional of the polar, on random inputs. Canonical
    // sorting stores the polar's axes in reversed coordinate order, so the
    // aligning isometry is a coordinate reversal.
    Xoshiro256pp rng(20250810);
    for (int trial = 0; trial < 10000; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next() % 4);
        const auto body = testsupport::random_ellipsoid(rng, dim, 0.2, 5.0);
        const auto polar = body.polar();
        std::vector<double> v(static_cast<std::size_t>(dim));
        for (double& c : v) c = rng.uniform(-2.0, 2.0);
        const double h = support_function(body, v);
        std::vector<double> aligned(v.rbegin(), v.rend());
        const double m = minkowski_functional(polar, aligned);
        CHECK(h == doctest::Approx(m).epsilon(1e-12));
    }
}

TEST_CASE("radial function against membership bisection") {
    const Ellipsoid e({1.0, 2.0, 3.0});
    const std::vector<double> z{0.0, 0.0, 1.0};
    CHECK(radial_function(e, z) == doctest::Approx(1.0).epsilon(1e-13));
    const std::vector<double> top{1.0, 0.0, 0.0};
    CHECK(radial_function(e, top) == doctest::Approx(3.0).epsilon(1e-13));

    const Ellipsoid ball({1.7, 1.7, 1.7, 1.7});
    const std::vector<double> any{0.5, 0.5, 0.5, 0.5};
    CHECK(radial_function(ball, any) == doctest::Approx(1.7).epsilon(1e-13));

    // Frozen value sqrt(8/5) for the (2,1) ellipse along the diagonal,
    // cross-checked by the bisection oracle.
    const Ellipsoid ellipse({1.0, 2.0});
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<double> diag{s, s};
    const double expected = 1.2649110640673518;  // sqrt(8/5)
    CHECK(radial_by_bisection(ellipse, diag) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(radial_function(ellipse, diag) == doctest::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(radial_function(e, std::vector<double>{1.0, 1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("polar is an involution") {
    const Ellipsoid e({1.0, 2.0, 4.0});
    const auto p = e.polar();
    CHECK(p.axis(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.axis(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.axis(2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.polar().polar().congruent_to(e, 1e-15));

    const Ellipsoid ball({1.0, 1.0, 1.0});
    CHECK(ball.polar().congruent_to(ball, 1e-15));
}

TEST_CASE("revolution spec expansion") {
    const RevolutionSpec spec(4, 2, 1.5, 0.5);
    const auto e = spec.to_ellipsoid();
    CHECK(e.dim() == 4);
    CHECK(e.axis(0) == 1.5);
    CHECK(e.axis(1) == 1.5);
    CHECK(e.axis(2) == 1.5);
    CHECK(e.axis(3) == 0.5);
    CHECK_THROWS_AS(RevolutionSpec(3, 3, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RevolutionSpec(3, 1, -1.0, 1.0), std::invalid_argument);
}
