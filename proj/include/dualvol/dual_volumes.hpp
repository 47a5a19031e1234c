#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dualvol/core_geometry.hpp"
#include "dualvol/quadrature.hpp"

namespace dualvol {

/// Which moment-integral representation applies to a real order i for a
/// given dimension n. Orders within 1e-9 of {-2, n, n+2} snap to the closed
/// forms; i = 0 and anything outside (-4, n+4) are rejected.
enum class DualRegime {
    core,          // 0 < i < n
    low,           // -2 < i < 0
    high,          // n < i < n+2
    low2,          // -4 < i < -2
    high2,         // n+2 < i < n+4
    point_minus2,  // i = -2
    point_n,       // i = n
    point_nplus2,  // i = n+2
};

struct DualOrder {
    double i;
    int dim;
    DualRegime regime;
};

DualOrder make_dual_order(double i, int dim);

const char* regime_name(DualRegime regime);

/// How dual_volume evaluates orders above n: through the polar identity
/// tilde V_i(E) = a_1...a_n tilde V_{n-i}(E polar) (the default; better
/// conditioned) or through the subtracted integral on E itself. The two
/// routes agree and tests assert it.
enum class DualVolumeRoute { automatic, direct, polar };

/// i-th dual volume (1/n) * integral of rho_E^i over the unit sphere,
/// evaluated by the regime's moment representation. Strictly positive.
double dual_volume(const Ellipsoid& e, const DualOrder& order,
                   const QuadratureConfig& cfg = {},
                   DualVolumeRoute route = DualVolumeRoute::automatic);

double dual_volume(const Ellipsoid& e, double i, const QuadratureConfig& cfg = {});

/// All orders at once; evaluation may be parallel per order, the output
/// order matches the input.
std::vector<double> dual_volume_batch(const Ellipsoid& e, std::span<const double> orders,
                                      const QuadratureConfig& cfg = {},
                                      ExecutionPolicy policy = ExecutionPolicy::parallel);

/// Monte Carlo estimate of (1/n) * integral of rho_E^i, with standard
/// error; verification oracle only (valid for any real i since rho is
/// bounded away from 0 and infinity on an ellipsoid).
std::pair<double, double> dual_volume_oracle(const Ellipsoid& e, double i,
                                             long samples, std::uint64_t seed,
                                             ExecutionPolicy policy = ExecutionPolicy::parallel);

/// Residual of the polar duality identity
///   tilde V_i(E) - (1/kappa_n) tilde V_n(E) tilde V_{n-i}(E polar),
/// with both sides evaluated by independent direct quadratures.
double dual_relation_gap(const Ellipsoid& e, double i, const QuadratureConfig& cfg = {});

/// prod_j (1 + u / a_j^2)^(-1/2); decreasing from 1, the function whose
/// fractional derivatives at zero represent the dual volumes.
double f_profile(const Ellipsoid& e, double u);

/// Fractional derivative f^(q)(0) of order q in (-2, 2), q not 0 or 1:
/// (1/Gamma(-q)) * integral of t^(-1-q) (f(t) - truncated Taylor sum) with
/// the sum over k < ceil(q) (empty for q < 0). taylor_coeffs holds
/// f^(k)(0) for k < ceil(q); f_tail_exponent is the decay exponent of f
/// itself (pass e.g. -50 for super-algebraic decay). Assumes f varies on
/// unit scale (analyticity radius at 0 of order 0.1 or more).
double fractional_derivative_at_zero(const std::function<double(double)>& f, double q,
                                     std::span<const double> taylor_coeffs,
                                     const QuadratureConfig& cfg = {},
                                     double f_tail_exponent = 0.0);

/// sum_{i=0..n} C(n,i) tilde V_i(E) eps^(n-i) with tilde V_0 = kappa_n;
/// equals the volume of the radial sum E +~ eps B.
double dual_steiner_polynomial(const Ellipsoid& e, double eps, const QuadratureConfig& cfg = {});

} // namespace dualvol
