#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>

#include "dualvol/parallel.hpp"

namespace dualvol {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    // Window outside which the integrand is treated as an algebraic power
    // series anchored at the hint exponents (see integrate_half_line).
    // Callers integrating kernels with a natural length scale should place
    // series_cut_low three decades below it and series_cut_high three above.
    double series_cut_low = 1e-6;
    double series_cut_high = 1e6;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Subdivision budget exhausted before the tolerance was met; carries the
// best estimate obtained.
class QuadratureNonConvergence : public QuadratureError {
public:
    QuadratureNonConvergence(const std::string& what, QuadratureResult best)
        : QuadratureError(what), best_estimate(best) {}
    QuadratureResult best_estimate;
};

// The integrand returned NaN.
class QuadratureEvalError : public QuadratureError {
public:
    using QuadratureError::QuadratureError;
};

/// Integral of f over [0, infinity) for integrands with algebraic behavior
/// at both ends: f(u) = O(u^e0) as u -> 0+ with e0 > -1, and
/// f(u) = O(u^einf) as u -> infinity with einf < -1.
///
/// Inside [series_cut_low, series_cut_high] the integrand is handled by
/// globally adaptive Gauss-Kronrod panels. Outside, f is written as
/// u^hint * (power series) whose leading coefficients are extrapolated from
/// a geometric ladder of evaluations and integrated in closed form; this is
/// what keeps the result accurate when the exponent sits within 1e-6 of the
/// convergence boundary and the residual mass lies below the smallest
/// representable double. Full accuracy therefore requires the hints to be
/// the exact leading exponents; with a strict O-bound the extrapolated
/// sliver still converges to zero and only its (reported) error estimate
/// degrades. Integrands decaying faster than any power can pass any valid
/// tail hint, e.g. -10.
///
/// Deterministic for a fixed config; panels are refined worst-first.
QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double endpoint_exponent_hint,
                                     double tail_exponent_hint,
                                     const QuadratureConfig& cfg = {});

/// Globally adaptive Gauss-Kronrod integration over a finite interval.
QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureConfig& cfg = {});

/// Monte Carlo estimate of the integral of g over the unit sphere S^{n-1}
/// with respect to the spherical Lebesgue measure (total measure n*kappa_n).
/// Directions are normalized standard Gaussian vectors drawn from
/// deterministic per-block substreams of `seed`, so the result is
/// bit-reproducible for a fixed (seed, samples) regardless of the execution
/// policy or thread count.
///
/// Returns (estimate, standard error).
std::pair<double, double>
mc_sphere_integral(const std::function<double(std::span<const double>)>& g,
                   int n, long samples, std::uint64_t seed,
                   ExecutionPolicy policy = ExecutionPolicy::parallel);

} // namespace dualvol
