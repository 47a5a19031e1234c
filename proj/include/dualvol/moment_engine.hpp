#pragma once

#include <vector>

#include "dualvol/core_geometry.hpp"
#include "dualvol/quadrature.hpp"

namespace dualvol {

/// A pair of ellipsoids whose kernel-profile difference drives the
/// uniqueness argument: equal dual volumes force vanishing moments of
/// gap(), whose positive roots are counted through gap_polynomial().
struct MomentGap {
    Ellipsoid e1;
    Ellipsoid e2;
    bool equal_volume;  // axis products match within 1e-10 relative

    MomentGap(Ellipsoid first, Ellipsoid second);
};

/// Polynomial in t = u^2 whose positive roots are exactly the squared
/// positive roots of the gap function: coefficient of t^m is
/// e_m({1/a_j^2}) - e_m({1/b_j^2}) (elementary symmetric differences);
/// the constant term is always zero and the leading one vanishes exactly
/// when the volumes agree.
struct GapPolynomial {
    std::vector<double> coeffs;  // coeffs[m] multiplies t^m, m = 0..n
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Optional exact constraints: zero out the coefficients that the stated
/// invariants force, after checking they already vanish numerically.
/// `volume` kills the leading coefficient (equal volumes), `order_minus2`
/// kills the linear one (equal dual volumes of order -2), tightening the
/// positive-root bound from n-2 to n-3.
struct GapAnchors {
    bool volume = false;
    bool order_minus2 = false;
};

/// F(u) = prod(1 + u^2/a_j^2)^(-1/2) - prod(1 + u^2/b_j^2)^(-1/2).
/// Exactly antisymmetric under swapping the pair; F(0) = 0.
double gap(const Ellipsoid& e1, const Ellipsoid& e2, double u);

GapPolynomial gap_polynomial(const Ellipsoid& e1, const Ellipsoid& e2,
                             const GapAnchors& anchors = {});

/// Outcome of Sturm-sequence root counting on (0, infinity).
struct RootCount {
    bool zero_polynomial = false;  // all coefficients below the cutoff
    int count = 0;                 // distinct positive real roots
    bool degenerate = true;        // some nonzero coefficient fell below the
                                   // 1e-14 relative cutoff and was dropped
};

RootCount count_positive_roots(const GapPolynomial& p);

/// integral of u^(i-1) * F(u) du over (0, infinity), with the same
/// subtracted kernels per order regime as dual_volume (each ellipsoid keeps
/// its own subtraction, so the value always equals
/// (tilde V_i(e1) - tilde V_i(e2)) * n Gamma((n-i)/2) Gamma(i/2) / (4 pi^(n/2)).
/// Supported for i in the open regimes; the closed-form points are rejected.
double moment_of_gap(const Ellipsoid& e1, const Ellipsoid& e2, double i,
                     const QuadratureConfig& cfg = {});

/// Certificate arithmetic: a function with at most `f_sign_changes` sign
/// changes on (0, inf) and vanishing moments at all the given distinct
/// orders is identically zero iff it has strictly more vanishing moments
/// than sign changes.
bool vanishing_moments_certificate(int f_sign_changes,
                                   const std::vector<double>& zero_moment_orders);

} // namespace dualvol
