#pragma once

#include <cmath>
#include <vector>

#include "dualvol/core_geometry.hpp"

namespace dualvol::detail {

// Radial moment kernel of an ellipsoid,
//   w(u) = prod_j (1 + u^2 / a_j^2)^(-1/2),
// together with the subtracted forms the different order regimes integrate.
// All variants are evaluated cancellation-free: w-1 through expm1/log1p and
// the doubly-subtracted form through its leading Taylor series below
// series_switch.
struct ProfileKernel {
    std::vector<double> inv_axes_sq;
    double s1, s2, s3, s4;   // power sums of 1/a_j^2
    double c4, c6, c8;       // series coefficients of w_sub2 in u^2
    double series_switch;
    double axis_product;

    explicit ProfileKernel(const Ellipsoid& e) {
        const auto& axes = e.semi_axes();
        inv_axes_sq.reserve(axes.size());
        s1 = s2 = s3 = s4 = 0.0;
        axis_product = 1.0;
        for (double a : axes) {
            const double q = 1.0 / (a * a);
            inv_axes_sq.push_back(q);
            s1 += q;
            s2 += q * q;
            s3 += q * q * q;
            s4 += q * q * q * q;
            axis_product *= a;
        }
        const double b1 = -0.5 * s1, b2 = 0.25 * s2, b3 = -s3 / 6.0, b4 = 0.125 * s4;
        c4 = b2 + 0.5 * b1 * b1;
        c6 = b3 + b1 * b2 + b1 * b1 * b1 / 6.0;
        c8 = b4 + 0.5 * b2 * b2 + b1 * b3 + 0.5 * b1 * b1 * b2 + b1 * b1 * b1 * b1 / 24.0;
        series_switch = 0.01 * e.min_axis();
    }

    double log_w(double u) const {
        double s = 0.0;
        for (double q : inv_axes_sq) s += std::log1p(u * u * q);
        return -0.5 * s;
    }

    double w(double u) const { return std::exp(log_w(u)); }

    double w_minus_one(double u) const { return std::expm1(log_w(u)); }

    // w(u) - 1 + (1/2) s1 u^2; the two subtractions cancel to O(u^4), so a
    // series takes over near zero.
    double w_sub2(double u) const {
        if (u <= series_switch) {
            const double t = u * u;
            return t * t * (c4 + t * (c6 + t * c8));
        }
        return w_minus_one(u) + 0.5 * s1 * u * u;
    }
};

} // namespace dualvol::detail
