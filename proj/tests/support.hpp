#pragma once

#include <cmath>
#include <vector>

#include "dualvol/core_geometry.hpp"
#include "dualvol/rng.hpp"

namespace testsupport {

inline dualvol::Ellipsoid random_ellipsoid(dualvol::Xoshiro256pp& rng, int dim,
                                           double axis_lo = 0.5, double axis_hi = 2.0) {
    std::vector<double> axes(static_cast<std::size_t>(dim));
    for (double& a : axes)
        a = std::exp(rng.uniform(std::log(axis_lo), std::log(axis_hi)));
    return dualvol::Ellipsoid(std::move(axes));
}

// Random pair with equal axis product: the last b-axis balances the rest.
inline std::pair<dualvol::Ellipsoid, dualvol::Ellipsoid>
random_equal_volume_pair(dualvol::Xoshiro256pp& rng, int dim) {
    while (true) {
        const auto e1 = random_ellipsoid(rng, dim);
        std::vector<double> b(static_cast<std::size_t>(dim));
        double partial = 1.0;
        for (int j = 0; j + 1 < dim; ++j) {
            b[static_cast<std::size_t>(j)] = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
            partial *= b[static_cast<std::size_t>(j)];
        }
        b[static_cast<std::size_t>(dim - 1)] = e1.axis_product() / partial;
        const double last = b[static_cast<std::size_t>(dim - 1)];
        if (last < 1e-2 || last > 1e2) continue;
        return {e1, dualvol::Ellipsoid(std::move(b))};
    }
}

// Random pair sharing both the axis product and the sum of inverse squared
// axes (the order -2 anchor); the last two b-axes solve the two constraints.
inline std::pair<dualvol::Ellipsoid, dualvol::Ellipsoid>
random_anchored_pair(dualvol::Xoshiro256pp& rng, int dim) {
    while (true) {
        const auto e1 = random_ellipsoid(rng, dim);
        double inv_sq_sum = 0.0;
        for (double a : e1.semi_axes()) inv_sq_sum += 1.0 / (a * a);
        std::vector<double> b(static_cast<std::size_t>(dim));
        double partial_product = 1.0;
        double partial_inv = 0.0;
        for (int j = 0; j + 2 < dim; ++j) {
            b[static_cast<std::size_t>(j)] = std::exp(rng.uniform(std::log(0.7), std::log(1.5)));
            partial_product *= b[static_cast<std::size_t>(j)];
            partial_inv += 1.0 / (b[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(j)]);
        }
        // x + y = s, x y = 1/p^2 with x, y the inverse squared axes.
        const double p = e1.axis_product() / partial_product;
        const double s = inv_sq_sum - partial_inv;
        if (!(p > 0.0) || !(s > 0.0)) continue;
        const double disc = s * s - 4.0 / (p * p);
        if (disc < 0.0) continue;
        const double x = 0.5 * (s + std::sqrt(disc));
        const double y = 0.5 * (s - std::sqrt(disc));
        if (!(y > 0.0)) continue;
        b[static_cast<std::size_t>(dim - 2)] = 1.0 / std::sqrt(x);
        b[static_cast<std::size_t>(dim - 1)] = 1.0 / std::sqrt(y);
        if (b[static_cast<std::size_t>(dim - 1)] > 1e2 || b[static_cast<std::size_t>(dim - 2)] < 1e-2)
            continue;
        return {e1, dualvol::Ellipsoid(std::move(b))};
    }
}

} // namespace testsupport
