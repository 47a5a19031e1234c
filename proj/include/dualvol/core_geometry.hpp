#pragma once

#include <span>
#include <vector>

namespace dualvol {

/// Centered ellipsoid with axes along the coordinate directions, stored as
/// the canonical congruence representative: semi-axes sorted descending.
/// Immutable after construction; all member functions are const and
/// thread-safe.
class Ellipsoid {
public:
    /// Throws std::invalid_argument unless there are >= 2 axes, all finite
    /// and > 1e-300.
    explicit Ellipsoid(std::vector<double> semi_axes);

    int dim() const { return static_cast<int>(axes_.size()); }
    const std::vector<double>& semi_axes() const { return axes_; }
    double axis(int j) const { return axes_[static_cast<std::size_t>(j)]; }
    double max_axis() const { return axes_.front(); }
    double min_axis() const { return axes_.back(); }

    /// Product of the semi-axes (volume / kappa_n).
    double axis_product() const;

    /// Sum of axis^power over all semi-axes.
    double power_sum(double power) const;

    Ellipsoid polar() const;
    Ellipsoid scaled(double factor) const;

    /// Congruence test: equal sorted axes within relative tolerance.
    bool congruent_to(const Ellipsoid& other, double rel_tol = 1e-9) const;

private:
    std::vector<double> axes_;
};

/// Ellipsoid of revolution: the axis `a` with multiplicity dim-1 and the
/// polar axis `b`. `k` is the intrinsic-volume index the spec is typically
/// paired with (1 <= k <= dim-1).
struct RevolutionSpec {
    int dim;
    int k;
    double a;
    double b;

    RevolutionSpec(int dim_, int k_, double a_, double b_);

    /// Expansion to the full axis vector (a, ..., a, b), canonicalized.
    Ellipsoid to_ellipsoid() const;
};

/// Gamma function on the reals excluding non-positive integers
/// (Lanczos approximation, reflection formula for x < 0.5).
/// Throws std::domain_error within 1e-12 of a pole.
double gamma(double x);

/// Volume of the unit ball in m dimensions: pi^(m/2) / Gamma(m/2 + 1).
double kappa(int m);

/// (sum x_j^2 / a_j^2)^(1/2); gauge of the ellipsoid.
double minkowski_functional(const Ellipsoid& e, std::span<const double> x);

/// (sum a_j^2 x_j^2)^(1/2); equals the Minkowski functional of the polar.
double support_function(const Ellipsoid& e, std::span<const double> x);

/// Distance from the origin to the boundary along a unit direction;
/// theta must be unit within 1e-12.
double radial_function(const Ellipsoid& e, std::span<const double> theta);

} // namespace dualvol
