#include "dualvol/core_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dualvol {

namespace {

constexpr double kMinAxis = 1e-300;

// sin(pi*x) with the argument reduced against the nearest integer, so the
// reflection formula keeps full relative accuracy arbitrarily close to the
// poles of Gamma.
double sin_pi(double x) {
    const double r = std::nearbyint(x);
    const double d = x - r;
    const double s = std::sin(std::numbers::pi * d);
    return (static_cast<long long>(r) % 2 == 0) ? s : -s;
}

// Lanczos coefficients, g = 7, 9 terms (Godfrey's set); ~1e-15 relative on
// the positive axis in double precision.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double gamma_positive(double x) {
    // x >= 0.5 here
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int k = 1; k < 9; ++k) sum += kLanczos[k] / (z + k);
    const double t = z + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

} // namespace

Ellipsoid::Ellipsoid(std::vector<double> semi_axes) : axes_(std::move(semi_axes)) {
    if (axes_.size() < 2)
        throw std::invalid_argument("Ellipsoid: need dimension >= 2, got " +
                                    std::to_string(axes_.size()));
    for (double a : axes_) {
        if (!std::isfinite(a) || a <= kMinAxis)
            throw std::invalid_argument("Ellipsoid: semi-axes must be finite and positive");
    }
    std::sort(axes_.begin(), axes_.end(), std::greater<double>());
}

double Ellipsoid::axis_product() const {
    double p = 1.0;
    for (double a : axes_) p *= a;
    return p;
}

double Ellipsoid::power_sum(double power) const {
    double s = 0.0;
    for (double a : axes_) s += std::pow(a, power);
    return s;
}

Ellipsoid Ellipsoid::polar() const {
    std::vector<double> inv(axes_.size());
    for (std::size_t j = 0; j < axes_.size(); ++j) inv[j] = 1.0 / axes_[j];
    return Ellipsoid(std::move(inv));
}

Ellipsoid Ellipsoid::scaled(double factor) const {
    std::vector<double> s(axes_);
    for (double& a : s) a *= factor;
    return Ellipsoid(std::move(s));
}

bool Ellipsoid::congruent_to(const Ellipsoid& other, double rel_tol) const {
    if (other.dim() != dim()) return false;
    for (std::size_t j = 0; j < axes_.size(); ++j) {
        const double scale = std::max(axes_[j], other.axes_[j]);
        if (std::abs(axes_[j] - other.axes_[j]) > rel_tol * scale) return false;
    }
    return true;
}

RevolutionSpec::RevolutionSpec(int dim_, int k_, double a_, double b_)
    : dim(dim_), k(k_), a(a_), b(b_) {
    if (dim < 2) throw std::invalid_argument("RevolutionSpec: dim must be >= 2");
    if (k < 1 || k > dim - 1)
        throw std::invalid_argument("RevolutionSpec: need 1 <= k <= dim-1");
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("RevolutionSpec: axes must be positive and finite");
}

Ellipsoid RevolutionSpec::to_ellipsoid() const {
    std::vector<double> axes(static_cast<std::size_t>(dim), a);
    axes.back() = b;
    return Ellipsoid(std::move(axes));
}

double gamma(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gamma: non-finite argument");
    if (x <= 0.0 && std::abs(x - std::nearbyint(x)) <= 1e-12)
        throw std::domain_error("gamma: pole at non-positive integer " + std::to_string(x));
    if (x >= 0.5) return gamma_positive(x);
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::numbers::pi / (sin_pi(x) * gamma_positive(1.0 - x));
}

double kappa(int m) {
    if (m < 0) throw std::invalid_argument("kappa: dimension must be non-negative");
    return std::pow(std::numbers::pi, 0.5 * m) / gamma(0.5 * m + 1.0);
}

namespace {

void check_dim(const Ellipsoid& e, std::span<const double> x, const char* where) {
    if (static_cast<int>(x.size()) != e.dim())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

} // namespace

double minkowski_functional(const Ellipsoid& e, std::span<const double> x) {
    check_dim(e, x, "minkowski_functional");
    double s = 0.0;
    for (int j = 0; j < e.dim(); ++j) {
        const double r = x[static_cast<std::size_t>(j)] / e.axis(j);
        s += r * r;
    }
    return std::sqrt(s);
}

double support_function(const Ellipsoid& e, std::span<const double> x) {
    check_dim(e, x, "support_function");
    double s = 0.0;
    for (int j = 0; j < e.dim(); ++j) {
        const double r = x[static_cast<std::size_t>(j)] * e.axis(j);
        s += r * r;
    }
    return std::sqrt(s);
}

double radial_function(const Ellipsoid& e, std::span<const double> theta) {
    check_dim(e, theta, "radial_function");
    double norm2 = 0.0;
    for (double t : theta) norm2 += t * t;
    if (std::abs(norm2 - 1.0) > 2e-12)
        throw std::invalid_argument("radial_function: direction must be a unit vector");
    return 1.0 / minkowski_functional(e, theta);
}

} // namespace dualvol
