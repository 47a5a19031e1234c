#include "dualvol/dual_volumes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dualvol/detail/profile_kernels.hpp"

namespace dualvol {

namespace {

constexpr double kPointSnap = 1e-9;

// 4 pi^(n/2) / (n Gamma((n-i)/2) Gamma(i/2)); the sign of the Gamma factors
// makes every regime's integral positive.
double regime_prefactor(double i, int n) {
    return 4.0 * std::pow(std::numbers::pi, 0.5 * n) /
           (n * gamma(0.5 * (n - i)) * gamma(0.5 * i));
}

// Scale-aware analytic-window cuts: the kernels vary on the scale of the
// semi-axes, so the algebraic regime provably starts three decades out.
QuadratureConfig scaled_config(const QuadratureConfig& cfg, const Ellipsoid& e) {
    QuadratureConfig out = cfg;
    out.series_cut_low = std::min(cfg.series_cut_low, 1e-3 * e.min_axis());
    out.series_cut_high = std::max(cfg.series_cut_high, 1e3 * e.max_axis());
    return out;
}

double closed_form_minus2(const Ellipsoid& e) {
    const int n = e.dim();
    const detail::ProfileKernel kernel(e);
    return std::pow(std::numbers::pi, 0.5 * n) / (n * gamma(0.5 * n + 1.0)) * kernel.s1;
}

double closed_form_nplus2(const Ellipsoid& e) {
    const int n = e.dim();
    double sum_sq = 0.0;
    for (double a : e.semi_axes()) sum_sq += a * a;
    return std::pow(std::numbers::pi, 0.5 * n) * e.axis_product() * sum_sq /
           (n * gamma(0.5 * n + 1.0));
}

} // namespace

DualOrder make_dual_order(double i, int dim) {
    if (dim < 2) throw std::invalid_argument("make_dual_order: dimension must be >= 2");
    if (!std::isfinite(i)) throw std::invalid_argument("make_dual_order: order must be finite");
    if (std::abs(i) <= kPointSnap)
        throw std::invalid_argument(
            "make_dual_order: order 0 is constant for every star body and carries no information");
    const double n = dim;
    if (std::abs(i + 2.0) <= kPointSnap) return {i, dim, DualRegime::point_minus2};
    if (std::abs(i - n) <= kPointSnap) return {i, dim, DualRegime::point_n};
    if (std::abs(i - (n + 2.0)) <= kPointSnap) return {i, dim, DualRegime::point_nplus2};
    if (i <= -4.0 || i >= n + 4.0)
        throw std::invalid_argument("make_dual_order: order " + std::to_string(i) +
                                    " outside the supported range (-4, n+4)");
    if (i < -2.0) return {i, dim, DualRegime::low2};
    if (i < 0.0) return {i, dim, DualRegime::low};
    if (i < n) return {i, dim, DualRegime::core};
    if (i < n + 2.0) return {i, dim, DualRegime::high};
    return {i, dim, DualRegime::high2};
}

const char* regime_name(DualRegime regime) {
    switch (regime) {
        case DualRegime::core: return "core";
        case DualRegime::low: return "low";
        case DualRegime::high: return "high";
        case DualRegime::low2: return "low2";
        case DualRegime::high2: return "high2";
        case DualRegime::point_minus2: return "point-2";
        case DualRegime::point_n: return "point-n";
        case DualRegime::point_nplus2: return "point-n+2";
    }
    return "?";
}

double dual_volume(const Ellipsoid& e, const DualOrder& order, const QuadratureConfig& cfg,
                   DualVolumeRoute route) {
    if (order.dim != e.dim())
        throw std::invalid_argument("dual_volume: order classified for a different dimension");
    const int n = e.dim();
    const double i = order.i;
    const QuadratureConfig qc = scaled_config(cfg, e);

    switch (order.regime) {
        case DualRegime::point_n:
            return kappa(n) * e.axis_product();
        case DualRegime::point_minus2:
            return closed_form_minus2(e);
        case DualRegime::point_nplus2:
            return closed_form_nplus2(e);
        case DualRegime::core: {
            const detail::ProfileKernel kernel(e);
            const auto integral = integrate_half_line(
                [&](double u) { return std::pow(u, i - 1.0) * kernel.w(u); },
                i - 1.0, i - n - 1.0, qc);
            return regime_prefactor(i, n) * integral.value;
        }
        case DualRegime::low: {
            const detail::ProfileKernel kernel(e);
            const auto integral = integrate_half_line(
                [&](double u) { return std::pow(u, i - 1.0) * kernel.w_minus_one(u); },
                i + 1.0, i - 1.0, qc);
            return regime_prefactor(i, n) * integral.value;
        }
        case DualRegime::low2: {
            const detail::ProfileKernel kernel(e);
            const auto integral = integrate_half_line(
                [&](double u) { return std::pow(u, i - 1.0) * kernel.w_sub2(u); },
                i + 3.0, i + 1.0, qc);
            return regime_prefactor(i, n) * integral.value;
        }
        case DualRegime::high:
        case DualRegime::high2:
            break;
    }

    // Orders above n. Default: polar route, tilde V_i(E) = prod a_j *
    // tilde V_{n-i}(E polar), which lands in the mirrored low regime.
    if (route != DualVolumeRoute::direct) {
        const Ellipsoid polar = e.polar();
        return e.axis_product() * dual_volume(polar, make_dual_order(n - i, n), cfg,
                                              DualVolumeRoute::direct);
    }
    // Direct subtracted integral. The kernel of the polar ellipsoid in the
    // reciprocal variable gives the cancellation-free form of
    // w(u) - prod a_j / u^n (and its doubly-subtracted variant).
    const detail::ProfileKernel polar_kernel(e.polar());
    const double product = e.axis_product();
    if (order.regime == DualRegime::high) {
        const auto integral = integrate_half_line(
            [&](double u) {
                return product * std::pow(u, i - n - 1.0) * polar_kernel.w_minus_one(1.0 / u);
            },
            i - n - 1.0, i - n - 3.0, qc);
        return regime_prefactor(i, n) * integral.value;
    }
    const auto integral = integrate_half_line(
        [&](double u) {
            return product * std::pow(u, i - n - 1.0) * polar_kernel.w_sub2(1.0 / u);
        },
        i - n - 3.0, i - n - 5.0, qc);
    return regime_prefactor(i, n) * integral.value;
}

double dual_volume(const Ellipsoid& e, double i, const QuadratureConfig& cfg) {
    return dual_volume(e, make_dual_order(i, e.dim()), cfg);
}

std::vector<double> dual_volume_batch(const Ellipsoid& e, std::span<const double> orders,
                                      const QuadratureConfig& cfg, ExecutionPolicy policy) {
    std::vector<DualOrder> classified;
    classified.reserve(orders.size());
    for (double i : orders) classified.push_back(make_dual_order(i, e.dim()));
    std::vector<double> out(orders.size());
    for_each_block(static_cast<int>(orders.size()), policy, [&](int j) {
        out[static_cast<std::size_t>(j)] = dual_volume(e, classified[static_cast<std::size_t>(j)], cfg);
    });
    return out;
}

std::pair<double, double> dual_volume_oracle(const Ellipsoid& e, double i, long samples,
                                             std::uint64_t seed, ExecutionPolicy policy) {
    if (samples < 10000) throw std::invalid_argument("dual_volume_oracle: need samples >= 10^4");
    const int n = e.dim();
    auto [est, err] = mc_sphere_integral(
        [&](std::span<const double> theta) {
            return std::pow(1.0 / minkowski_functional(e, theta), i);
        },
        n, samples, seed, policy);
    return {est / n, err / n};
}

double dual_relation_gap(const Ellipsoid& e, double i, const QuadratureConfig& cfg) {
    const int n = e.dim();
    const DualOrder order = make_dual_order(i, n);
    if (order.regime == DualRegime::point_n) {
        // n - i = 0 and tilde V_0 = kappa_n for every star body, so the
        // identity collapses to tilde V_n = tilde V_n.
        return 0.0;
    }
    const double lhs = dual_volume(e, order, cfg, DualVolumeRoute::direct);
    const double vol_factor = kappa(n) * e.axis_product();
    const double rhs = vol_factor / kappa(n) *
                       dual_volume(e.polar(), make_dual_order(n - i, n), cfg,
                                   DualVolumeRoute::direct);
    return lhs - rhs;
}

double f_profile(const Ellipsoid& e, double u) {
    if (u < 0.0) throw std::invalid_argument("f_profile: u must be non-negative");
    double s = 0.0;
    for (double a : e.semi_axes()) s += std::log1p(u / (a * a));
    return std::exp(-0.5 * s);
}

double fractional_derivative_at_zero(const std::function<double(double)>& f, double q,
                                     std::span<const double> taylor_coeffs,
                                     const QuadratureConfig& cfg, double f_tail_exponent) {
    if (!(q > -2.0) || !(q < 2.0))
        throw std::invalid_argument("fractional_derivative_at_zero: order must be in (-2, 2)");
    if (q >= 0.0 && std::abs(q - std::nearbyint(q)) <= 1e-12)
        throw std::invalid_argument(
            "fractional_derivative_at_zero: non-negative integer order; use an ordinary derivative");
    const int m = q < 0.0 ? 0 : static_cast<int>(std::ceil(q));
    if (static_cast<int>(taylor_coeffs.size()) < m)
        throw std::invalid_argument("fractional_derivative_at_zero: need f^(k)(0) for k < ceil(q)");

    // Dominant algebraic tail: the slower of f's own decay and the
    // subtracted Taylor terms.
    double tail_source = f_tail_exponent;
    if (m >= 1) tail_source = std::max(tail_source, static_cast<double>(m - 1));
    const double tail_hint = tail_source - 1.0 - q;
    if (!(tail_hint < -1.0))
        throw std::invalid_argument(
            "fractional_derivative_at_zero: integrand does not decay at infinity");

    QuadratureConfig qc = cfg;
    // The subtraction f - Taylor cancels near zero; keep the sampled window
    // away from it (the analytic head covers the rest exactly).
    qc.series_cut_low = std::max(cfg.series_cut_low, 3e-3);
    const double c0 = m >= 1 ? taylor_coeffs[0] : 0.0;
    const double c1 = m >= 2 ? taylor_coeffs[1] : 0.0;
    const auto integral = integrate_half_line(
        [&](double t) {
            double v = f(t);
            if (m >= 1) v -= c0;
            if (m >= 2) v -= c1 * t;
            return std::pow(t, -1.0 - q) * v;
        },
        m - 1.0 - q, tail_hint, qc);
    return integral.value / gamma(-q);
}

double dual_steiner_polynomial(const Ellipsoid& e, double eps, const QuadratureConfig& cfg) {
    if (!(eps > 0.0)) throw std::invalid_argument("dual_steiner_polynomial: eps must be positive");
    const int n = e.dim();
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= n; ++i) {
        double vi;
        if (i == 0)
            vi = kappa(n);
        else if (i == n)
            vi = kappa(n) * e.axis_product();
        else
            vi = dual_volume(e, make_dual_order(i, n), cfg);
        sum += binom * vi * std::pow(eps, n - i);
        binom = binom * (n - i) / (i + 1.0);
    }
    return sum;
}

} // namespace dualvol
