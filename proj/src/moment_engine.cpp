#include "dualvol/moment_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualvol/detail/profile_kernels.hpp"
#include "dualvol/dual_volumes.hpp"

namespace dualvol {

namespace {

constexpr double kCoeffCutoff = 1e-14;

// e_1..e_n of the given values by the incremental product
// prod (1 + x_j t) = sum e_m t^m.
std::vector<double> elementary_symmetric(const std::vector<double>& values) {
    std::vector<double> e(values.size() + 1, 0.0);
    e[0] = 1.0;
    std::size_t filled = 0;
    for (double x : values) {
        ++filled;
        for (std::size_t m = filled; m >= 1; --m) e[m] += x * e[m - 1];
    }
    return e;
}

struct Poly {
    std::vector<double> c;  // c[k] multiplies t^k

    int degree() const {
        for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
            if (c[static_cast<std::size_t>(k)] != 0.0) return k;
        return -1;
    }

    void trim() { c.resize(static_cast<std::size_t>(degree() + 1)); }

    double max_abs() const {
        double m = 0.0;
        for (double v : c) m = std::max(m, std::abs(v));
        return m;
    }

    void normalize() {
        const double m = max_abs();
        if (m > 0.0)
            for (double& v : c) v /= m;
    }

    Poly derivative() const {
        Poly d;
        if (c.size() <= 1) return d;
        d.c.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k)
            d.c[k - 1] = c[k] * static_cast<double>(k);
        return d;
    }

    // Sign just right of zero: the lowest-order nonzero coefficient.
    int sign_at_zero_plus() const {
        for (double v : c)
            if (v != 0.0) return v > 0.0 ? 1 : -1;
        return 0;
    }

    int sign_at_infinity() const {
        const int d = degree();
        if (d < 0) return 0;
        return c[static_cast<std::size_t>(d)] > 0.0 ? 1 : -1;
    }
};

// Remainder of a by b (degrees small; coefficients kept normalized by the
// callers). Tiny leading terms are flushed against `cutoff_scale`.
Poly remainder(Poly a, const Poly& b, bool& degenerate) {
    const int db = b.degree();
    const double lead = b.c[static_cast<std::size_t>(db)];
    while (a.degree() >= db) {
        const int da = a.degree();
        const double factor = a.c[static_cast<std::size_t>(da)] / lead;
        a.c[static_cast<std::size_t>(da)] = 0.0;
        for (int k = 0; k < db; ++k)
            a.c[static_cast<std::size_t>(da - db + k)] -= factor * b.c[static_cast<std::size_t>(k)];
        // Flush roundoff leftovers that would otherwise masquerade as a
        // higher-degree remainder.
        const double scale = std::max(a.max_abs(), 1.0);
        for (double& v : a.c)
            if (v != 0.0 && std::abs(v) <= kCoeffCutoff * scale) {
                v = 0.0;
                degenerate = true;
            }
        a.trim();
        if (a.degree() < 0) break;
    }
    return a;
}

int sign_variations(const std::vector<int>& signs) {
    int variations = 0;
    int prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

} // namespace

MomentGap::MomentGap(Ellipsoid first, Ellipsoid second)
    : e1(std::move(first)), e2(std::move(second)), equal_volume(false) {
    if (e1.dim() != e2.dim()) throw std::invalid_argument("MomentGap: dimension mismatch");
    const double p1 = e1.axis_product();
    const double p2 = e2.axis_product();
    equal_volume = std::abs(p1 - p2) <= 1e-10 * std::max(std::abs(p1), std::abs(p2));
}

double gap(const Ellipsoid& e1, const Ellipsoid& e2, double u) {
    if (e1.dim() != e2.dim()) throw std::invalid_argument("gap: dimension mismatch");
    if (u < 0.0) throw std::invalid_argument("gap: u must be non-negative");
    const detail::ProfileKernel k1(e1), k2(e2);
    return k1.w(u) - k2.w(u);
}

GapPolynomial gap_polynomial(const Ellipsoid& e1, const Ellipsoid& e2,
                             const GapAnchors& anchors) {
    if (e1.dim() != e2.dim()) throw std::invalid_argument("gap_polynomial: dimension mismatch");
    const detail::ProfileKernel k1(e1), k2(e2);
    const auto ea = elementary_symmetric(k1.inv_axes_sq);
    const auto eb = elementary_symmetric(k2.inv_axes_sq);
    const std::size_t n = ea.size() - 1;

    GapPolynomial p;
    p.coeffs.assign(n + 1, 0.0);
    double scale = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        p.coeffs[m] = ea[m] - eb[m];
        scale = std::max({scale, std::abs(ea[m]), std::abs(eb[m])});
    }
    auto anchor = [&](std::size_t index, const char* what) {
        if (std::abs(p.coeffs[index]) > 1e-8 * scale)
            throw std::invalid_argument(std::string("gap_polynomial: ") + what +
                                        " anchor requested but the pair violates it");
        p.coeffs[index] = 0.0;
    };
    if (anchors.volume) anchor(n, "equal-volume");
    if (anchors.order_minus2) anchor(1, "order -2");
    return p;
}

RootCount count_positive_roots(const GapPolynomial& p) {
    RootCount result;
    result.degenerate = false;

    Poly base{p.coeffs};
    const double scale = base.max_abs();
    if (scale == 0.0) {
        result.zero_polynomial = true;
        return result;
    }
    for (double& v : base.c) {
        v /= scale;
        if (v != 0.0 && std::abs(v) <= kCoeffCutoff) {
            v = 0.0;
            result.degenerate = true;
        }
    }
    base.trim();
    if (base.degree() < 0) {
        result.zero_polynomial = true;
        return result;
    }
    // Positive roots only: factor out t^multiplicity.
    std::size_t shift = 0;
    while (shift < base.c.size() && base.c[shift] == 0.0) ++shift;
    base.c.erase(base.c.begin(), base.c.begin() + static_cast<std::ptrdiff_t>(shift));
    if (base.degree() <= 0) return result;  // nonzero constant: no positive roots

    // Sturm chain; terminates at the gcd for non-squarefree input, which
    // still counts distinct roots.
    std::vector<Poly> chain;
    chain.push_back(base);
    chain.push_back(base.derivative());
    chain.back().normalize();
    while (chain.back().degree() > 0) {
        Poly r = remainder(chain[chain.size() - 2], chain.back(), result.degenerate);
        if (r.degree() < 0) break;
        for (double& v : r.c) v = -v;
        r.normalize();
        chain.push_back(std::move(r));
    }

    std::vector<int> at_zero, at_inf;
    at_zero.reserve(chain.size());
    at_inf.reserve(chain.size());
    for (const Poly& q : chain) {
        at_zero.push_back(q.sign_at_zero_plus());
        at_inf.push_back(q.sign_at_infinity());
    }
    result.count = sign_variations(at_zero) - sign_variations(at_inf);
    if (result.count < 0) {
        result.count = 0;
        result.degenerate = true;
    }
    return result;
}

double moment_of_gap(const Ellipsoid& e1, const Ellipsoid& e2, double i,
                     const QuadratureConfig& cfg) {
    if (e1.dim() != e2.dim()) throw std::invalid_argument("moment_of_gap: dimension mismatch");
    const int n = e1.dim();
    const DualOrder order = make_dual_order(i, n);

    QuadratureConfig qc = cfg;
    qc.series_cut_low =
        std::min(cfg.series_cut_low, 1e-3 * std::min(e1.min_axis(), e2.min_axis()));
    qc.series_cut_high =
        std::max(cfg.series_cut_high, 1e3 * std::max(e1.max_axis(), e2.max_axis()));

    switch (order.regime) {
        case DualRegime::core:
        case DualRegime::low: {
            const detail::ProfileKernel k1(e1), k2(e2);
            // Both regimes integrate u^(i-1) F(u); the constant subtraction
            // of the low regime cancels between the pair.
            return integrate_half_line(
                       [&](double u) {
                           return std::pow(u, i - 1.0) * (k1.w(u) - k2.w(u));
                       },
                       i + 1.0, i - n - 1.0, qc)
                .value;
        }
        case DualRegime::low2: {
            const detail::ProfileKernel k1(e1), k2(e2);
            return integrate_half_line(
                       [&](double u) {
                           return std::pow(u, i - 1.0) * (k1.w_sub2(u) - k2.w_sub2(u));
                       },
                       i + 3.0, i + 1.0, qc)
                .value;
        }
        case DualRegime::high: {
            const detail::ProfileKernel p1(e1.polar()), p2(e2.polar());
            const double prod1 = e1.axis_product(), prod2 = e2.axis_product();
            return integrate_half_line(
                       [&](double u) {
                           const double v = 1.0 / u;
                           return std::pow(u, i - n - 1.0) *
                                  (prod1 * p1.w_minus_one(v) - prod2 * p2.w_minus_one(v));
                       },
                       i - n - 1.0, i - n - 3.0, qc)
                .value;
        }
        case DualRegime::high2: {
            const detail::ProfileKernel p1(e1.polar()), p2(e2.polar());
            const double prod1 = e1.axis_product(), prod2 = e2.axis_product();
            return integrate_half_line(
                       [&](double u) {
                           const double v = 1.0 / u;
                           return std::pow(u, i - n - 1.0) *
                                  (prod1 * p1.w_sub2(v) - prod2 * p2.w_sub2(v));
                       },
                       i - n - 3.0, i - n - 5.0, qc)
                .value;
        }
        case DualRegime::point_minus2:
        case DualRegime::point_n:
        case DualRegime::point_nplus2:
            throw std::invalid_argument(
                "moment_of_gap: closed-form orders have no moment representation");
    }
    throw std::logic_error("moment_of_gap: unreachable");
}

bool vanishing_moments_certificate(int f_sign_changes,
                                   const std::vector<double>& zero_moment_orders) {
    if (f_sign_changes < 0)
        throw std::invalid_argument("vanishing_moments_certificate: negative sign-change count");
    for (std::size_t a = 0; a < zero_moment_orders.size(); ++a)
        for (std::size_t b = a + 1; b < zero_moment_orders.size(); ++b)
            if (std::abs(zero_moment_orders[a] - zero_moment_orders[b]) <= 1e-12)
                throw std::invalid_argument(
                    "vanishing_moments_certificate: moment orders must be distinct");
    return static_cast<int>(zero_moment_orders.size()) >= f_sign_changes + 1;
}

} // namespace dualvol
