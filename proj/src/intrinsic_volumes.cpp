#include "dualvol/intrinsic_volumes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dualvol/dual_volumes.hpp"
#include "dualvol/rng.hpp"

namespace dualvol {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

// |det| of an n x n matrix given by columns, Gaussian elimination with
// partial pivoting. Small n; operates in place.
double abs_det(std::vector<double>& m, int n) {
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m[static_cast<std::size_t>(r * n + c)]) >
                std::abs(m[static_cast<std::size_t>(piv * n + c)]))
                piv = r;
        if (piv != c)
            for (int cc = 0; cc < n; ++cc)
                std::swap(m[static_cast<std::size_t>(c * n + cc)],
                          m[static_cast<std::size_t>(piv * n + cc)]);
        const double d = m[static_cast<std::size_t>(c * n + c)];
        if (d == 0.0) return 0.0;
        det *= d;
        for (int r = c + 1; r < n; ++r) {
            const double factor = m[static_cast<std::size_t>(r * n + c)] / d;
            for (int cc = c; cc < n; ++cc)
                m[static_cast<std::size_t>(r * n + cc)] -=
                    factor * m[static_cast<std::size_t>(c * n + cc)];
        }
    }
    return std::abs(det);
}

} // namespace

double v1(const Ellipsoid& e, const QuadratureConfig& cfg) {
    const int n = e.dim();
    return n / kappa(n - 1) * dual_volume(e.polar(), make_dual_order(-1.0, n), cfg);
}

double v_n(const Ellipsoid& e) { return kappa(e.dim()) * e.axis_product(); }

double v_k_via_polar(const Ellipsoid& e, int k, const QuadratureConfig& cfg) {
    const int n = e.dim();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("v_k_via_polar: index must be in 1..n-1");
    if (k == 1) return v1(e, cfg);
    if (k == n - 1) {
        // V_{n-1}(E) = kappa_{n-1} / (kappa_n kappa_1) V_n(E) V_1(E polar)
        return kappa(n - 1) / (kappa(n) * kappa(1)) * v_n(e) * v1(e.polar(), cfg);
    }
    throw std::invalid_argument(
        "v_k_via_polar: the polar recursion only reaches k = 1 and k = n-1 for n >= 4");
}

std::array<double, 3> v3_triple(const Ellipsoid& e, const QuadratureConfig& cfg) {
    if (e.dim() != 3) throw std::invalid_argument("v3_triple: requires dimension 3");
    const double v3 = v_n(e);
    const double tilde4 =
        dual_volume(e, make_dual_order(4.0, 3), cfg, DualVolumeRoute::direct);
    const double tilde_m1 = dual_volume(e, make_dual_order(-1.0, 3), cfg);
    const double v1_value = 4.0 * tilde4 / v3;
    const double v2_value = 9.0 / (8.0 * std::numbers::pi) * v3 * tilde_m1;
    return {v1_value, v2_value, v3};
}

std::pair<double, double> v_k_zonoid_mc(const Ellipsoid& e, int k, long samples,
                                        std::uint64_t seed, ExecutionPolicy policy) {
    const int n = e.dim();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("v_k_zonoid_mc: index must be in 1..n-1");
    if (samples < 100000)
        throw std::invalid_argument("v_k_zonoid_mc: need samples >= 10^5");

    // Zonoid constant C(n,k) = 2^k binom(n,k) / (n! kappa_{n-k} kappa_{n-1}^(n-k)),
    // combined with the measure normalizations of the sampling scheme:
    // each generating-measure integral becomes (n+1) kappa_n / (2 kappa_{n-1})
    // times a uniform average over E (the volume factors cancel), and each
    // sphere integral contributes its total measure n kappa_n.
    double factorial = 1.0;
    for (int j = 2; j <= n; ++j) factorial *= j;
    const double c_nk = std::pow(2.0, k) * binomial(n, k) /
                        (factorial * kappa(n - k) * std::pow(kappa(n - 1), n - k));
    const double weight = c_nk *
                          std::pow((n + 1) * kappa(n) / (2.0 * kappa(n - 1)), k) *
                          std::pow(n * kappa(n), n - k);

    constexpr long kBlock = 8192;
    const int num_blocks = static_cast<int>((samples + kBlock - 1) / kBlock);
    std::vector<double> block_sum(static_cast<std::size_t>(num_blocks));
    std::vector<double> block_sumsq(static_cast<std::size_t>(num_blocks));

    for_each_block(num_blocks, policy, [&](int b) {
        Xoshiro256pp rng(seed, static_cast<std::uint64_t>(b));
        const long lo = static_cast<long>(b) * kBlock;
        const long hi = std::min(samples, lo + kBlock);
        std::vector<double> columns(static_cast<std::size_t>(n) * n);
        std::vector<double> scratch(static_cast<std::size_t>(n) * n);
        double sum = 0.0, sumsq = 0.0;
        for (long s = lo; s < hi; ++s) {
            for (int c = 0; c < n; ++c) {
                double norm2 = 0.0;
                do {
                    norm2 = 0.0;
                    for (int r = 0; r < n; ++r) {
                        const double g = rng.gaussian();
                        columns[static_cast<std::size_t>(c * n + r)] = g;
                        norm2 += g * g;
                    }
                } while (norm2 < 1e-24);
                double radial = 1.0 / std::sqrt(norm2);
                if (c < k)  // uniform point of E: ball point stretched by the axes
                    radial *= std::pow(rng.uniform01(), 1.0 / n);
                for (int r = 0; r < n; ++r) {
                    double v = columns[static_cast<std::size_t>(c * n + r)] * radial;
                    if (c < k) v *= e.axis(r);
                    columns[static_cast<std::size_t>(c * n + r)] = v;
                }
            }
            scratch = columns;
            const double value = weight * abs_det(scratch, n);
            sum += value;
            sumsq += value * value;
        }
        block_sum[static_cast<std::size_t>(b)] = sum;
        block_sumsq[static_cast<std::size_t>(b)] = sumsq;
    });

    double sum = 0.0, sumsq = 0.0;
    for (int b = 0; b < num_blocks; ++b) {
        sum += block_sum[static_cast<std::size_t>(b)];
        sumsq += block_sumsq[static_cast<std::size_t>(b)];
    }
    const double count = static_cast<double>(samples);
    const double mean = sum / count;
    const double var = std::max(0.0, sumsq / count - mean * mean) * count / (count - 1.0);
    return {mean, std::sqrt(var / count)};
}

double v_k_revolution(const RevolutionSpec& spec, int k, const QuadratureConfig& cfg) {
    const int n = spec.dim;
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("v_k_revolution: index must be in 1..n-1");
    const double ratio = spec.b / spec.a;
    std::vector<double> q_axes(static_cast<std::size_t>(n), 1.0);
    for (int j = 0; j < k; ++j) q_axes[static_cast<std::size_t>(j)] = ratio;
    const Ellipsoid q_ball{std::move(q_axes)};
    return binomial(n, k) * kappa(n - 1) / (n * kappa(n - k)) * std::pow(spec.a, k) *
           v1(q_ball, cfg);
}

} // namespace dualvol
