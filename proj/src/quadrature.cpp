#include "dualvol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "dualvol/core_geometry.hpp"
#include "dualvol/rng.hpp"

namespace dualvol {

namespace {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0,
};
constexpr double kKronrodWeights[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992,
};
// Gauss weights belong to the odd-indexed Kronrod nodes plus the center.
constexpr double kGaussWeights[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020,
};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

class Evaluator {
public:
    explicit Evaluator(const std::function<double(double)>& f) : f_(f) {}

    double operator()(double u) {
        ++count_;
        const double v = f_(u);
        if (std::isnan(v))
            throw QuadratureEvalError("integrand returned NaN at u = " + std::to_string(u));
        return v;
    }

    long count() const { return count_; }

private:
    const std::function<double(double)>& f_;
    long count_ = 0;
};

Panel gauss_kronrod_15(Evaluator& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double k15 = kKronrodWeights[7] * f_mid;
    double g7 = kGaussWeights[3] * f_mid;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double fsum = f(mid - dx) + f(mid + dx);
        k15 += kKronrodWeights[j] * fsum;
        if (j % 2 == 1) g7 += kGaussWeights[j / 2] * fsum;
    }
    k15 *= half;
    g7 *= half;
    return Panel{a, b, k15, std::abs(k15 - g7)};
}

// Worst-panel-first refinement of an initial panel list. `external` is the
// absolute value of contributions outside the panels (used for the relative
// stopping test); `budget` counts panels, shared across calls on the same
// integral.
struct AdaptiveOutcome {
    double value;
    double error;
    bool converged;
};

AdaptiveOutcome refine_adaptively(Evaluator& f, std::vector<Panel> panels,
                                  double external, const QuadratureConfig& cfg,
                                  int& budget) {
    std::priority_queue<Panel> queue(std::less<Panel>(), std::move(panels));
    double value = 0.0, error = 0.0;
    {
        std::priority_queue<Panel> copy = queue;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    }
    bool converged = false;
    while (true) {
        const double target =
            std::max(cfg.abs_tol, cfg.rel_tol * (std::abs(value) + external));
        if (error <= target) {
            converged = true;
            break;
        }
        if (budget <= 0) break;
        Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; accept its estimate.
            queue.pop();
            error -= worst.error;
            worst.error = 0.0;
            queue.push(worst);
            continue;
        }
        queue.pop();
        --budget;
        const Panel left = gauss_kronrod_15(f, worst.a, mid);
        const Panel right = gauss_kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // Final reduction in interval order, independent of refinement history.
    std::vector<Panel> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& p, const Panel& q) { return p.a < q.a; });
    value = 0.0;
    error = 0.0;
    for (const Panel& p : all) {
        value += p.value;
        error += p.error;
    }
    return {value, error, converged};
}

// Polynomial extrapolation of ladder samples (x_j, y_j) to x = 0 (Neville).
// Returns the limit and a crude error estimate from the last column change.
std::pair<double, double> extrapolate_to_zero(std::span<const double> x,
                                              std::span<const double> y) {
    const std::size_t m = x.size();
    std::vector<double> t(y.begin(), y.end());
    double last = t[0], change = std::abs(t[0]);
    for (std::size_t level = 1; level < m; ++level) {
        for (std::size_t j = 0; j + level < m; ++j) {
            t[j] = t[j + 1] + (t[j + 1] - t[j]) * x[j + level] / (x[j] - x[j + level]);
        }
        change = std::abs(t[0] - last);
        last = t[0];
    }
    return {t[0], change};
}

// Coefficients of the cubic through four ladder points, monomial basis.
// Nodes are geometric with ratio 2 so the 4x4 solve is well-scaled after
// normalizing x by its largest node.
void cubic_fit(const double* x, const double* y, double scale, double out[4]) {
    double m[4][5];
    for (int r = 0; r < 4; ++r) {
        const double xs = x[r] / scale;
        m[r][0] = 1.0;
        m[r][1] = xs;
        m[r][2] = xs * xs;
        m[r][3] = xs * xs * xs;
        m[r][4] = y[r];
    }
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        for (int r = c + 1; r < 4; ++r) {
            const double factor = m[r][c] / m[c][c];
            for (int cc = c; cc < 5; ++cc) m[r][cc] -= factor * m[c][cc];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = m[r][4];
        for (int cc = r + 1; cc < 4; ++cc) s -= m[r][cc] * out[cc];
        out[r] = s / m[r][r];
    }
    // Undo the normalization.
    double p = 1.0;
    for (int k = 0; k < 4; ++k) {
        out[k] /= p;
        p *= scale;
    }
}

// Closed form of the sub-window contribution at the origin:
// integral over (0, delta] of u^e0 * (c0 + c1 u + c2 u^2 + c3 u^3).
// Also reports the magnitude of the last retained term as an error proxy.
std::pair<double, double> power_series_head(double e0, double delta, const double c[4]) {
    double total = 0.0, last = 0.0;
    double dpow = std::exp((e0 + 1.0) * std::log(delta));
    for (int k = 0; k < 4; ++k) {
        last = c[k] * dpow / (e0 + 1.0 + k);
        total += last;
        dpow *= delta;
    }
    return {total, std::abs(last)};
}

// Same at infinity: integral over [delta, inf) of
// u^einf * (c0 + c1/u + c2/u^2 + c3/u^3), einf < -1.
std::pair<double, double> power_series_tail(double einf, double delta, const double c[4]) {
    double total = 0.0, last = 0.0;
    double dpow = std::exp((einf + 1.0) * std::log(delta));
    for (int k = 0; k < 4; ++k) {
        last = c[k] * dpow / (k - 1.0 - einf);
        total += last;
        dpow /= delta;
    }
    return {total, std::abs(last)};
}

// f(u) * u^power without spurious inf*0: an underflowed integrand simply
// contributes zero, and extreme magnitudes go through the exp/log path.
double scaled_sample(double fv, double u, double power) {
    if (fv == 0.0) return 0.0;
    const double direct = std::pow(u, power);
    if (std::isfinite(direct) && direct != 0.0) {
        const double prod = fv * direct;
        if (std::isfinite(prod)) return prod;
    }
    const double mag = std::exp(std::log(std::abs(fv)) + power * std::log(u));
    return fv > 0.0 ? mag : -mag;
}

std::vector<Panel> log_split_panels(Evaluator& f, double lo, double hi) {
    std::vector<Panel> panels;
    double a = lo;
    // Decade boundaries keep the initial panels at bounded logarithmic width.
    const int k_lo = static_cast<int>(std::ceil(std::log10(lo) - 1e-12));
    const int k_hi = static_cast<int>(std::floor(std::log10(hi) + 1e-12));
    for (int k = k_lo; k <= k_hi; ++k) {
        const double cut = std::pow(10.0, k);
        if (cut > a * (1.0 + 1e-12) && cut < hi * (1.0 - 1e-12)) {
            panels.push_back(gauss_kronrod_15(f, a, cut));
            a = cut;
        }
    }
    panels.push_back(gauss_kronrod_15(f, a, hi));
    return panels;
}

} // namespace

QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double endpoint_exponent_hint,
                                     double tail_exponent_hint,
                                     const QuadratureConfig& cfg) {
    const double e0 = endpoint_exponent_hint;
    const double einf = tail_exponent_hint;
    if (!(e0 > -1.0) || e0 > 60.0)
        throw std::invalid_argument("integrate_half_line: endpoint exponent must be in (-1, 60]");
    if (!(einf < -1.0) || einf < -60.0)
        throw std::invalid_argument("integrate_half_line: tail exponent must be in [-60, -1)");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || cfg.max_subdivisions < 1)
        throw std::invalid_argument("integrate_half_line: invalid config");
    const double delta = cfg.series_cut_low;
    const double cap = cfg.series_cut_high;
    if (!(delta > 0.0) || !(cap > delta))
        throw std::invalid_argument("integrate_half_line: invalid series cuts");

    Evaluator eval(f);

    // Leading series coefficients of f(u) * u^-e0 near zero, from a
    // geometric ladder at delta/8 .. delta.
    double lx[4], ly[4];
    for (int j = 0; j < 4; ++j) {
        lx[j] = delta * std::pow(0.5, 3 - j);
        ly[j] = scaled_sample(eval(lx[j]), lx[j], -e0);
    }
    double head_coeff[4];
    cubic_fit(lx, ly, delta, head_coeff);
    auto [head_value, head_err] = power_series_head(e0, delta, head_coeff);

    // Leading series coefficients of f(u) * u^-einf in 1/u at the far end.
    double tx[4], ty[4];
    for (int j = 0; j < 4; ++j) {
        const double u = cap * std::pow(2.0, j);
        tx[j] = 1.0 / u;
        ty[j] = scaled_sample(eval(u), u, -einf);
    }
    double tail_coeff[4];
    cubic_fit(tx, ty, 1.0 / cap, tail_coeff);
    auto [tail_value, tail_err] = power_series_tail(einf, cap, tail_coeff);

    int budget = cfg.max_subdivisions;
    auto mid = refine_adaptively(eval, log_split_panels(eval, delta, cap),
                                 std::abs(head_value) + std::abs(tail_value), cfg, budget);

    QuadratureResult result;
    result.value = head_value + mid.value + tail_value;
    result.abs_error_estimate = head_err + mid.error + tail_err;
    result.evaluations = eval.count();
    if (!mid.converged) {
        throw QuadratureNonConvergence(
            "integrate_half_line: no convergence after " +
                std::to_string(cfg.max_subdivisions) + " subdivisions",
            result);
    }
    return result;
}

QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, const QuadratureConfig& cfg) {
    if (!(a < b)) throw std::invalid_argument("integrate_interval: need a < b");
    Evaluator eval(f);
    int budget = cfg.max_subdivisions;
    std::vector<Panel> initial{gauss_kronrod_15(eval, a, b)};
    auto out = refine_adaptively(eval, std::move(initial), 0.0, cfg, budget);
    QuadratureResult result{out.value, out.error, eval.count()};
    if (!out.converged) {
        throw QuadratureNonConvergence(
            "integrate_interval: no convergence after " +
                std::to_string(cfg.max_subdivisions) + " subdivisions",
            result);
    }
    return result;
}

std::pair<double, double>
mc_sphere_integral(const std::function<double(std::span<const double>)>& g,
                   int n, long samples, std::uint64_t seed, ExecutionPolicy policy) {
    if (n < 2) throw std::invalid_argument("mc_sphere_integral: need n >= 2");
    if (samples < 1000) throw std::invalid_argument("mc_sphere_integral: need samples >= 1000");

    constexpr long kBlock = 16384;
    const int num_blocks = static_cast<int>((samples + kBlock - 1) / kBlock);
    std::vector<double> block_sum(static_cast<std::size_t>(num_blocks));
    std::vector<double> block_sumsq(static_cast<std::size_t>(num_blocks));

    for_each_block(num_blocks, policy, [&](int b) {
        Xoshiro256pp rng(seed, static_cast<std::uint64_t>(b));
        const long lo = static_cast<long>(b) * kBlock;
        const long hi = std::min(samples, lo + kBlock);
        std::vector<double> theta(static_cast<std::size_t>(n));
        double sum = 0.0, sumsq = 0.0;
        for (long s = lo; s < hi; ++s) {
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    theta[static_cast<std::size_t>(j)] = rng.gaussian();
                    norm2 += theta[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(j)];
                }
            } while (norm2 < 1e-24);
            const double inv = 1.0 / std::sqrt(norm2);
            for (int j = 0; j < n; ++j) theta[static_cast<std::size_t>(j)] *= inv;
            const double v = g(theta);
            sum += v;
            sumsq += v * v;
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
    const double total_measure = n * kappa(n);
    return {total_measure * mean, total_measure * std::sqrt(var / count)};
}

} // namespace dualvol
