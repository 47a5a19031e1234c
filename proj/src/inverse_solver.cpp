#include "dualvol/inverse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "dualvol/dual_volumes.hpp"
#include "dualvol/intrinsic_volumes.hpp"
#include "dualvol/parallel.hpp"
#include "dualvol/rng.hpp"

namespace dualvol {

namespace {

constexpr double kOrderSnap = 1e-9;
constexpr double kLogAxisBound = 8.0;  // iterates clamped to axes in [e^-8, e^8]

struct StartOutcome {
    bool converged = false;
    double residual_max = std::numeric_limits<double>::infinity();
    std::vector<double> axes;  // canonical (sorted descending)
};

// Forward map and damped Gauss-Newton over free log-axis coordinates.
// When the order-n target is present, the axis product is pinned and the
// last coordinate is eliminated.
class DualVolumeFit {
public:
    DualVolumeFit(int dim, std::vector<RecoveryTarget> targets, std::optional<double> log_product,
                  const SolverConfig& cfg)
        : dim_(dim), targets_(std::move(targets)), log_product_(log_product), cfg_(cfg) {
        orders_.reserve(targets_.size());
        for (const auto& t : targets_) orders_.push_back(make_dual_order(t.order, dim_));
    }

    int free_coords() const { return log_product_ ? dim_ - 1 : dim_; }

    std::vector<double> axes_from(const std::vector<double>& x) const {
        std::vector<double> axes(static_cast<std::size_t>(dim_));
        double log_last = 0.0;
        for (int j = 0; j < free_coords(); ++j) {
            axes[static_cast<std::size_t>(j)] = std::exp(x[static_cast<std::size_t>(j)]);
            log_last += x[static_cast<std::size_t>(j)];
        }
        if (log_product_)
            axes[static_cast<std::size_t>(dim_ - 1)] = std::exp(*log_product_ - log_last);
        return axes;
    }

    // Relative residuals; empty on quadrature failure.
    std::vector<double> residuals(const std::vector<double>& x) const {
        std::vector<double> r;
        std::vector<double> axes = axes_from(x);
        for (double a : axes)
            if (!(a > 1e-12) || !(a < 1e12)) return r;
        const Ellipsoid e{std::move(axes)};
        r.reserve(targets_.size());
        try {
            for (std::size_t t = 0; t < targets_.size(); ++t) {
                const double v = dual_volume(e, orders_[t], cfg_.quadrature);
                r.push_back((v - targets_[t].value) / targets_[t].value);
            }
        } catch (const QuadratureError&) {
            r.clear();
        }
        return r;
    }

    StartOutcome solve_from(std::vector<double> x) const {
        const int nf = free_coords();
        const std::size_t m = targets_.size();
        StartOutcome out;

        auto clamp = [&](std::vector<double>& v) {
            for (double& c : v) c = std::clamp(c, -kLogAxisBound, kLogAxisBound);
        };
        clamp(x);
        std::vector<double> r = residuals(x);
        if (r.empty()) return out;
        double cost = 0.0;
        for (double v : r) cost += v * v;

        double lambda = cfg_.lm_lambda0;
        for (int iter = 0; iter < cfg_.max_iterations; ++iter) {
            double rmax = 0.0;
            for (double v : r) rmax = std::max(rmax, std::abs(v));
            if (rmax <= cfg_.residual_tol) break;

            // Central finite-difference Jacobian.
            std::vector<double> jac(m * static_cast<std::size_t>(nf));
            bool fd_ok = true;
            for (int j = 0; j < nf && fd_ok; ++j) {
                std::vector<double> xp = x, xm = x;
                xp[static_cast<std::size_t>(j)] += cfg_.fd_step;
                xm[static_cast<std::size_t>(j)] -= cfg_.fd_step;
                const std::vector<double> rp = residuals(xp);
                const std::vector<double> rm = residuals(xm);
                if (rp.empty() || rm.empty()) {
                    fd_ok = false;
                    break;
                }
                for (std::size_t t = 0; t < m; ++t)
                    jac[t * static_cast<std::size_t>(nf) + static_cast<std::size_t>(j)] =
                        (rp[t] - rm[t]) / (2.0 * cfg_.fd_step);
            }
            if (!fd_ok) break;

            // Normal equations.
            std::vector<double> jtj(static_cast<std::size_t>(nf) * nf, 0.0);
            std::vector<double> jtr(static_cast<std::size_t>(nf), 0.0);
            for (std::size_t t = 0; t < m; ++t) {
                for (int a = 0; a < nf; ++a) {
                    const double ja = jac[t * static_cast<std::size_t>(nf) + a];
                    jtr[static_cast<std::size_t>(a)] += ja * r[t];
                    for (int b = 0; b < nf; ++b)
                        jtj[static_cast<std::size_t>(a * nf + b)] +=
                            ja * jac[t * static_cast<std::size_t>(nf) + b];
                }
            }

            bool accepted = false;
            for (int attempt = 0; attempt < 12; ++attempt) {
                std::vector<double> lhs = jtj;
                for (int a = 0; a < nf; ++a) {
                    const std::size_t d = static_cast<std::size_t>(a * nf + a);
                    lhs[d] += lambda * std::max(jtj[d], 1e-12);
                }
                std::vector<double> step(jtr);
                if (!solve_dense(lhs, step, nf)) {
                    lambda *= 10.0;
                    continue;
                }
                std::vector<double> xn = x;
                double step_norm = 0.0;
                for (int a = 0; a < nf; ++a) {
                    xn[static_cast<std::size_t>(a)] -= step[static_cast<std::size_t>(a)];
                    step_norm += step[static_cast<std::size_t>(a)] * step[static_cast<std::size_t>(a)];
                }
                clamp(xn);
                const std::vector<double> rn = residuals(xn);
                if (!rn.empty()) {
                    double cost_n = 0.0;
                    for (double v : rn) cost_n += v * v;
                    if (cost_n < cost) {
                        x = std::move(xn);
                        r = rn;
                        cost = cost_n;
                        lambda = std::max(lambda * 0.1, 1e-14);
                        accepted = true;
                        break;
                    }
                }
                lambda *= 10.0;
                if (lambda > 1e12) break;
                if (step_norm < 1e-26) break;
            }
            if (!accepted) break;
        }

        double rmax = 0.0;
        for (double v : r) rmax = std::max(rmax, std::abs(v));
        out.residual_max = rmax;
        out.converged = rmax <= cfg_.residual_tol;
        out.axes = axes_from(x);
        std::sort(out.axes.begin(), out.axes.end(), std::greater<double>());
        return out;
    }

private:
    static bool solve_dense(std::vector<double>& m, std::vector<double>& rhs, int n) {
        for (int c = 0; c < n; ++c) {
            int piv = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(m[static_cast<std::size_t>(r * n + c)]) >
                    std::abs(m[static_cast<std::size_t>(piv * n + c)]))
                    piv = r;
            if (std::abs(m[static_cast<std::size_t>(piv * n + c)]) < 1e-300) return false;
            if (piv != c) {
                for (int cc = 0; cc < n; ++cc)
                    std::swap(m[static_cast<std::size_t>(c * n + cc)],
                              m[static_cast<std::size_t>(piv * n + cc)]);
                std::swap(rhs[static_cast<std::size_t>(c)], rhs[static_cast<std::size_t>(piv)]);
            }
            for (int r = c + 1; r < n; ++r) {
                const double f = m[static_cast<std::size_t>(r * n + c)] /
                                 m[static_cast<std::size_t>(c * n + c)];
                for (int cc = c; cc < n; ++cc)
                    m[static_cast<std::size_t>(r * n + cc)] -=
                        f * m[static_cast<std::size_t>(c * n + cc)];
                rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(c)];
            }
        }
        for (int r = n - 1; r >= 0; --r) {
            double s = rhs[static_cast<std::size_t>(r)];
            for (int cc = r + 1; cc < n; ++cc)
                s -= m[static_cast<std::size_t>(r * n + cc)] * rhs[static_cast<std::size_t>(cc)];
            rhs[static_cast<std::size_t>(r)] = s / m[static_cast<std::size_t>(r * n + r)];
        }
        return true;
    }

    int dim_;
    std::vector<RecoveryTarget> targets_;
    std::vector<DualOrder> orders_;
    std::optional<double> log_product_;
    SolverConfig cfg_;
};

void validate_dual_problem(const RecoveryProblem& problem) {
    if (problem.kind != RecoveryKind::dual_volumes)
        throw std::invalid_argument("recover_dual: problem kind must be dual_volumes");
    const int n = problem.dim;
    if (n < 2) throw std::invalid_argument("recover_dual: dimension must be >= 2");
    if (static_cast<int>(problem.targets.size()) != n)
        throw std::invalid_argument("recover_dual: need exactly dim targets");
    bool has_n = false, has_m2 = false;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < problem.targets.size(); ++a) {
        const double i = problem.targets[a].order;
        if (!(problem.targets[a].value > 0.0))
            throw std::invalid_argument("recover_dual: target values must be positive");
        if (std::abs(i) <= kOrderSnap)
            throw std::invalid_argument("recover_dual: order 0 is not admissible");
        for (std::size_t b = a + 1; b < problem.targets.size(); ++b)
            if (std::abs(i - problem.targets[b].order) <= kOrderSnap)
                throw std::invalid_argument("recover_dual: orders must be distinct");
        has_n = has_n || std::abs(i - n) <= kOrderSnap;
        has_m2 = has_m2 || std::abs(i + 2.0) <= kOrderSnap;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    const bool base_family = lo > -2.0 - kOrderSnap && hi <= n + kOrderSnap;
    const bool anchored_n = has_n && lo > -2.0 - kOrderSnap && hi < n + 2.0 - kOrderSnap;
    const bool anchored_both = has_n && has_m2 && lo > -4.0 + kOrderSnap && hi < n + 2.0 - kOrderSnap;
    if (!base_family && !anchored_n && !anchored_both)
        throw std::invalid_argument(
            "recover_dual: orders outside the admissible families: all in (-2, n], or the "
            "order-n value present with the rest in (-2, n+2), or orders n and -2 present "
            "with the rest in (-4, n+2)");
}

RecoverySolution aggregate_starts(const std::vector<StartOutcome>& outcomes,
                                  const SolverConfig& cfg) {
    int best = -1;
    for (std::size_t s = 0; s < outcomes.size(); ++s) {
        if (outcomes[s].axes.empty()) continue;
        if (best < 0 || outcomes[s].residual_max < outcomes[static_cast<std::size_t>(best)].residual_max)
            best = static_cast<int>(s);
    }
    if (best < 0)
        throw std::runtime_error("recover_dual: every start failed to evaluate the forward map");

    std::vector<std::vector<double>> basins;
    for (const auto& o : outcomes) {
        if (!o.converged) continue;
        bool found = false;
        for (const auto& b : basins) {
            bool same = true;
            for (std::size_t j = 0; j < b.size(); ++j) {
                const double scale = std::max(b[j], o.axes[j]);
                if (std::abs(b[j] - o.axes[j]) > cfg.basin_rel_tol * scale) {
                    same = false;
                    break;
                }
            }
            if (same) {
                found = true;
                break;
            }
        }
        if (!found) basins.push_back(o.axes);
    }

    const StartOutcome& chosen = outcomes[static_cast<std::size_t>(best)];
    RecoveryStatus status = RecoveryStatus::infeasible;
    if (chosen.residual_max <= cfg.residual_tol)
        status = RecoveryStatus::converged;
    else if (chosen.residual_max <= cfg.ambiguous_tol)
        status = RecoveryStatus::ambiguous;
    return RecoverySolution{Ellipsoid(chosen.axes),
                            chosen.residual_max,
                            static_cast<int>(outcomes.size()),
                            status == RecoveryStatus::converged,
                            static_cast<int>(basins.size()),
                            status};
}

// Unimodal minimum on a log grid refined by golden-section.
double profile_argmin(const std::function<double(double)>& f, double lo, double hi) {
    const double inv_phi = 0.6180339887498949;
    double a = std::log(lo), b = std::log(hi);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(std::exp(c)), fd = f(std::exp(d));
    while (b - a > 1e-11) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

// Root of f(alpha) = target on a monotone branch [lo, hi] (log bisection).
std::optional<double> branch_solve(const std::function<double(double)>& f, double lo, double hi,
                                   double target) {
    double flo = f(lo) - target, fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    double a = std::log(lo), b = std::log(hi);
    for (int iter = 0; iter < 200 && b - a > 4e-16 * std::max(std::abs(a), 1.0); ++iter) {
        const double mid = 0.5 * (a + b);
        const double fm = f(std::exp(mid)) - target;
        if (fm == 0.0) return std::exp(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            a = mid;
            flo = fm;
        } else {
            b = mid;
        }
    }
    return std::exp(0.5 * (a + b));
}

} // namespace

RecoverySolution recover_dual(const RecoveryProblem& problem, const SolverConfig& cfg) {
    validate_dual_problem(problem);
    const int n = problem.dim;

    std::optional<double> log_product;
    std::vector<RecoveryTarget> fit_targets;
    for (const auto& t : problem.targets) {
        if (std::abs(t.order - n) <= kOrderSnap)
            log_product = std::log(t.value / kappa(n));
        else
            fit_targets.push_back(t);
    }
    const DualVolumeFit fit(n, std::move(fit_targets), log_product, cfg);

    const int nf = fit.free_coords();
    Xoshiro256pp rng(cfg.seed);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(cfg.num_starts));
    for (auto& s : starts) {
        s.resize(static_cast<std::size_t>(nf));
        for (double& c : s) c = rng.uniform(-cfg.start_log_range, cfg.start_log_range);
    }

    std::vector<StartOutcome> outcomes(starts.size());
    for_each_block(static_cast<int>(starts.size()), cfg.policy, [&](int s) {
        outcomes[static_cast<std::size_t>(s)] = fit.solve_from(starts[static_cast<std::size_t>(s)]);
    });
    return aggregate_starts(outcomes, cfg);
}

RecoverySolution recover_r3(double v1_value, double v2_value, double v3_value,
                            const SolverConfig& cfg) {
    if (!(v1_value > 0.0) || !(v2_value > 0.0) || !(v3_value > 0.0))
        throw std::invalid_argument("recover_r3: intrinsic volumes must be positive");
    RecoveryProblem problem{3, RecoveryKind::dual_volumes, {}};
    problem.targets = {
        {3.0, v3_value},
        {4.0, v1_value * v3_value / 4.0},
        {-1.0, 8.0 * std::numbers::pi * v2_value / (9.0 * v3_value)},
    };
    return recover_dual(problem, cfg);
}

double revolution_vk_profile(int n, int k, double a, const QuadratureConfig& cfg) {
    if (n < 2) throw std::invalid_argument("revolution_vk_profile: dimension must be >= 2");
    if (!(a > 0.0)) throw std::invalid_argument("revolution_vk_profile: axis must be positive");
    const RevolutionSpec spec(n, k, a, std::pow(a, 1.0 - n));
    return v_k_revolution(spec, k, cfg);
}

namespace {

struct RevolutionMatch {
    double alpha;
    double complement_rel_err;
};

// Candidates alpha with unit-volume profile V_k(alpha) = target, one per
// monotone branch around the minimum.
std::vector<double> profile_candidates(int n, int k, double target, const QuadratureConfig& cfg) {
    auto profile = [&](double a) { return revolution_vk_profile(n, k, a, cfg); };
    const double a_min = profile_argmin(profile, 1e-2, 1e2);
    const double f_min = profile(a_min);
    if (target < f_min * (1.0 - 1e-9)) return {};
    if (target <= f_min * (1.0 + 1e-12)) return {a_min};

    std::vector<double> candidates;
    double lo = a_min;
    for (int widen = 0; widen < 60; ++widen) {
        lo *= 0.5;
        if (profile(lo) > target) break;
    }
    if (auto left = branch_solve(profile, lo, a_min, target)) candidates.push_back(*left);
    double hi = a_min;
    for (int widen = 0; widen < 60; ++widen) {
        hi *= 2.0;
        if (profile(hi) > target) break;
    }
    if (auto right = branch_solve(profile, a_min, hi, target)) candidates.push_back(*right);
    return candidates;
}

RecoverySolution revolution_solution(int n, double scale, double alpha,
                                     const std::vector<std::pair<int, double>>& index_targets,
                                     double vn, int candidates_seen, int basins,
                                     const SolverConfig& cfg) {
    const RevolutionSpec normalized(n, 1, alpha, std::pow(alpha, 1.0 - n));
    std::vector<double> axes(static_cast<std::size_t>(n), scale * alpha);
    axes.back() = scale * std::pow(alpha, 1.0 - n);
    Ellipsoid e{std::move(axes)};

    double rmax = std::abs(v_n(e) - vn) / vn;
    for (const auto& [idx, value] : index_targets) {
        const double forward =
            std::pow(scale, idx) * v_k_revolution(normalized, idx, cfg.quadrature);
        rmax = std::max(rmax, std::abs(forward - value) / value);
    }
    RecoveryStatus status = RecoveryStatus::infeasible;
    if (rmax <= cfg.residual_tol)
        status = RecoveryStatus::converged;
    else if (rmax <= cfg.ambiguous_tol)
        status = RecoveryStatus::ambiguous;
    return RecoverySolution{std::move(e), rmax, candidates_seen,
                            status == RecoveryStatus::converged, basins, status};
}

} // namespace

RecoverySolution recover_revolution(int n, int k, double vn, double vk, double vnk,
                                    const SolverConfig& cfg) {
    if (n < 3) throw std::invalid_argument("recover_revolution: dimension must be >= 3");
    if (k < 1 || k > n - 1) throw std::invalid_argument("recover_revolution: invalid index k");
    if (2 * k == n)
        throw std::invalid_argument(
            "recover_revolution: k = n/2 needs the even-dimension variant with a third index");
    if (!(vn > 0.0) || !(vk > 0.0) || !(vnk > 0.0))
        throw std::invalid_argument("recover_revolution: volumes must be positive");

    const double scale = std::pow(vn / kappa(n), 1.0 / n);
    const double target_k = vk / std::pow(scale, k);
    const double target_nk = vnk / std::pow(scale, n - k);

    const auto candidates = profile_candidates(n, k, target_k, cfg.quadrature);
    if (candidates.empty())
        throw std::invalid_argument("recover_revolution: V_k below the attainable minimum");

    // The complementary index selects among the two branches.
    std::vector<RevolutionMatch> matches;
    for (double alpha : candidates) {
        const RevolutionSpec normalized(n, k, alpha, std::pow(alpha, 1.0 - n));
        const double comp = v_k_revolution(normalized, n - k, cfg.quadrature);
        matches.push_back({alpha, std::abs(comp - target_nk) / target_nk});
    }
    std::sort(matches.begin(), matches.end(),
              [](const RevolutionMatch& a, const RevolutionMatch& b) {
                  return a.complement_rel_err < b.complement_rel_err;
              });
    int surviving = 0;
    for (const auto& m : matches)
        if (m.complement_rel_err <= cfg.ambiguous_tol) ++surviving;

    return revolution_solution(n, scale, matches.front().alpha,
                               {{k, vk}, {n - k, vnk}}, vn,
                               static_cast<int>(candidates.size()),
                               std::max(surviving, 1), cfg);
}

RecoverySolution recover_revolution_even(int n, double vn, double vhalf, double vk, int k,
                                         const SolverConfig& cfg) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("recover_revolution_even: need even dimension >= 4");
    if (k < 1 || k > n - 1 || 2 * k == n)
        throw std::invalid_argument("recover_revolution_even: k must avoid n and n/2");
    if (!(vn > 0.0) || !(vhalf > 0.0) || !(vk > 0.0))
        throw std::invalid_argument("recover_revolution_even: volumes must be positive");

    const int half = n / 2;
    const double scale = std::pow(vn / kappa(n), 1.0 / n);
    const double target_half = vhalf / std::pow(scale, half);
    const double target_k = vk / std::pow(scale, k);

    auto profile = [&](double a) { return revolution_vk_profile(n, half, a, cfg.quadrature); };
    // The half-index profile is symmetric under alpha -> 1/alpha with its
    // minimum at the ball, so the two candidates are polar to each other.
    const double f_ball = profile(1.0);
    if (target_half < f_ball * (1.0 - 1e-9))
        throw std::invalid_argument("recover_revolution_even: V_{n/2} below the ball value");

    std::vector<double> candidates;
    if (target_half <= f_ball * (1.0 + 1e-12)) {
        candidates.push_back(1.0);
    } else {
        double hi = 1.0;
        for (int widen = 0; widen < 60; ++widen) {
            hi *= 2.0;
            if (profile(hi) > target_half) break;
        }
        if (auto root = branch_solve(profile, 1.0, hi, target_half)) {
            candidates.push_back(*root);
            candidates.push_back(1.0 / *root);
        }
    }
    if (candidates.empty())
        throw std::invalid_argument("recover_revolution_even: no profile match for V_{n/2}");

    std::vector<RevolutionMatch> matches;
    for (double alpha : candidates) {
        const RevolutionSpec normalized(n, k, alpha, std::pow(alpha, 1.0 - n));
        const double forward = v_k_revolution(normalized, k, cfg.quadrature);
        matches.push_back({alpha, std::abs(forward - target_k) / target_k});
    }
    std::sort(matches.begin(), matches.end(),
              [](const RevolutionMatch& a, const RevolutionMatch& b) {
                  return a.complement_rel_err < b.complement_rel_err;
              });
    int surviving = 0;
    for (const auto& m : matches)
        if (m.complement_rel_err <= cfg.ambiguous_tol) ++surviving;

    return revolution_solution(n, scale, matches.front().alpha,
                               {{half, vhalf}, {k, vk}}, vn,
                               static_cast<int>(candidates.size()),
                               std::max(surviving, 1), cfg);
}

std::vector<RevolutionSpec> revolution_candidates_from_vn_vk(int n, int k, double vn, double vk,
                                                             const SolverConfig& cfg) {
    if (n < 2 || k < 1 || k > n - 1)
        throw std::invalid_argument("revolution_candidates_from_vn_vk: invalid dimensions");
    const double scale = std::pow(vn / kappa(n), 1.0 / n);
    const double target_k = vk / std::pow(scale, k);
    std::vector<RevolutionSpec> specs;
    for (double alpha : profile_candidates(n, k, target_k, cfg.quadrature))
        specs.emplace_back(n, k, scale * alpha, scale * std::pow(alpha, 1.0 - n));
    return specs;
}

std::pair<double, double> demonstrate_vk_nonuniqueness(int n, int k, const QuadratureConfig& cfg) {
    if (n < 2 || k < 1 || k > n - 1)
        throw std::invalid_argument("demonstrate_vk_nonuniqueness: invalid index");
    auto profile = [&](double a) { return revolution_vk_profile(n, k, a, cfg); };
    const double a_min = profile_argmin(profile, 1e-2, 1e2);
    for (double factor = 0.8; factor > 0.2; factor *= 0.85) {
        const double a = a_min * factor;
        const double level = profile(a);
        double hi = a_min;
        bool bracketed = false;
        for (int widen = 0; widen < 60; ++widen) {
            hi *= 2.0;
            if (profile(hi) > level) {
                bracketed = true;
                break;
            }
        }
        if (!bracketed) continue;
        const auto b = branch_solve(profile, a_min, hi, level);
        if (b && std::abs(a - *b) >= 0.05) return {a, *b};
    }
    throw std::runtime_error("demonstrate_vk_nonuniqueness: no separated pair found");
}

} // namespace dualvol
