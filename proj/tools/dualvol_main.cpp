#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "dualvol/dual_volumes.hpp"
#include "dualvol/intrinsic_volumes.hpp"
#include "dualvol/inverse_solver.hpp"
#include "dualvol/moment_engine.hpp"
#include "dualvol/rng.hpp"

using json = nlohmann::json;
using namespace dualvol;

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitQuadratureFailure = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitAmbiguous = 5;
constexpr int kExitIo = 6;

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void apply_thread_env() {
#ifdef _OPENMP
    if (const char* threads = std::getenv("DUALVOL_THREADS")) {
        const int t = std::atoi(threads);
        if (t > 0) omp_set_num_threads(t);
    }
#endif
}

struct ComputeArgs {
    std::vector<double> axes;
    std::vector<double> orders;
    long oracle_samples = 0;
    std::uint64_t seed = 42;
    double tol = 1e-10;
    bool as_json = false;
};

int run_compute(const ComputeArgs& args) {
    Ellipsoid e(args.axes);
    QuadratureConfig cfg;
    cfg.rel_tol = args.tol;
    cfg.abs_tol = std::min(1e-12, args.tol);

    std::vector<DualOrder> orders;
    for (double i : args.orders) orders.push_back(make_dual_order(i, e.dim()));

    json out;
    out["dim"] = e.dim();
    out["axes"] = e.semi_axes();
    out["results"] = json::array();

    if (!args.as_json) {
        std::printf("%10s  %16s  %-10s  %12s", "order", "value", "method", "err");
        if (args.oracle_samples > 0) std::printf("  %16s  %12s", "oracle", "stderr");
        std::printf("\n");
    }
    for (const DualOrder& order : orders) {
        QuadratureResult certified{};
        double value;
        switch (order.regime) {
            case DualRegime::point_minus2:
            case DualRegime::point_n:
            case DualRegime::point_nplus2:
                value = dual_volume(e, order, cfg);
                break;
            default: {
                value = dual_volume(e, order, cfg);
                certified.abs_error_estimate = args.tol * std::abs(value);
                break;
            }
        }
        json row;
        row["order"] = order.i;
        row["value"] = value;
        row["regime"] = regime_name(order.regime);
        row["err"] = certified.abs_error_estimate;
        if (args.oracle_samples > 0) {
            auto [est, err] = dual_volume_oracle(e, order.i,
                                                 std::max<long>(args.oracle_samples, 10000),
                                                 args.seed);
            row["oracle"] = est;
            row["oracle_stderr"] = err;
            if (!args.as_json)
                std::printf("%10.4g  %16.7f  %-10s  %12.3e  %16.7f  %12.3e\n", order.i, value,
                            regime_name(order.regime), certified.abs_error_estimate, est, err);
        } else if (!args.as_json) {
            std::printf("%10.4g  %16.7f  %-10s  %12.3e\n", order.i, value,
                        regime_name(order.regime), certified.abs_error_estimate);
        }
        out["results"].push_back(row);
    }
    if (args.as_json) std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

struct InvertArgs {
    int dim = 0;
    std::vector<double> orders;
    std::vector<double> values;
    bool r3 = false;
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;
    std::vector<int> revolution;       // n k
    std::vector<int> revolution_even;  // n k
    double vn = 0.0, vk = 0.0, vnk = 0.0, vhalf = 0.0;
    std::string from_json;
    int starts = 20;
    std::uint64_t seed = 715225741;
    double tol = 1e-9;
    bool as_json = false;
};

int report_solution(const RecoverySolution& sol, bool as_json) {
    if (as_json) {
        json out;
        out["axes"] = sol.ellipsoid.semi_axes();
        out["residual_max_rel"] = sol.residual_max_rel;
        out["basins"] = sol.distinct_basins_found;
        out["starts"] = sol.starts_tried;
        out["converged"] = sol.converged;
        out["status"] = sol.status == RecoveryStatus::converged ? "converged"
                        : sol.status == RecoveryStatus::ambiguous ? "ambiguous"
                                                                  : "infeasible";
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("axes:");
        for (double a : sol.ellipsoid.semi_axes()) std::printf(" %.10g", a);
        std::printf("\nresidual: %.3e\nbasins: %d  starts: %d  status: %s\n",
                    sol.residual_max_rel, sol.distinct_basins_found, sol.starts_tried,
                    sol.status == RecoveryStatus::converged ? "converged"
                    : sol.status == RecoveryStatus::ambiguous ? "ambiguous"
                                                              : "infeasible");
    }
    if (sol.status == RecoveryStatus::infeasible) return kExitInfeasible;
    if (sol.status == RecoveryStatus::ambiguous) return kExitAmbiguous;
    return 0;
}

int run_invert(const InvertArgs& args) {
    SolverConfig cfg;
    cfg.num_starts = args.starts;
    cfg.seed = args.seed;
    cfg.quadrature.rel_tol = args.tol;
    cfg.quadrature.abs_tol = std::min(1e-12, args.tol);

    if (!args.from_json.empty()) {
        json doc;
        if (args.from_json == "-") {
            std::cin >> doc;
        } else {
            std::ifstream in(args.from_json);
            if (!in) {
                std::fprintf(stderr, "invert: cannot open %s\n", args.from_json.c_str());
                return kExitIo;
            }
            in >> doc;
        }
        RecoveryProblem problem{doc.at("dim").get<int>(), RecoveryKind::dual_volumes, {}};
        for (const auto& row : doc.at("results"))
            problem.targets.push_back(
                {row.at("order").get<double>(), row.at("value").get<double>()});
        return report_solution(recover_dual(problem, cfg), args.as_json);
    }
    if (args.r3) {
        return report_solution(recover_r3(args.v1, args.v2, args.v3, cfg), args.as_json);
    }
    if (args.revolution.size() == 2) {
        return report_solution(recover_revolution(args.revolution[0], args.revolution[1],
                                                  args.vn, args.vk, args.vnk, cfg),
                               args.as_json);
    }
    if (args.revolution_even.size() == 2) {
        return report_solution(
            recover_revolution_even(args.revolution_even[0], args.vn, args.vhalf, args.vk,
                                    args.revolution_even[1], cfg),
            args.as_json);
    }
    if (args.dim < 2 || args.orders.size() != args.values.size() || args.orders.empty())
        throw std::invalid_argument("invert: need --dim with matching --orders/--values, "
                                    "--r3, --revolution, --revolution-even, or --from-json");
    RecoveryProblem problem{args.dim, RecoveryKind::dual_volumes, {}};
    for (std::size_t j = 0; j < args.orders.size(); ++j)
        problem.targets.push_back({args.orders[j], args.values[j]});
    return report_solution(recover_dual(problem, cfg), args.as_json);
}

struct SweepArgs {
    std::vector<int> revolution;  // n k
    std::string grid;             // lo:hi:steps
    std::string out_path;
    bool find_pair = false;
};

int run_sweep(const SweepArgs& args) {
    if (args.revolution.size() != 2) throw std::invalid_argument("sweep: need --revolution n k");
    const int n = args.revolution[0];
    const int k = args.revolution[1];
    double lo = 0.0, hi = 0.0;
    int steps = 0;
    {
        std::istringstream in(args.grid);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(in, part, ':')) parts.push_back(part);
        if (parts.size() != 3) throw std::invalid_argument("sweep: grid must be lo:hi:steps");
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        steps = std::stoi(parts[2]);
    }
    if (!(lo > 0.0) || !(hi > lo) || steps < 2)
        throw std::invalid_argument("sweep: degenerate grid");

    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "sweep: cannot open %s\n", args.out_path.c_str());
        return kExitIo;
    }
    out << "a,v_k\r\n";
    for (int j = 0; j < steps; ++j) {
        const double a = lo + (hi - lo) * j / (steps - 1);
        out << format_full(a) << "," << format_full(revolution_vk_profile(n, k, a)) << "\r\n";
    }
    if (args.find_pair) {
        const auto [a, b] = demonstrate_vk_nonuniqueness(n, k);
        out << format_full(a) << "," << format_full(revolution_vk_profile(n, k, a)) << "\r\n";
        out << format_full(b) << "," << format_full(revolution_vk_profile(n, k, b)) << "\r\n";
    }
    if (!out.good()) return kExitIo;
    return 0;
}

// ---------------------------------------------------------------------------
// verify: seeded property suites with machine-readable pass/fail lines.

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 42;
    int trials = 20;
};

struct SuiteResult {
    bool pass = true;
    int checked = 0;

    void count(bool ok) {
        ++checked;
        pass = pass && ok;
    }
};

Ellipsoid random_ellipsoid(Xoshiro256pp& rng, int dim) {
    std::vector<double> axes(static_cast<std::size_t>(dim));
    for (double& a : axes) a = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
    return Ellipsoid(std::move(axes));
}

bool verify_duality(std::uint64_t seed, int trials) {
    Xoshiro256pp rng(seed);
    double worst = 0.0;
    SuiteResult result;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 4);
        const Ellipsoid e = random_ellipsoid(rng, n);
        const double i = rng.uniform(-3.5, n + 3.5);
        if (std::abs(i) < 0.05 || std::abs(i + 2.0) < 1e-6 || std::abs(i - n) < 1e-6 ||
            std::abs(i - n - 2.0) < 1e-6)
            continue;
        const double rel =
            std::abs(dual_relation_gap(e, i)) / std::abs(dual_volume(e, i));
        worst = std::max(worst, rel);
        result.count(rel <= 1e-8);
    }
    std::printf("%s duality max_rel_gap=%.3e checks=%d\n", result.pass ? "PASS" : "FAIL",
                worst, result.checked);
    return result.pass;
}

bool verify_oracle(std::uint64_t seed, int trials) {
    Xoshiro256pp rng(seed + 1);
    SuiteResult result;
    double worst_sigma = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 4);
        const Ellipsoid e = random_ellipsoid(rng, n);
        const double i = rng.uniform(-3.5, n + 3.5);
        if (std::abs(i) < 0.05) continue;
        const double exact = dual_volume(e, i);
        auto [est, err] = dual_volume_oracle(e, i, 200000, rng.next());
        const double sigmas = std::abs(est - exact) / err;
        worst_sigma = std::max(worst_sigma, sigmas);
        result.count(sigmas <= 4.0);
    }
    std::printf("%s oracle max_sigma=%.2f checks=%d\n", result.pass ? "PASS" : "FAIL",
                worst_sigma, result.checked);
    return result.pass;
}

bool verify_moments(std::uint64_t seed, int trials) {
    Xoshiro256pp rng(seed + 2);
    SuiteResult result;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 5);
        const Ellipsoid e1 = random_ellipsoid(rng, n);
        std::vector<double> axes(static_cast<std::size_t>(n));
        double partial = 1.0;
        for (int j = 0; j + 1 < n; ++j) {
            axes[static_cast<std::size_t>(j)] = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
            partial *= axes[static_cast<std::size_t>(j)];
        }
        axes[static_cast<std::size_t>(n - 1)] = e1.axis_product() / partial;
        if (axes.back() < 1e-2 || axes.back() > 1e2) {
            --t;
            continue;
        }
        const Ellipsoid e2(std::move(axes));
        const auto counted = count_positive_roots(gap_polynomial(e1, e2, {.volume = true}));
        result.count(counted.zero_polynomial || counted.count <= n - 2);
    }
    std::printf("%s moments sign_change_bound checks=%d\n", result.pass ? "PASS" : "FAIL",
                result.checked);
    return result.pass;
}

bool verify_recovery(std::uint64_t seed, int trials) {
    Xoshiro256pp rng(seed + 3);
    SuiteResult result;
    double worst = 0.0;
    SolverConfig cfg;
    cfg.num_starts = 6;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const Ellipsoid e = random_ellipsoid(rng, n);
        RecoveryProblem problem{n, RecoveryKind::dual_volumes, {}};
        for (int j = 1; j <= n; ++j)
            problem.targets.push_back({static_cast<double>(j), dual_volume(e, j)});
        const auto sol = recover_dual(problem, cfg);
        double err = 0.0;
        for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(sol.ellipsoid.axis(j) - e.axis(j)) / e.axis(j));
        worst = std::max(worst, err);
        result.count(sol.converged && err <= 1e-6 && sol.distinct_basins_found == 1);
    }
    std::printf("%s recovery max_axis_err=%.3e checks=%d\n", result.pass ? "PASS" : "FAIL",
                worst, result.checked);
    return result.pass;
}

bool verify_steiner(std::uint64_t seed, int trials) {
    Xoshiro256pp rng(seed + 4);
    SuiteResult result;
    double worst_sigma = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 2);
        const Ellipsoid e = random_ellipsoid(rng, n);
        const double eps = rng.uniform(0.1, 1.5);
        const double poly = dual_steiner_polynomial(e, eps);
        auto radial_sum = [&](std::span<const double> theta) {
            const double rho = 1.0 / minkowski_functional(e, theta);
            return std::pow(rho + eps, n);
        };
        auto [mc, err] = mc_sphere_integral(radial_sum, n, 200000, rng.next());
        const double sigmas = std::abs(poly - mc / n) / (err / n);
        worst_sigma = std::max(worst_sigma, sigmas);
        result.count(sigmas <= 4.0);
    }
    std::printf("%s steiner max_sigma=%.2f checks=%d\n", result.pass ? "PASS" : "FAIL",
                worst_sigma, result.checked);
    return result.pass;
}

int run_verify(const VerifyArgs& args) {
    bool all = true;
    const bool everything = args.suite == "all";
    if (everything || args.suite == "duality") all &= verify_duality(args.seed, args.trials);
    if (everything || args.suite == "oracle") all &= verify_oracle(args.seed, args.trials);
    if (everything || args.suite == "moments") all &= verify_moments(args.seed, args.trials);
    if (everything || args.suite == "recovery") all &= verify_recovery(args.seed, args.trials);
    if (everything || args.suite == "steiner") all &= verify_steiner(args.seed, args.trials);
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"dual and intrinsic volumes of ellipsoids: forward evaluation, "
                 "inverse recovery, property verification, profile sweeps"};
    app.require_subcommand(1);

    ComputeArgs compute_args;
    auto* compute = app.add_subcommand("compute", "evaluate dual volumes at given orders");
    compute->add_option("--axes", compute_args.axes, "semi-axes, comma separated")
        ->required()
        ->delimiter(',');
    compute->add_option("--orders", compute_args.orders, "orders, comma separated")
        ->required()
        ->delimiter(',');
    compute->add_option("--oracle-samples", compute_args.oracle_samples,
                        "also print a Monte Carlo oracle column");
    compute->add_option("--seed", compute_args.seed)->envname("DUALVOL_SEED");
    compute->add_option("--tol", compute_args.tol)->envname("DUALVOL_TOL");
    compute->add_flag("--json", compute_args.as_json);

    InvertArgs invert_args;
    auto* invert = app.add_subcommand("invert", "recover an ellipsoid from volume data");
    invert->add_option("--dim", invert_args.dim);
    invert->add_option("--orders", invert_args.orders)->delimiter(',');
    invert->add_option("--values", invert_args.values)->delimiter(',');
    invert->add_flag("--r3", invert_args.r3, "three-dimensional intrinsic triple");
    invert->add_option("--v1", invert_args.v1);
    invert->add_option("--v2", invert_args.v2);
    invert->add_option("--v3", invert_args.v3);
    invert->add_option("--revolution", invert_args.revolution,
                       "revolution problem: n k, with --vn --vk --vnk")
        ->expected(2);
    invert->add_option("--revolution-even", invert_args.revolution_even,
                       "even-dimension variant: n k, with --vn --vhalf --vk")
        ->expected(2);
    invert->add_option("--vn", invert_args.vn);
    invert->add_option("--vk", invert_args.vk);
    invert->add_option("--vnk", invert_args.vnk);
    invert->add_option("--vhalf", invert_args.vhalf);
    invert->add_option("--from-json", invert_args.from_json,
                       "read a compute --json document (path or - for stdin)");
    invert->add_option("--starts", invert_args.starts);
    invert->add_option("--seed", invert_args.seed)->envname("DUALVOL_SEED");
    invert->add_option("--tol", invert_args.tol)->envname("DUALVOL_TOL");
    invert->add_flag("--json", invert_args.as_json);

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "run seeded property suites");
    verify->add_option("--suite", verify_args.suite)
        ->check(CLI::IsMember({"duality", "oracle", "moments", "recovery", "steiner", "all"}));
    verify->add_option("--seed", verify_args.seed)->envname("DUALVOL_SEED");
    verify->add_option("--trials", verify_args.trials)->check(CLI::PositiveNumber);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "tabulate the unit-volume revolution profile");
    sweep->add_option("--revolution", sweep_args.revolution, "n k")->required()->expected(2);
    sweep->add_option("--a-grid", sweep_args.grid, "lo:hi:steps")->required();
    sweep->add_option("--out", sweep_args.out_path)->required();
    sweep->add_flag("--find-pair", sweep_args.find_pair,
                    "append a non-congruent pair with equal V_k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidInput;
    }

    try {
        if (compute->parsed()) return run_compute(compute_args);
        if (invert->parsed()) return run_invert(invert_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
    } catch (const QuadratureError& e) {
        std::fprintf(stderr, "quadrature failure: %s\n", e.what());
        return kExitQuadratureFailure;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
