#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dualvol/core_geometry.hpp"
#include "dualvol/quadrature.hpp"

namespace dualvol {

enum class RecoveryKind { dual_volumes, r3_intrinsic, revolution };

struct RecoveryTarget {
    double order;
    double value;
};

/// Volume data to invert. For dual_volumes: exactly dim targets with
/// distinct non-zero orders drawn from an admissible family (all orders in
/// (-2, n]; or order n present and the rest in (-2, n+2); or orders n and
/// -2 present and the rest in (-4, n+2)).
struct RecoveryProblem {
    int dim;
    RecoveryKind kind;
    std::vector<RecoveryTarget> targets;
};

struct SolverConfig {
    int num_starts = 20;
    double start_log_range = 2.0;  // log-axis starts uniform in [-r, r]^n
    std::uint64_t seed = 715225741;
    int max_iterations = 60;
    double lm_lambda0 = 1e-3;
    double fd_step = 1e-6;
    double residual_tol = 1e-8;
    double ambiguous_tol = 1e-4;  // residual gray zone above residual_tol
    double basin_rel_tol = 1e-4;  // axis clustering tolerance
    QuadratureConfig quadrature{1e-9, 1e-12};
    ExecutionPolicy policy = ExecutionPolicy::parallel;
};

enum class RecoveryStatus { converged, ambiguous, infeasible };

struct RecoverySolution {
    Ellipsoid ellipsoid;  // canonical representative of the best fit
    double residual_max_rel = 0.0;
    int starts_tried = 0;
    bool converged = false;
    int distinct_basins_found = 0;
    RecoveryStatus status = RecoveryStatus::infeasible;
};

/// Damped multistart Gauss-Newton in log-axis coordinates over the dual
/// volumes named by the problem. When the order-n target is present the
/// axis product is eliminated exactly. Deterministic for a fixed config;
/// starts may run in parallel.
RecoverySolution recover_dual(const RecoveryProblem& problem, const SolverConfig& cfg = {});

/// Ellipsoid in R^3 from its three intrinsic volumes, via the conversion
/// tilde V_3 = V3, tilde V_4 = V1 V3 / 4, tilde V_-1 = 8 pi V2 / (9 V3).
RecoverySolution recover_r3(double v1, double v2, double v3, const SolverConfig& cfg = {});

/// Ellipsoid of revolution from (V_n, V_k, V_{n-k}), k != n/2. Rescales to
/// unit-ball volume and solves the one-dimensional profile on its two
/// monotone branches, then selects by the complementary index.
RecoverySolution recover_revolution(int n, int k, double vn, double vk, double vnk,
                                    const SolverConfig& cfg = {});

/// Even-dimensional variant from (V_n, V_{n/2}, V_k), k not in {n, n/2}:
/// the half-index profile determines the ellipsoid up to polarity and V_k
/// picks the survivor.
RecoverySolution recover_revolution_even(int n, double vn, double vhalf, double vk, int k,
                                         const SolverConfig& cfg = {});

/// Unit-volume profile value V_k of the revolution ellipsoid with equatorial
/// semi-axis `a` and polar semi-axis a^(1-n).
double revolution_vk_profile(int n, int k, double a, const QuadratureConfig& cfg = {});

/// All revolution ellipsoids (up to polar-branch multiplicity) matching
/// (V_n, V_k) alone; two non-congruent matches witness that the pair does
/// not determine the ellipsoid.
std::vector<RevolutionSpec> revolution_candidates_from_vn_vk(int n, int k, double vn, double vk,
                                                             const SolverConfig& cfg = {});

/// A pair a != b of equatorial semi-axes of unit-volume revolution
/// ellipsoids with equal V_k, |a - b| >= 0.05, located on the two sides of
/// the profile minimum.
std::pair<double, double> demonstrate_vk_nonuniqueness(int n, int k,
                                                       const QuadratureConfig& cfg = {});

} // namespace dualvol
