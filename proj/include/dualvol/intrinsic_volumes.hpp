#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "dualvol/core_geometry.hpp"
#include "dualvol/quadrature.hpp"

namespace dualvol {

/// First intrinsic volume (normalized mean width),
/// V_1(E) = (n / kappa_{n-1}) * tilde V_{-1}(E polar); reduces the
/// spherical support integral to the one-dimensional moment engine.
double v1(const Ellipsoid& e, const QuadratureConfig& cfg = {});

/// Volume: kappa_n * a_1 ... a_n.
double v_n(const Ellipsoid& e);

/// V_k through the polar identity
/// V_k(E) = kappa_k / (kappa_n kappa_{n-k}) * V_n(E) V_{n-k}(E polar),
/// supported where the recursion bottoms out in v1 or v_n: k = 1 and
/// k = n-1 (which covers every k for n <= 3).
double v_k_via_polar(const Ellipsoid& e, int k, const QuadratureConfig& cfg = {});

/// (V_1, V_2, V_3) of a three-dimensional ellipsoid via the dual-volume
/// reductions V_1 = 4 tilde V_4 / V_3 and V_2 = (9 / 8 pi) V_3 tilde V_-1;
/// tilde V_4 is evaluated by the direct subtracted integral so the V_1
/// route stays independent of v1().
std::array<double, 3> v3_triple(const Ellipsoid& e, const QuadratureConfig& cfg = {});

/// Monte Carlo V_k estimate through the zonoid representation of the
/// ellipsoid: generating-measure samples drawn as uniform points of E
/// (weighted by the (n+1)-moment identity), completed with uniform sphere
/// directions, and averaged over the parallelepiped volume.
/// Returns (estimate, standard error); bit-reproducible for a fixed seed.
std::pair<double, double> v_k_zonoid_mc(const Ellipsoid& e, int k, long samples,
                                        std::uint64_t seed,
                                        ExecutionPolicy policy = ExecutionPolicy::parallel);

/// V_k of an ellipsoid of revolution (equatorial multiplicity n-1):
/// C(n,k) kappa_{n-1} / (n kappa_{n-k}) * a^k * V_1 of the rescaled ball
/// diag(b/a x k, 1 x (n-k)) B; no n-fold integration involved.
double v_k_revolution(const RevolutionSpec& spec, int k, const QuadratureConfig& cfg = {});

} // namespace dualvol
