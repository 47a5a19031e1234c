// Timing comparison of the serial reference kernels against the OpenMP
// paths. Both must produce identical numbers; the table reports wall time
// and speedup.

#include <chrono>
#include <cstdio>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dualvol/dual_volumes.hpp"
#include "dualvol/intrinsic_volumes.hpp"
#include "dualvol/inverse_solver.hpp"

using namespace dualvol;

namespace {

template <class Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx  %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp; both columns run serial\n");
#endif
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    const Ellipsoid e({0.7, 1.2, 1.9});

    {
        double serial_value = 0.0, parallel_value = 0.0;
        const double ts = time_seconds([&] {
            serial_value =
                dual_volume_oracle(e, 1.5, 8000000, 41, ExecutionPolicy::serial).first;
        });
        const double tp = time_seconds([&] {
            parallel_value =
                dual_volume_oracle(e, 1.5, 8000000, 41, ExecutionPolicy::parallel).first;
        });
        row("dual-volume oracle (8e6)", ts, tp, serial_value == parallel_value);
    }

    {
        auto g = [&](std::span<const double> theta) {
            const double rho = 1.0 / minkowski_functional(e, theta);
            return rho * rho * rho;
        };
        double sv = 0.0, pv = 0.0;
        const double ts = time_seconds(
            [&] { sv = mc_sphere_integral(g, 3, 8000000, 43, ExecutionPolicy::serial).first; });
        const double tp = time_seconds(
            [&] { pv = mc_sphere_integral(g, 3, 8000000, 43, ExecutionPolicy::parallel).first; });
        row("sphere integral (8e6)", ts, tp, sv == pv);
    }

    {
        double sv = 0.0, pv = 0.0;
        const double ts = time_seconds(
            [&] { sv = v_k_zonoid_mc(e, 2, 2000000, 47, ExecutionPolicy::serial).first; });
        const double tp = time_seconds(
            [&] { pv = v_k_zonoid_mc(e, 2, 2000000, 47, ExecutionPolicy::parallel).first; });
        row("zonoid V_k (2e6)", ts, tp, sv == pv);
    }

    {
        RecoveryProblem problem{3, RecoveryKind::dual_volumes, {}};
        for (int j = 1; j <= 3; ++j)
            problem.targets.push_back({static_cast<double>(j), dual_volume(e, j)});
        SolverConfig cfg;
        cfg.num_starts = 16;
        double sv = 0.0, pv = 0.0;
        const double ts = time_seconds([&] {
            SolverConfig c = cfg;
            c.policy = ExecutionPolicy::serial;
            sv = recover_dual(problem, c).ellipsoid.axis(0);
        });
        const double tp = time_seconds([&] {
            SolverConfig c = cfg;
            c.policy = ExecutionPolicy::parallel;
            pv = recover_dual(problem, c).ellipsoid.axis(0);
        });
        row("multistart recovery (16)", ts, tp, sv == pv);
    }

    return 0;
}
