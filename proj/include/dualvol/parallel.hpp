#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualvol {

// Execution policy for the data-parallel kernels (Monte Carlo blocks,
// multistart batches). `serial` is the reference path kept for testing and
// benchmarking; both paths must produce bit-identical results because work is
// partitioned into index-addressed blocks whose outputs are reduced in fixed
// order.
enum class ExecutionPolicy { serial, parallel };

// Runs fn(block_index) for block_index in [0, num_blocks). With
// ExecutionPolicy::parallel the blocks are distributed over OpenMP threads;
// fn must write only to per-block storage.
template <class Fn>
void for_each_block(int num_blocks, ExecutionPolicy policy, Fn&& fn) {
    if (policy == ExecutionPolicy::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int b = 0; b < num_blocks; ++b) fn(b);
        return;
#endif
    }
    for (int b = 0; b < num_blocks; ++b) fn(b);
}

} // namespace dualvol
