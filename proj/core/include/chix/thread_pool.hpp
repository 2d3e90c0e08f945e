#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace chix {

// Number of worker threads to use: explicit request, else CHIX_THREADS env
// var, else hardware concurrency.
unsigned resolve_thread_count(unsigned requested = 0);

// Runs fn(block_index, rep_begin, rep_end) over fixed-size blocks of the
// replicate range [0, n_rep). Blocks are claimed dynamically but identified by
// index, so any per-block partial results can be combined in block order,
// making reductions independent of the worker count and of scheduling.
void parallel_blocks(std::uint64_t n_rep, std::uint64_t block_size, unsigned n_threads,
                     const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn);

inline std::uint64_t default_block_size() { return 4096; }

// Pairwise (tree) sum over an array of per-block partials; deterministic for a
// fixed block layout regardless of how many workers produced the partials.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace chix
