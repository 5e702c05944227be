#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fbreg {

// Process-wide worker count. Reads FBREG_THREADS on first use; the CLI
// --threads flag overrides. Results never depend on the value: all maps are
// elementwise and all reductions run over fixed-size blocks whose partial
// sums are combined in index order.
int thread_count();
void set_thread_count(int t);

inline constexpr std::size_t kReduceBlock = 4096;

// Runs fn(begin, end) over [0, count) split into kReduceBlock-sized blocks.
void parallel_blocks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

// Deterministic sum of term(i) for i in [0, count): per-block partial sums in
// index order, then a sequential pass over the block array.
double block_sum(std::size_t count, const std::function<double(std::size_t)>& term);

// Deterministic max over blocks (max is order-free, blocks keep the code path
// shared with block_sum).
double block_max(std::size_t count, const std::function<double(std::size_t)>& term);

}  // namespace fbreg
