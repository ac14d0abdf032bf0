#pragma once

#include <cstdint>
#include <functional>
#include <utility>

namespace hblock {

// Worker threads used by the parallel sums. Initialised from the
// HBLOCK_THREADS environment variable (default 1).
int thread_count();
void set_thread_count(int n);

// Fixed partition of [0, n) into block_count(n) contiguous blocks. The
// partition never depends on the thread count, so per-block partial sums
// merged in block order are bit-identical for any number of threads.
std::int64_t block_count(std::int64_t n);
std::pair<std::int64_t, std::int64_t> block_range(std::int64_t n, std::int64_t block);

// Runs body(block) for every block of [0, n) on thread_count() threads.
void run_blocks(std::int64_t n, const std::function<void(std::int64_t block)>& body);

}  // namespace hblock
