#include "hblock/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hblock {

namespace {

constexpr std::int64_t kMaxBlocks = 64;

int env_threads() {
  const char* v = std::getenv("HBLOCK_THREADS");
  if (!v) return 1;
  try {
    int n = std::stoi(v);
    return n >= 1 ? n : 1;
  } catch (...) {
    return 1;
  }
}

std::atomic<int>& threads_setting() {
  static std::atomic<int> n{env_threads()};
  return n;
}

}  // namespace

int thread_count() { return threads_setting().load(); }

void set_thread_count(int n) { threads_setting().store(std::max(1, n)); }

std::int64_t block_count(std::int64_t n) { return std::max<std::int64_t>(1, std::min(n, kMaxBlocks)); }

std::pair<std::int64_t, std::int64_t> block_range(std::int64_t n, std::int64_t block) {
  std::int64_t b = block_count(n);
  return {n * block / b, n * (block + 1) / b};
}

void run_blocks(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  std::int64_t blocks = block_count(n);
  int threads = static_cast<int>(std::min<std::int64_t>(thread_count(), blocks));
  if (threads <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::int64_t b = next.fetch_add(1);
        if (b >= blocks) return;
        try {
          body(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hblock
