#include "fbreg/threads.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>

namespace fbreg {

namespace {

int g_threads = 0;  // 0 = uninitialized

int init_threads() {
  if (const char* env = std::getenv("FBREG_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

}  // namespace

int thread_count() {
  if (g_threads == 0) g_threads = init_threads();
  return g_threads;
}

void set_thread_count(int t) { g_threads = std::max(1, t); }

void parallel_blocks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  const int nt = std::min<std::size_t>(thread_count(), nblocks);
  if (nt <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      fn(b * kReduceBlock, std::min(count, (b + 1) * kReduceBlock));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= nblocks) break;
      fn(b * kReduceBlock, std::min(count, (b + 1) * kReduceBlock));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt) - 1);
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double block_sum(std::size_t count, const std::function<double(std::size_t)>& term) {
  if (count == 0) return 0.0;
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nblocks, 0.0);
  parallel_blocks(count, [&](std::size_t b0, std::size_t b1) {
    double s = 0;
    for (std::size_t i = b0; i < b1; ++i) s += term(i);
    partial[b0 / kReduceBlock] = s;
  });
  double total = 0;
  for (double p : partial) total += p;
  return total;
}

double block_max(std::size_t count, const std::function<double(std::size_t)>& term) {
  if (count == 0) return -std::numeric_limits<double>::infinity();
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nblocks, -std::numeric_limits<double>::infinity());
  parallel_blocks(count, [&](std::size_t b0, std::size_t b1) {
    double s = -std::numeric_limits<double>::infinity();
    for (std::size_t i = b0; i < b1; ++i) s = std::max(s, term(i));
    partial[b0 / kReduceBlock] = s;
  });
  double total = -std::numeric_limits<double>::infinity();
  for (double p : partial) total = std::max(total, p);
  return total;
}

}  // namespace fbreg
