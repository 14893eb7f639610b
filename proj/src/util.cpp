#include "hvp/util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace hvp {

int thread_count() {
  if (const char* env = std::getenv("HVP_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

void parallel_chunks(long long n, long long chunk,
                     const std::function<void(int, long long, long long)>& f) {
  if (n <= 0) return;
  if (chunk <= 0) chunk = 1;
  long long nchunks = (n + chunk - 1) / chunk;
  int workers = std::min<long long>(thread_count(), nchunks);
  if (workers <= 1) {
    for (long long c = 0; c < nchunks; ++c)
      f(int(c), c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<long long>* next = new std::atomic<long long>(0);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, next]() {
      for (;;) {
        long long c = next->fetch_add(1);
        if (c >= nchunks) break;
        f(int(c), c * chunk, std::min(n, (c + 1) * chunk));
      }
    });
  }
  for (auto& t : pool) t.join();
  delete next;
}

namespace {
long long fib_at_least(long long n, long long& prev) {
  long long a = 1, b = 1;
  while (b < n) {
    long long c = a + b;
    a = b;
    b = c;
  }
  prev = a;
  return b;
}
}  // namespace

Lattice2D::Lattice2D(long long npts, uint64_t seed) {
  long long prev = 1;
  n = fib_at_least(std::max<long long>(npts, 8), prev);
  gen = prev;
  SplitMix64 g(mix_seed(seed, 0x1a77Ce));
  sx = g.unit();
  sz = g.unit();
}

}  // namespace hvp
