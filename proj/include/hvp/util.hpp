#pragma once
// Shared plumbing: deterministic RNG streams, thread pool sizing, lattice QMC.
#include <cstdint>
#include <cmath>
#include <vector>
#include <thread>
#include <functional>

namespace hvp {

// SplitMix64: tiny, statistically solid, and splittable by construction —
// independent streams come from hashing (seed, stream index).
struct SplitMix64 {
  uint64_t s;
  explicit SplitMix64(uint64_t seed = 0) : s(seed) {}
  uint64_t next() {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double unit() { return (next() >> 11) * 0x1.0p-53; }
  double unit_in(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  SplitMix64 g(a ^ (b * 0x9e3779b97f4a7c15ull + 0x7f4a7c15u));
  g.next();
  return g.next();
}

// Worker count: HVP_THREADS env var wins, else hardware concurrency.
int thread_count();

// Deterministic parallel map over [0,n): work is split into fixed chunks
// independent of the thread count; f(chunk_id, begin, end) writes into
// per-chunk slots that the caller reduces in chunk order afterwards.
void parallel_chunks(long long n, long long chunk,
                     const std::function<void(int, long long, long long)>& f);

// Rank-1 Fibonacci lattice in [0,1)^2 with a Cranley–Patterson shift:
// deterministic low-discrepancy nodes for integrals over layered fields.
struct Lattice2D {
  long long n;
  long long gen;
  double sx, sz;
  Lattice2D(long long npts, uint64_t seed);
  inline void point(long long i, double& x, double& z) const {
    double u = double(i) / double(n) + sx;
    double v = double((__int128(i) * gen) % n) / double(n) + sz;
    x = u - std::floor(u);
    z = v - std::floor(v);
  }
};

inline double sqr(double t) { return t * t; }

}  // namespace hvp
