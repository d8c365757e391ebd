#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pentaperm {

// PENTAPERM_THREADS overrides the hardware default; a --threads flag wins
// over both at the CLI layer.
inline int default_thread_count() {
  if (const char* env = std::getenv("PENTAPERM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Split [0, n) into contiguous ranges, one worker each: fn(worker, lo, hi).
template <class Fn>
void parallel_ranges(uint64_t n, int nthreads, Fn&& fn) {
  if (nthreads < 1) nthreads = 1;
  if (n == 0) return;
  uint64_t nt = std::min<uint64_t>(static_cast<uint64_t>(nthreads), n);
  if (nt == 1) {
    fn(0, uint64_t(0), n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nt));
  uint64_t chunk = n / nt, rem = n % nt;
  uint64_t lo = 0;
  for (uint64_t w = 0; w < nt; ++w) {
    uint64_t hi = lo + chunk + (w < rem ? 1 : 0);
    pool.emplace_back([&fn, w, lo, hi] { fn(static_cast<int>(w), lo, hi); });
    lo = hi;
  }
  for (auto& t : pool) t.join();
}

}  // namespace pentaperm
