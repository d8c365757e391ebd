#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pentaperm/bits.hpp"

namespace pentaperm {

// F2-linear map on packed coordinate vectors of dimension n <= 127.
// img[i] is the image of the i-th unit vector.
struct LinearMapF2 {
  int n = 0;
  std::vector<u128> img;

  u128 apply(u128 x) const {
    u128 out = 0;
    if (!(x >> 64)) {
      uint64_t lo = static_cast<uint64_t>(x);
      while (lo) {
        int i = __builtin_ctzll(lo);
        lo &= lo - 1;
        out ^= img[static_cast<size_t>(i)];
      }
      return out;
    }
    for (int i = 0; i < n; ++i)
      if ((x >> i) & 1) out ^= img[static_cast<size_t>(i)];
    return out;
  }
};

// Incremental F2 solver: insert generator pairs (value, preimage) of a linear
// map, then solve(map(t) = target) for some t in the span of the preimages.
class F2Solver {
 public:
  explicit F2Solver(int n = 0) : n_(n) { rows_.assign(static_cast<size_t>(n), {0, 0}); }

  void add_generator(u128 val, u128 pre) {
    while (val) {
      int tb = top_bit128(val);
      auto& row = rows_[static_cast<size_t>(tb)];
      if (row.first == 0) {
        row = {val, pre};
        return;
      }
      val ^= row.first;
      pre ^= row.second;
    }
  }

  std::optional<u128> solve(u128 target) const {
    u128 pre = 0;
    while (target) {
      int tb = top_bit128(target);
      const auto& row = rows_[static_cast<size_t>(tb)];
      if (row.first == 0) return std::nullopt;
      target ^= row.first;
      pre ^= row.second;
    }
    return pre;
  }

  int rank() const {
    int r = 0;
    for (const auto& row : rows_)
      if (row.first != 0) ++r;
    return r;
  }

 private:
  int n_;
  std::vector<std::pair<u128, u128>> rows_;  // indexed by top bit of value
};

// Null-space basis of the map e_i -> cols[i], dimension n (columns packed).
inline std::vector<u128> nullspace_f2(const std::vector<u128>& cols, int n) {
  // Row-reduce the n x n matrix whose columns are `cols`; track combinations.
  std::vector<u128> val(cols.begin(), cols.end());
  std::vector<u128> comb(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) comb[static_cast<size_t>(i)] = u128(1) << i;
  std::vector<u128> basis;
  std::vector<int> pivot_of_bit(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    u128 v = val[static_cast<size_t>(i)];
    u128 c = comb[static_cast<size_t>(i)];
    while (v) {
      int tb = top_bit128(v);
      int p = pivot_of_bit[static_cast<size_t>(tb)];
      if (p < 0) break;
      v ^= val[static_cast<size_t>(p)];
      c ^= comb[static_cast<size_t>(p)];
    }
    val[static_cast<size_t>(i)] = v;
    comb[static_cast<size_t>(i)] = c;
    if (v == 0) {
      basis.push_back(c);
    } else {
      pivot_of_bit[static_cast<size_t>(top_bit128(v))] = i;
    }
  }
  return basis;
}

}  // namespace pentaperm
