#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

namespace eamkit {

/// Bitmask identifying a site subset A: bit i set <=> site i in A.
using Mask = std::uint64_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask full_mask(int n_sites) {
  return n_sites >= 64 ? ~Mask{0} : (Mask{1} << n_sites) - 1;
}

inline bool mask_valid(Mask m, int n_sites) { return m <= full_mask(n_sites); }

/// Number of unordered site pairs, M = N(N-1)/2.
inline int pair_count(int n_sites) { return n_sites * (n_sites - 1) / 2; }

/// Lexicographic linear index of the pair (i, j), i < j, in 0..M-1.
inline int pair_index(int n_sites, int i, int j) {
  return i * n_sites - i * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of pair_index.
inline std::pair<int, int> pair_sites(int n_sites, int index) {
  for (int i = 0;; ++i) {
    const int row = n_sites - i - 1;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
}

/// Sites of a mask in ascending order.
inline std::vector<int> mask_sites(Mask m, int n_sites) {
  std::vector<int> sites;
  sites.reserve(popcount(m));
  for (int i = 0; i < n_sites; ++i)
    if ((m >> i) & 1) sites.push_back(i);
  return sites;
}

}  // namespace eamkit
