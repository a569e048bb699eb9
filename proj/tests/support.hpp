#pragma once

// Independent oracles shared by the test binaries. Nothing here calls the
// library's rank, closure or lattice code.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "matcat/matroid.hpp"
#include "matcat/orderly.hpp"

namespace matcat::testing {

/// Column rank of an integer matrix modulo a prime p, by elimination.
inline int rank_mod_p(int p, int rows, const std::vector<std::vector<int>>& columns, Mask chosen) {
  std::vector<std::vector<int>> vecs;
  for_each_element(chosen, [&](int c) { vecs.push_back(columns[c]); });
  int rank = 0;
  for (int r = 0; r < rows && rank < static_cast<int>(vecs.size()); ++r) {
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(vecs.size()); ++i) {
      if (vecs[i][r] % p != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(vecs[rank], vecs[pivot]);
    int inv = 1;
    while ((vecs[rank][r] * inv) % p != 1) ++inv;
    for (int i = 0; i < static_cast<int>(vecs.size()); ++i) {
      if (i == rank || vecs[i][r] % p == 0) continue;
      const int f = (vecs[i][r] * inv) % p;
      for (int k = 0; k < rows; ++k) vecs[i][k] = ((vecs[i][k] - f * vecs[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Brute-force rank table of the column matroid of a matrix over GF(p).
inline std::vector<std::uint8_t> matrix_rank_table(int p, int rows, const std::vector<std::vector<int>>& columns) {
  const int n = static_cast<int>(columns.size());
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  for (Mask a = 0; a < (Mask{1} << n); ++a) table[a] = static_cast<std::uint8_t>(rank_mod_p(p, rows, columns, a));
  return table;
}

/// Hyperplanes read off a rank table: maximal sets of rank r - 1.
inline std::vector<Mask> hyperplanes_of(int n, const std::vector<std::uint8_t>& rank) {
  const Mask ground = full_mask(n);
  const int r = rank[ground];
  std::vector<Mask> out;
  for (Mask a = 0; a <= ground; ++a) {
    if (rank[a] != r - 1) continue;
    bool maximal = true;
    for_each_element(ground & ~a, [&](int e) { maximal = maximal && rank[a | bit(e)] == r; });
    if (maximal) out.push_back(a);
  }
  return out;
}

struct RandomMatrix {
  int p = 2;
  int rows = 0;
  std::vector<std::vector<int>> columns;
};

inline RandomMatrix random_matrix(std::mt19937_64& rng, int n) {
  static constexpr int kPrimes[] = {2, 3, 5};
  RandomMatrix m;
  m.p = kPrimes[rng() % 3];
  m.rows = 1 + static_cast<int>(rng() % std::max(1, n));
  for (int c = 0; c < n; ++c) {
    std::vector<int> col(m.rows);
    // Zero-heavy entries give loops, parallel pairs and small circuits.
    for (int& x : col) x = rng() % 3 == 0 ? static_cast<int>(rng() % m.p) : 0;
    m.columns.push_back(col);
  }
  return m;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

/// Closure as the intersection of the hyperplanes containing a set.
inline Mask closure_from_hyperplanes(const Matroid& m, Mask a) {
  Mask cl = m.ground();
  for (Mask h : m.hyperplanes()) {
    if (contains(h, a)) cl &= h;
  }
  return cl;
}

/// Rank as the largest subset in which no element lies in the closure of
/// the others.
inline int rank_from_hyperplanes(const Matroid& m, Mask a) {
  int best = 0;
  for (Mask s = a;; s = (s - 1) & a) {
    if (popcount(s) > best) {
      bool independent = true;
      for_each_element(s, [&](int x) {
        independent = independent && !(closure_from_hyperplanes(m, s & ~bit(x)) & bit(x));
      });
      if (independent) best = popcount(s);
    }
    if (s == 0) break;
  }
  return best;
}

/// The catalogue through n elements, computed once per process.
inline const std::vector<std::vector<Matroid>>& catalogue(int max_n) {
  static std::vector<std::vector<Matroid>> levels{{Matroid()}};
  while (static_cast<int>(levels.size()) <= max_n) levels.push_back(next_level(levels.back()));
  return levels;
}

}  // namespace matcat::testing
