#pragma once

// Subsets of a ground set {0, ..., n-1} packed into machine words.

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace matcat {

/// Bit i set <=> element i belongs to the subset.
using Mask = std::uint32_t;

/// Ground sets are capped so every subset fits the 16-bit serialized form.
inline constexpr int kMaxGround = 15;

constexpr Mask bit(int i) { return Mask{1} << i; }
constexpr Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }
constexpr int popcount(Mask m) { return std::popcount(m); }
constexpr int lowest(Mask m) { return std::countr_zero(m); }
constexpr bool contains(Mask outer, Mask inner) { return (outer & inner) == inner; }

template <class F>
void for_each_element(Mask m, F&& f) {
  while (m) {
    f(lowest(m));
    m &= m - 1;
  }
}

std::vector<int> elements_of(Mask m);

/// Exact binomial coefficient; callers stay far below overflow (n <= 62).
std::uint64_t binomial(int n, int k);

/// All k-subsets of an n-set in increasing mask order.
std::vector<Mask> k_subsets(int n, int k);

/// Shorthand "013" for {0,1,3} when every element is a single digit,
/// otherwise "{0,1,13}". The empty set prints as "{}".
std::string to_string(Mask m);

/// Parses the digit shorthand ("2356") or a brace list ("{0,1,13}").
Mask parse_mask(std::string_view text);

/// Applies an element relabelling: element i moves to perm[i].
Mask permute_mask(Mask m, const std::vector<int>& perm);

/// Removes element e and shifts every element above e down by one.
constexpr Mask squeeze_out(Mask m, int e) {
  const Mask low = m & (bit(e) - 1);
  const Mask high = (m >> (e + 1)) << e;
  return low | high;
}

/// Inverse of squeeze_out: opens a gap at position e (left empty).
constexpr Mask open_gap(Mask m, int e) {
  const Mask low = m & (bit(e) - 1);
  const Mask high = (m >> e) << (e + 1);
  return low | high;
}

}  // namespace matcat
