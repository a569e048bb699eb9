#include "matcat/subset.hpp"

#include <cctype>
#include <stdexcept>

namespace matcat {

std::vector<int> elements_of(Mask m) {
  std::vector<int> out;
  out.reserve(popcount(m));
  for_each_element(m, [&](int e) { out.push_back(e); });
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<Mask> k_subsets(int n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > n) return out;
  out.reserve(binomial(n, k));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack walks k-subsets in increasing numeric order.
  Mask m = full_mask(k);
  const Mask limit = bit(n);
  while (m < limit) {
    out.push_back(m);
    const Mask c = m & (~m + 1);
    const Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

std::string to_string(Mask m) {
  if (m == 0) return "{}";
  const bool digits = m < bit(10);
  std::string out;
  if (!digits) out.push_back('{');
  bool first = true;
  for_each_element(m, [&](int e) {
    if (!digits && !first) out.push_back(',');
    out += std::to_string(e);
    first = false;
  });
  if (!digits) out.push_back('}');
  return out;
}

Mask parse_mask(std::string_view text) {
  Mask m = 0;
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') throw std::invalid_argument("unterminated subset: " + std::string(text));
    int value = -1;
    for (char c : text.substr(1, text.size() - 2)) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        value = (value < 0 ? 0 : value * 10) + (c - '0');
      } else if (c == ',') {
        if (value < 0) throw std::invalid_argument("empty element in " + std::string(text));
        m |= bit(value);
        value = -1;
      } else if (c != ' ') {
        throw std::invalid_argument("bad subset: " + std::string(text));
      }
    }
    if (value >= 0) m |= bit(value);
    return m;
  }
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("bad subset: " + std::string(text));
    }
    m |= bit(c - '0');
  }
  return m;
}

Mask permute_mask(Mask m, const std::vector<int>& perm) {
  Mask out = 0;
  for_each_element(m, [&](int e) { out |= bit(perm[e]); });
  return out;
}

}  // namespace matcat
