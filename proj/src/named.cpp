#include "matcat/named.hpp"

#include <algorithm>
#include <bit>

namespace matcat::named {

Matroid sparse_paving(int n, int rank, const std::vector<Mask>& circuit_hyperplanes) {
  std::vector<Mask> hyps(circuit_hyperplanes.begin(), circuit_hyperplanes.end());
  for (Mask s : k_subsets(n, rank - 1)) {
    const bool covered = std::any_of(circuit_hyperplanes.begin(), circuit_hyperplanes.end(),
                                     [&](Mask h) { return (h & s) == s; });
    if (!covered) hyps.push_back(s);
  }
  return Matroid::from_hyperplanes(n, std::move(hyps));
}

namespace {

std::vector<Mask> masks(std::initializer_list<const char*> sets) {
  std::vector<Mask> out;
  for (const char* s : sets) out.push_back(parse_mask(s));
  return out;
}

}  // namespace

Matroid fano() { return sparse_paving(7, 3, masks({"012", "034", "056", "135", "146", "236", "245"})); }

Matroid fano_dual() { return dual(fano()); }

Matroid p8() {
  return sparse_paving(8, 4, masks({"0127", "0136", "0235", "1234", "0347", "1256", "0456", "1457", "2467", "3567"}));
}

Matroid p1() { return relax(p8(), parse_mask("3567")); }
Matroid p2_prime() { return relax(p1(), parse_mask("0347")); }
Matroid p2_double_prime() { return relax(p1(), parse_mask("1256")); }
Matroid p3() { return relax(p2_prime(), parse_mask("1256")); }

Matroid ag32() {
  std::vector<Mask> planes;
  for (int normal = 1; normal < 8; ++normal) {
    for (int side = 0; side < 2; ++side) {
      Mask plane = 0;
      for (int x = 0; x < 8; ++x) {
        if (std::popcount(static_cast<unsigned>(x & normal)) % 2 == side) plane |= bit(x);
      }
      planes.push_back(plane);
    }
  }
  return sparse_paving(8, 4, planes);
}

Matroid ag32_prime() { return relax(ag32(), parse_mask("0123")); }
Matroid f8() { return relax(ag32_prime(), parse_mask("0145")); }
Matroid r8() { return relax(relax(ag32(), parse_mask("0123")), parse_mask("4567")); }

Matroid vamos_plus() {
  return sparse_paving(8, 4, masks({"0123", "0145", "0167", "0246", "2345", "2367"}));
}

Matroid vamos() { return relax(vamos_plus(), parse_mask("0246")); }

}  // namespace matcat::named
