#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "matcat/canonical.hpp"
#include "matcat/errors.hpp"
#include "matcat/named.hpp"
#include "support.hpp"

using namespace matcat;
using matcat::testing::catalogue;
using matcat::testing::random_permutation;

namespace {

std::vector<Mask> masks(std::initializer_list<const char*> sets) {
  std::vector<Mask> out;
  for (const char* s : sets) out.push_back(parse_mask(s));
  return out;
}

Matroid lattice_example() {
  return Matroid::from_hyperplanes(7, masks({"02", "34", "05", "15", "45", "16", "013", "124", "046", "2356"}));
}

// Automorphisms by trying every permutation of the ground set.
struct BruteSymmetry {
  std::uint64_t order = 0;
  std::vector<int> orbit_of;
};

BruteSymmetry brute_symmetry(const Matroid& m) {
  const int n = m.size();
  BruteSymmetry out;
  out.orbit_of.resize(n);
  std::iota(out.orbit_of.begin(), out.orbit_of.end(), 0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permute(m, perm) != m) continue;
    ++out.order;
    for (int i = 0; i < n; ++i) {
      const int a = out.orbit_of[i];
      const int b = out.orbit_of[perm[i]];
      const int lo = std::min(a, b);
      for (int& o : out.orbit_of) {
        if (o == a || o == b) o = lo;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool brute_isomorphic(const Matroid& a, const Matroid& b) {
  if (a.size() != b.size() || a.rank() != b.rank() || a.hyperplanes().size() != b.hyperplanes().size()) return false;
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permute(a, perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

TEST_CASE("hyperplane graph") {
  const HyperplaneGraph u23 = hyperplane_graph(uniform_matroid(2, 3));
  CHECK(u23.n_elements == 3);
  CHECK(u23.n_hyperplanes == 3);
  // Each hyperplane is a single point, so the graph is a perfect matching.
  CHECK(u23.edge_count() == 3);

  const HyperplaneGraph zero = hyperplane_graph(Matroid::from_hyperplanes(4, {}));
  CHECK(zero.n_elements == 4);
  CHECK(zero.n_hyperplanes == 0);
  CHECK(zero.edge_count() == 0);

  const HyperplaneGraph example = hyperplane_graph(lattice_example());
  CHECK(example.n_elements == 7);
  CHECK(example.n_hyperplanes == 10);
  CHECK(example.edge_count() == 25);
}

TEST_CASE("automorphism groups match brute force") {
  CHECK(certificate(uniform_matroid(2, 4)).aut_order == 24);
  CHECK(certificate(uniform_matroid(2, 4)).orbit_count() == 1);
  CHECK(certificate(named::fano()).aut_order == 168);
  CHECK(certificate(named::ag32()).aut_order == 1344);
  for (int n = 0; n <= 6; ++n) {
    for (const Matroid& m : catalogue(6)[n]) {
      const Certificate cert = certificate(m);
      const BruteSymmetry brute = brute_symmetry(m);
      REQUIRE(cert.aut_order == brute.order);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          REQUIRE((cert.element_orbits[i] == cert.element_orbits[j]) == (brute.orbit_of[i] == brute.orbit_of[j]));
        }
      }
      for (const auto& g : cert.generators) REQUIRE(permute(m, g) == m);
    }
  }
  std::mt19937_64 rng(3);
  const auto& seven = catalogue(7)[7];
  for (int trial = 0; trial < 25; ++trial) {
    const Matroid& m = seven[rng() % seven.size()];
    REQUIRE(certificate(m).aut_order == brute_symmetry(m).order);
  }
}

TEST_CASE("certificates are invariant under relabelling") {
  std::mt19937_64 rng(2024);
  // Every 50th matroid through n=8, i.e. a 2% sample, 100 relabellings each.
  std::size_t index = 0;
  std::size_t sampled = 0;
  for (const auto& level : catalogue(8)) {
    for (const Matroid& m : level) {
      if (index++ % 50 != 0) continue;
      ++sampled;
      const Certificate base = certificate(m);
      for (int trial = 0; trial < 100; ++trial) {
        const auto perm = random_permutation(rng, m.size());
        const Matroid p = permute(m, perm);
        const Certificate c = certificate(p);
        REQUIRE(c.bytes == base.bytes);
        REQUIRE(c.aut_order == base.aut_order);
        REQUIRE(canonical_form(p) == canonical_form(m));
        if (m.size() > 0) {
          // The distinguished element moves with the relabelling up to symmetry.
          const int d = distinguished_element(m);
          const int dp = distinguished_element(p);
          REQUIRE(c.element_orbits[dp] == c.element_orbits[perm[d]]);
        }
      }
    }
  }
  CHECK(sampled >= 22);
}

TEST_CASE("certificate bytes round-trip") {
  for (const auto& level : catalogue(6)) {
    for (const Matroid& m : level) {
      const Certificate c = certificate(m);
      REQUIRE(c.bytes.size() == 2 + 2 * m.hyperplanes().size());
      REQUIRE(c.bytes[0] == m.size());
      REQUIRE(c.bytes[1] == m.rank());
      const Matroid back = matroid_from_certificate(c.bytes);
      REQUIRE(back == canonical_form(m));
      REQUIRE(back == m);
    }
  }
}

TEST_CASE("isomorphism agrees with brute force") {
  std::mt19937_64 rng(5);
  const auto& six = catalogue(6)[6];
  for (int trial = 0; trial < 300; ++trial) {
    const Matroid& a = six[rng() % six.size()];
    const Matroid b = trial % 2 ? permute(a, random_permutation(rng, 6))
                                : permute(six[rng() % six.size()], random_permutation(rng, 6));
    REQUIRE(is_isomorphic(a, b) == brute_isomorphic(a, b));
  }
  CHECK_FALSE(is_isomorphic(uniform_matroid(2, 4), Matroid::from_hyperplanes(5, masks({"0", "1", "2", "34"}))));
  CHECK_FALSE(is_isomorphic(named::f8(), named::ag32_prime()));
  CHECK(is_isomorphic(relax(named::ag32_prime(), parse_mask("0145")), named::f8()));
}

TEST_CASE("distinguished element") {
  CHECK_THROWS_AS(distinguished_element(Matroid()), EmptyGroundSet);
  const Matroid m = lattice_example();
  const int d = distinguished_element(m);
  CHECK(d == distinguished_element(m));
  const Certificate c = certificate(m);
  CHECK(c.canonical_order[0] == d);

  // One loop and three coloops: whichever element comes out, relabelled
  // copies return an element of the matching orbit.
  const Matroid mixed = add_loop(free_matroid(3));
  std::mt19937_64 rng(9);
  const int base = distinguished_element(mixed);
  for (int trial = 0; trial < 30; ++trial) {
    const auto perm = random_permutation(rng, 4);
    const Matroid p = permute(mixed, perm);
    const bool base_is_loop = (loops(mixed) & bit(base)) != 0;
    REQUIRE(((loops(p) & bit(distinguished_element(p))) != 0) == base_is_loop);
  }
}

TEST_CASE("orbit witnesses are automorphisms") {
  const Matroid m = named::vamos();
  const Certificate c = certificate(m);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const auto w = orbit_witness(c.generators, 8, a, b);
      REQUIRE(w.has_value() == (c.element_orbits[a] == c.element_orbits[b]));
      if (w) {
        REQUIRE((*w)[a] == b);
        REQUIRE(permute(m, *w) == m);
      }
    }
  }
}

TEST_CASE("first root cell holds the point labelled first") {
  for (const auto& level : catalogue(7)) {
    for (const Matroid& m : level) {
      if (m.size() == 0) continue;
      const SetSystem sys{m.size(), m.hyperplanes(), {}};
      REQUIRE((first_root_cell(sys) & bit(certificate(m).canonical_order[0])) != 0);
    }
  }
}

TEST_CASE("coloured set systems respect colours") {
  // Blocks 01 and 23 admit 8 symmetries; colouring point 0 leaves only 2<->3.
  const SetSystem plain{4, masks({"01", "23"}), {}};
  const SetSystem coloured{4, masks({"01", "23"}), {1, 0, 0, 0}};
  CHECK(canonical_labeling(plain).group_order == 8);
  CHECK(canonical_labeling(coloured).group_order == 2);
}
