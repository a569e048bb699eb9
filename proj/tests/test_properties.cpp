#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "matcat/canonical.hpp"
#include "matcat/named.hpp"
#include "matcat/properties.hpp"
#include "support.hpp"

using namespace matcat;
using matcat::testing::catalogue;
using matcat::testing::hyperplanes_of;
using matcat::testing::rank_from_hyperplanes;

namespace {

// Field arithmetic written out independently of the library tables.
struct Arith {
  int q;
  int add(int a, int b) const { return q == 4 ? (a ^ b) : (a + b) % q; }
  int neg(int a) const { return q == 4 ? a : (q - a) % q; }
  int mul(int a, int b) const {
    if (q != 4) return a * b % q;
    static const int table[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
    return table[a][b];
  }
  int inv(int a) const {
    for (int b = 1; b < q; ++b) {
      if (mul(a, b) == 1) return b;
    }
    return 0;
  }
};

int column_rank(const Arith& f, int rows, const std::vector<std::vector<int>>& columns, Mask chosen) {
  std::vector<std::vector<int>> vecs;
  for_each_element(chosen, [&](int c) { vecs.push_back(columns[c]); });
  int rank = 0;
  for (int r = 0; r < rows && rank < static_cast<int>(vecs.size()); ++r) {
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(vecs.size()) && pivot < 0; ++i) {
      if (vecs[i][r] != 0) pivot = i;
    }
    if (pivot < 0) continue;
    std::swap(vecs[rank], vecs[pivot]);
    const int inv = f.inv(vecs[rank][r]);
    for (int i = 0; i < static_cast<int>(vecs.size()); ++i) {
      if (i == rank || vecs[i][r] == 0) continue;
      const int factor = f.neg(f.mul(vecs[i][r], inv));
      for (int k = 0; k < rows; ++k) vecs[i][k] = f.add(vecs[i][k], f.mul(factor, vecs[rank][k]));
    }
    ++rank;
  }
  return rank;
}

Matroid column_matroid(const Arith& f, int rows, const std::vector<std::vector<int>>& columns) {
  const int n = static_cast<int>(columns.size());
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  for (Mask a = 0; a <= full_mask(n); ++a) table[a] = static_cast<std::uint8_t>(column_rank(f, rows, columns, a));
  return Matroid::from_hyperplanes(n, hyperplanes_of(n, table));
}

// Every GF(q)-representable matroid on n points as [I_r | A] over all A.
std::set<Matroid> representable_classes(int q, int n) {
  const Arith f{q};
  std::set<Matroid> labelled;
  for (int r = 0; r <= n; ++r) {
    const int free_entries = r * (n - r);
    std::vector<int> a(free_entries, 0);
    while (true) {
      std::vector<std::vector<int>> columns(n, std::vector<int>(r, 0));
      for (int i = 0; i < r; ++i) columns[i][i] = 1;
      for (int j = r; j < n; ++j) {
        for (int i = 0; i < r; ++i) columns[j][i] = a[i * (n - r) + (j - r)];
      }
      labelled.insert(column_matroid(f, r, columns));
      int pos = 0;
      while (pos < free_entries && ++a[pos] == q) a[pos++] = 0;
      if (pos == free_entries) break;
    }
  }
  std::set<Matroid> classes;
  for (const Matroid& m : labelled) classes.insert(canonical_form(m));
  return classes;
}

// Independence in the transversal matroid of a family by Hall's condition:
// X is matchable when every Y inside X meets at least |Y| members.
Matroid transversal_matroid(int n, const std::vector<Mask>& family) {
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::uint8_t> deficient(subsets, 0);
  std::vector<std::uint8_t> table(subsets, 0);
  for (Mask a = 0; a < subsets; ++a) {
    int meeting = 0;
    for (Mask s : family) meeting += (s & a) != 0;
    bool bad = popcount(a) > meeting;
    for_each_element(a, [&](int e) { bad = bad || deficient[a & ~bit(e)]; });
    deficient[a] = bad;
    if (!bad) {
      table[a] = static_cast<std::uint8_t>(popcount(a));
      continue;
    }
    for_each_element(a, [&](int e) { table[a] = std::max(table[a], table[a & ~bit(e)]); });
  }
  return Matroid::from_hyperplanes(n, hyperplanes_of(n, table));
}

// Transversal classes of rank r from every multiset of r nonempty point sets.
std::set<Matroid> transversal_classes(int n, int r) {
  std::set<std::vector<Mask>> seen;
  std::set<Matroid> classes;
  std::vector<Mask> family(r, 1);
  const Mask top = full_mask(n);
  auto step = [&](auto&& self, int index, Mask from) -> void {
    if (index == r) {
      const Matroid m = transversal_matroid(n, family);
      if (m.rank() == r && seen.insert(m.hyperplanes()).second) classes.insert(canonical_form(m));
      return;
    }
    for (Mask s = from; s <= top; ++s) {
      family[index] = s;
      self(self, index + 1, s);
    }
  };
  step(step, 0, 1);
  return classes;
}

std::vector<Mask> bases_by_rank(const Matroid& m) {
  std::vector<Mask> out;
  for (Mask a = 0; a <= m.ground(); ++a) {
    if (popcount(a) == m.rank() && rank_from_hyperplanes(m, a) == m.rank()) out.push_back(a);
  }
  return out;
}

// Exchange conditions checked over every bijection between two bases.
struct Orderability {
  bool base_orderable = true;
  bool strongly = true;
};

Orderability brute_orderability(const Matroid& m) {
  const auto list = bases_by_rank(m);
  const std::set<Mask> is_basis(list.begin(), list.end());
  Orderability out;
  for (Mask a : list) {
    for (Mask b : list) {
      const auto from = elements_of(a);
      auto to = elements_of(b);
      std::sort(to.begin(), to.end());
      bool some_bo = false;
      bool some_sbo = false;
      do {
        bool bo = true;
        for (std::size_t i = 0; i < from.size() && bo; ++i) {
          bo = is_basis.count((a & ~bit(from[i])) | bit(to[i])) && is_basis.count((b & ~bit(to[i])) | bit(from[i]));
        }
        if (!bo) continue;
        some_bo = true;
        bool sbo = true;
        for (Mask pick = 0; pick < (Mask{1} << from.size()) && sbo; ++pick) {
          Mask x = 0, y = 0;
          for (std::size_t i = 0; i < from.size(); ++i) {
            if (pick & bit(static_cast<int>(i))) {
              x |= bit(from[i]);
              y |= bit(to[i]);
            }
          }
          sbo = is_basis.count((a & ~x) | y) && is_basis.count((b & ~y) | x);
        }
        if (sbo) some_sbo = true;
      } while (!some_sbo && std::next_permutation(to.begin(), to.end()));
      out.base_orderable = out.base_orderable && some_bo;
      out.strongly = out.strongly && some_sbo;
    }
  }
  return out;
}

int ingleton_left(const Matroid& m, Mask a, Mask b, Mask c, Mask d) {
  auto r = [&](Mask x) { return rank_from_hyperplanes(m, x); };
  return r(a) + r(b) + r(a | b | c) + r(a | b | d) + r(c | d);
}

int ingleton_right(const Matroid& m, Mask a, Mask b, Mask c, Mask d) {
  auto r = [&](Mask x) { return rank_from_hyperplanes(m, x); };
  return r(a | b) + r(a | c) + r(a | d) + r(b | c) + r(b | d);
}

std::vector<std::vector<int>> p8_columns() {
  // Entries as integers mod 3; the -1 entries become 2.
  const int rows[4][8] = {{1, 0, 0, 0, 0, 1, 1, 2}, {0, 1, 0, 0, 1, 0, 1, 1}, {0, 0, 1, 0, 1, 1, 0, 1}, {0, 0, 0, 1, 2, 1, 1, 0}};
  std::vector<std::vector<int>> columns(8, std::vector<int>(4));
  for (int c = 0; c < 8; ++c) {
    for (int r = 0; r < 4; ++r) columns[c][r] = rows[r][c];
  }
  return columns;
}

std::vector<std::vector<int>> matrix_columns(const RepresentationMatrix& matrix) {
  std::vector<std::vector<int>> columns(matrix.cols, std::vector<int>(matrix.rows));
  for (int c = 0; c < matrix.cols; ++c) {
    for (int r = 0; r < matrix.rows; ++r) columns[c][r] = matrix.at(r, c);
  }
  return columns;
}

bool reproduces_rank(const Matroid& m, const RepresentationMatrix& matrix) {
  const Arith f{matrix.q};
  const auto columns = matrix_columns(matrix);
  for (Mask a = 0; a <= m.ground(); ++a) {
    if (column_rank(f, matrix.rows, columns, a) != rank_from_hyperplanes(m, a)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("classification agrees with counts from the closure oracle") {
  for (const auto& level : catalogue(6)) {
    for (const Matroid& m : level) {
      const int n = m.size();
      const int r = m.rank();
      std::vector<int> rank(std::size_t{1} << n);
      for (Mask a = 0; a <= m.ground(); ++a) rank[a] = rank_from_hyperplanes(m, a);
      std::uint64_t bases = 0, independent = 0, circuits = 0, flats = 0;
      int min_circuit = 0;
      int loops = 0, coloops = 0;
      for (Mask a = 0; a <= m.ground(); ++a) {
        const int size = popcount(a);
        if (rank[a] == size) ++independent;
        if (rank[a] == size && size == r) ++bases;
        bool minimal_dependent = rank[a] < size;
        for_each_element(a, [&](int e) { minimal_dependent = minimal_dependent && rank[a & ~bit(e)] == size - 1; });
        if (minimal_dependent) {
          ++circuits;
          if (min_circuit == 0 || size < min_circuit) min_circuit = size;
        }
        bool closed = true;
        for_each_element(m.ground() & ~a, [&](int e) { closed = closed && rank[a | bit(e)] > rank[a]; });
        flats += closed;
      }
      for (int e = 0; e < n; ++e) {
        loops += rank[bit(e)] == 0;
        coloops += rank[m.ground() & ~bit(e)] < r;
      }
      const PropertyFlags p = classify(m);
      REQUIRE(p.bases == bases);
      REQUIRE(p.independent_sets == independent);
      REQUIRE(p.circuits == circuits);
      REQUIRE(p.flats == flats);
      REQUIRE(p.hyperplanes == m.hyperplanes().size());
      REQUIRE(p.cocircuits == p.hyperplanes);
      REQUIRE(p.min_circuit_size == min_circuit);
      REQUIRE(p.loops == loops);
      REQUIRE(p.coloops == coloops);
      REQUIRE(p.simple == (loops == 0 && (min_circuit == 0 || min_circuit >= 3)));
      REQUIRE(p.paving == (min_circuit == 0 || min_circuit >= r));
      REQUIRE(p.uniform == (bases == binomial(n, r)));
      if (p.uniform) REQUIRE(p.sparse_paving);
      if (p.sparse_paving) REQUIRE(p.paving);
      REQUIRE(classify(dual(m)).sparse_paving == p.sparse_paving);
      REQUIRE(classify(dual(m)).simple == p.cosimple);
    }
  }
}

TEST_CASE("named matroids over small fields") {
  CHECK(representable(named::fano(), 2).has_value());
  CHECK_FALSE(representable(named::fano(), 3).has_value());
  CHECK(representable(named::fano(), 4).has_value());
  CHECK(representable(named::p8(), 3).has_value());
  CHECK(representable(named::p8(), 5).has_value());
  CHECK_FALSE(representable(named::p8(), 2).has_value());
  CHECK_FALSE(representable(uniform_matroid(2, 4), 2).has_value());
  CHECK(representable(uniform_matroid(2, 4), 3).has_value());
  CHECK(representable(named::r8(), 3).has_value());
  for (const Matroid& m : {named::p1(), named::p2_prime(), named::p2_double_prime(), named::p3()}) {
    for (int q = 2; q <= 5; ++q) REQUIRE_FALSE(representable(m, q).has_value());
    REQUIRE_FALSE(ingleton_violating(m).has_value());
  }
  CHECK_FALSE(ingleton_violating(named::p8()).has_value());
}

TEST_CASE("the displayed ternary matrix represents the fixture") {
  const auto table = matcat::testing::matrix_rank_table(3, 4, p8_columns());
  CHECK(Matroid::from_hyperplanes(8, hyperplanes_of(8, table)) == named::p8());
  RepresentationMatrix matrix;
  matrix.q = 3;
  matrix.rows = 4;
  matrix.cols = 8;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 8; ++c) matrix.entries.push_back(static_cast<std::uint8_t>(p8_columns()[c][r]));
  }
  CHECK(verify_representation(named::p8(), matrix));
  CHECK_FALSE(verify_representation(named::p1(), matrix));
}

TEST_CASE("returned matrices reproduce the rank function") {
  for (int q = 2; q <= 5; ++q) {
    for (const auto& level : catalogue(7)) {
      for (const Matroid& m : level) {
        const auto matrix = representable(m, q);
        if (!matrix) continue;
        REQUIRE(matrix->q == q);
        REQUIRE(matrix->cols == m.size());
        REQUIRE(reproduces_rank(m, *matrix));
      }
    }
  }
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto mat = matcat::testing::random_matrix(rng, n);
    const auto table = matcat::testing::matrix_rank_table(mat.p, mat.rows, mat.columns);
    const Matroid m = Matroid::from_hyperplanes(n, hyperplanes_of(n, table));
    const auto found = representable(m, mat.p);
    REQUIRE(found.has_value());
    REQUIRE(reproduces_rank(m, *found));
  }
}

TEST_CASE("representability agrees with exhaustive matrices") {
  const std::vector<std::pair<int, int>> ranges = {{2, 6}, {3, 6}, {4, 5}, {5, 5}};
  for (const auto& [q, max_n] : ranges) {
    for (int n = 0; n <= max_n; ++n) {
      const std::set<Matroid> expected = representable_classes(q, n);
      std::size_t found = 0;
      for (const Matroid& m : catalogue(6)[n]) {
        const bool yes = representable(m, q).has_value();
        REQUIRE(yes == (expected.count(m) == 1));
        found += yes;
      }
      REQUIRE(found == expected.size());
    }
  }
}

TEST_CASE("excluded minors") {
  const auto& levels = catalogue(7);
  const auto binary = excluded_minors(levels, 2);
  REQUIRE(binary.size() == 1);
  CHECK(binary[0] == canonical_form(uniform_matroid(2, 4)));

  const auto ternary = excluded_minors(levels, 3);
  CHECK(ternary.size() == 4);
  std::set<Matroid> ternary_set(ternary.begin(), ternary.end());
  CHECK(ternary_set.count(canonical_form(uniform_matroid(2, 5))) == 1);
  CHECK(ternary_set.count(canonical_form(named::fano())) == 1);

  std::map<int, int> quinary_seven;
  for (const Matroid& m : excluded_minors(levels, 5)) {
    if (m.size() == 7) ++quinary_seven[m.rank()];
  }
  CHECK(quinary_seven == std::map<int, int>{{2, 1}, {3, 5}, {4, 5}, {5, 1}});
  std::set<Matroid> quinary;
  for (const Matroid& m : excluded_minors(levels, 5)) quinary.insert(m);
  CHECK(quinary.count(canonical_form(uniform_matroid(2, 7))) == 1);

  // Every excluded minor is minimal: all single-element minors are representable.
  for (const Matroid& m : ternary) {
    REQUIRE_FALSE(representable(m, 3).has_value());
    for (int e = 0; e < m.size(); ++e) {
      REQUIRE(representable(delete_element(m, e), 3).has_value());
      REQUIRE(representable(contract_element(m, e), 3).has_value());
    }
  }
}

TEST_CASE("representability table inherits through minors") {
  const auto& levels = catalogue(7);
  for (int q : {2, 3}) {
    const auto table = representability_table(levels, q);
    for (std::size_t n = 0; n < levels.size(); ++n) {
      for (std::size_t i = 0; i < levels[n].size(); ++i) {
        REQUIRE(table[n][i] == representable(levels[n][i], q).has_value());
      }
    }
  }
}

TEST_CASE("Ingleton witnesses and non-violation below eight points") {
  for (const Matroid& m : {named::ag32_prime(), named::f8(), named::vamos()}) {
    const auto w = ingleton_violating(m);
    REQUIRE(w.has_value());
    REQUIRE(w->left == ingleton_left(m, w->a, w->b, w->c, w->d));
    REQUIRE(w->right == ingleton_right(m, w->a, w->b, w->c, w->d));
    REQUIRE(w->left > w->right);
  }
  CHECK_FALSE(ingleton_violating(named::ag32()).has_value());
  CHECK_FALSE(ingleton_violating(named::r8()).has_value());
  for (const auto& level : catalogue(7)) {
    for (const Matroid& m : level) REQUIRE_FALSE(ingleton_violating(m).has_value());
  }
  std::mt19937_64 rng(23);
  const Matroid v = named::vamos();
  const RankOracle oracle(v);
  for (int trial = 0; trial < 2000; ++trial) {
    const Mask a = rng() & 0xff, b = rng() & 0xff, c = rng() & 0xff, d = rng() & 0xff;
    const IngletonWitness s = ingleton_sides(oracle, a, b, c, d);
    REQUIRE(s.left == ingleton_left(v, a, b, c, d));
    REQUIRE(s.right == ingleton_right(v, a, b, c, d));
  }
}

TEST_CASE("Ingleton minor test") {
  std::vector<Matroid> violators = {canonical_form(named::vamos())};
  CHECK(ingleton_violating_by_minors(add_loop(named::vamos()), violators));
  CHECK(ingleton_violating_by_minors(add_coloop(named::vamos()), violators));
  CHECK_FALSE(ingleton_violating_by_minors(add_loop(named::p8()), violators));
}

TEST_CASE("base orderability against exchange brute force") {
  for (const auto& level : catalogue(6)) {
    for (const Matroid& m : level) {
      const Orderability brute = brute_orderability(m);
      REQUIRE(base_orderable(m) == brute.base_orderable);
      REQUIRE(strongly_base_orderable(m) == brute.strongly);
    }
  }
  for (int n = 1; n <= 7; ++n) {
    for (int r = 0; r <= n; ++r) {
      REQUIRE(base_orderable(uniform_matroid(r, n)));
      REQUIRE(strongly_base_orderable(uniform_matroid(r, n)));
    }
  }
}

TEST_CASE("transversality against generated set systems") {
  for (int n = 0; n <= 6; ++n) {
    for (int r = 0; r <= n; ++r) {
      // Ranks 5 and 6 on six points are covered by the count table below.
      if (n == 6 && r >= 5) continue;
      const std::set<Matroid> expected = transversal_classes(n, r);
      for (const Matroid& m : catalogue(6)[n]) {
        if (m.rank() != r) continue;
        const bool yes = is_transversal(m);
        REQUIRE(yes == (expected.count(m) == 1));
        const auto presentation = transversal_presentation(m);
        REQUIRE(presentation.has_value() == yes);
        if (presentation) {
          REQUIRE(static_cast<int>(presentation->size()) == r);
          const auto table = matchable_sets(n, *presentation);
          for (Mask a = 0; a <= m.ground(); ++a) REQUIRE(table[a] == (rank_from_hyperplanes(m, a) == popcount(a)));
        }
      }
    }
  }
}

TEST_CASE("orderability and transversal counts by size and rank") {
  // all / base-orderable / strongly base-orderable / transversal for ranks 2..6.
  const std::map<std::pair<int, int>, std::array<int, 4>> cells = {
      {{2, 2}, {1, 1, 1, 1}},     {{3, 2}, {3, 3, 3, 3}},       {{4, 2}, {7, 7, 7, 7}},
      {{5, 2}, {13, 13, 13, 13}}, {{6, 2}, {23, 23, 23, 22}},   {{7, 2}, {37, 37, 37, 34}},
      {{3, 3}, {1, 1, 1, 1}},     {{4, 3}, {4, 4, 4, 4}},       {{5, 3}, {13, 13, 13, 13}},
      {{6, 3}, {38, 37, 37, 37}}, {{7, 3}, {108, 101, 101, 92}}, {{4, 4}, {1, 1, 1, 1}},
      {{5, 4}, {5, 5, 5, 5}},     {{6, 4}, {23, 23, 23, 23}},   {{7, 4}, {108, 101, 101, 100}},
      {{5, 5}, {1, 1, 1, 1}},     {{6, 5}, {6, 6, 6, 6}},       {{7, 5}, {37, 37, 37, 37}},
      {{6, 6}, {1, 1, 1, 1}},     {{7, 6}, {7, 7, 7, 7}},
  };
  std::map<std::pair<int, int>, std::array<int, 4>> seen;
  for (const auto& level : catalogue(7)) {
    for (const Matroid& m : level) {
      const bool bo = base_orderable(m);
      const bool sbo = strongly_base_orderable(m);
      const bool t = is_transversal(m);
      if (t) REQUIRE(sbo);
      if (sbo) REQUIRE(bo);
      if (m.rank() <= 1 || m.rank() >= 7) REQUIRE(t);
      if (m.rank() < 2 || m.rank() > 6) continue;
      auto& cell = seen[{m.size(), m.rank()}];
      cell[0] += 1;
      cell[1] += bo;
      cell[2] += sbo;
      cell[3] += t;
    }
  }
  CHECK(seen == cells);
}

TEST_CASE("cyclic flats") {
  CHECK(cyclic_flats(free_matroid(3)) == std::vector<Mask>{0});
  CHECK(cyclic_flats(uniform_matroid(2, 4)) == std::vector<Mask>{0, full_mask(4)});
  for (const auto& level : catalogue(6)) {
    for (const Matroid& m : level) {
      for (Mask z : cyclic_flats(m)) {
        REQUIRE(matcat::testing::closure_from_hyperplanes(m, z) == z);
        for_each_element(z, [&](int e) { REQUIRE(rank_from_hyperplanes(m, z & ~bit(e)) == rank_from_hyperplanes(m, z)); });
      }
    }
  }
}
