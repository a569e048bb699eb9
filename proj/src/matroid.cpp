#include "matcat/matroid.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "matcat/errors.hpp"

namespace matcat {

namespace {

void check_ground_size(int n) {
  if (n < 0 || n > kMaxGround) {
    throw std::invalid_argument("ground set size " + std::to_string(n) + " outside 0.." +
                                std::to_string(kMaxGround));
  }
}

/// Spreads the low bits of `compact` over the set bits of `positions`.
Mask expand(Mask compact, Mask positions) {
  Mask out = 0;
  int i = 0;
  for_each_element(positions, [&](int e) {
    if (compact & bit(i)) out |= bit(e);
    ++i;
  });
  return out;
}

}  // namespace

std::string hyperplane_axiom_violation(int n, const std::vector<Mask>& hyps) {
  const Mask ground = full_mask(n);
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (hyps[i] & ~ground) return "hyperplane " + to_string(hyps[i]) + " leaves the ground set";
    if (hyps[i] == ground) return "the ground set itself is listed as a hyperplane";
    if (i > 0 && hyps[i] <= hyps[i - 1]) return "hyperplane list is not strictly increasing";
  }
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    for (std::size_t j = 0; j < hyps.size(); ++j) {
      if (i != j && contains(hyps[j], hyps[i])) {
        return "not an antichain: " + to_string(hyps[i]) + " inside " + to_string(hyps[j]);
      }
    }
  }
  // covered[S]: some hyperplane contains S (superset-OR transform).
  std::vector<char> covered(std::size_t{1} << n, 0);
  for (Mask h : hyps) covered[h] = 1;
  for (int i = 0; i < n; ++i) {
    for (Mask s = 0; s <= ground; ++s) {
      if (!(s & bit(i)) && covered[s | bit(i)]) covered[s] = 1;
    }
  }
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    for (std::size_t j = i + 1; j < hyps.size(); ++j) {
      const Mask meet = hyps[i] & hyps[j];
      const Mask outside = ground & ~(hyps[i] | hyps[j]);
      for (int e = 0; e < n; ++e) {
        if ((outside & bit(e)) && !covered[meet | bit(e)]) {
          return "weak elimination fails for " + to_string(hyps[i]) + ", " + to_string(hyps[j]) +
                 " and element " + std::to_string(e);
        }
      }
    }
  }
  return {};
}

Matroid Matroid::from_hyperplanes(int n, std::vector<Mask> hyperplanes) {
  check_ground_size(n);
  std::sort(hyperplanes.begin(), hyperplanes.end());
  if (auto why = hyperplane_axiom_violation(n, hyperplanes); !why.empty()) {
    throw AxiomViolation(why);
  }
  if (hyperplanes.empty()) return Matroid(n, 0, {});
  Matroid provisional(n, 0, std::move(hyperplanes));
  const RankOracle oracle(provisional);
  provisional.rank_ = oracle.rank();
  return provisional;
}

Matroid Matroid::from_rank_table(int n, std::span<const std::uint8_t> rank) {
  check_ground_size(n);
  const Mask ground = full_mask(n);
  const int r = rank[ground];
  std::vector<Mask> hyps;
  if (r > 0) {
    for (Mask a = 0; a < ground; ++a) {
      if (rank[a] != r - 1) continue;
      bool closed = true;
      for (int e = 0; e < n && closed; ++e) {
        if (!(a & bit(e)) && rank[a | bit(e)] == rank[a]) closed = false;
      }
      if (closed) hyps.push_back(a);
    }
  }
  return Matroid(n, r, std::move(hyps));
}

Matroid Matroid::trusted(int n, int rank, std::vector<Mask> hyperplanes) {
  std::sort(hyperplanes.begin(), hyperplanes.end());
  return Matroid(n, rank, std::move(hyperplanes));
}

RankOracle::RankOracle(const Matroid& m) : n_(m.size()) {
  const std::size_t count = std::size_t{1} << n_;
  const Mask ground = m.ground();
  closure_.assign(count, ground);
  for (Mask h : m.hyperplanes()) closure_[h] = h;
  // closure(S) = intersection of the hyperplanes containing S.
  for (int i = 0; i < n_; ++i) {
    for (Mask s = 0; s < count; ++s) {
      if (!(s & bit(i))) closure_[s] &= closure_[s | bit(i)];
    }
  }
  rank_.assign(count, 0);
  for (Mask s = 1; s < count; ++s) {
    const int e = lowest(s);
    const Mask rest = s & (s - 1);
    rank_[s] = static_cast<std::uint8_t>(rank_[rest] + ((closure_[rest] & bit(e)) ? 0 : 1));
  }
}

std::size_t FlatsByRank::count() const {
  std::size_t total = 0;
  for (const auto& level : levels) total += level.size();
  return total;
}

std::vector<Mask> FlatsByRank::all() const {
  std::vector<Mask> out;
  for (const auto& level : levels) out.insert(out.end(), level.begin(), level.end());
  return out;
}

FlatsByRank flats(const Matroid& m) {
  const int n = m.size();
  const Mask ground = m.ground();
  std::vector<char> seen(std::size_t{1} << n, 0);
  std::vector<Mask> found{ground};
  seen[ground] = 1;
  for (Mask h : m.hyperplanes()) {
    if (!seen[h]) {
      seen[h] = 1;
      found.push_back(h);
    }
  }
  // Every flat is an intersection of hyperplanes, so closing under
  // intersection with single hyperplanes reaches all of them.
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (Mask h : m.hyperplanes()) {
      const Mask meet = found[i] & h;
      if (!seen[meet]) {
        seen[meet] = 1;
        found.push_back(meet);
      }
    }
  }
  const RankOracle oracle(m);
  FlatsByRank result;
  result.levels.resize(m.rank() + 1);
  for (Mask f : found) result.levels[oracle.rank(f)].push_back(f);
  for (auto& level : result.levels) std::sort(level.begin(), level.end());
  return result;
}

Mask closure(const Matroid& m, Mask a) {
  Mask out = m.ground();
  for (Mask h : m.hyperplanes()) {
    if (contains(h, a)) out &= h;
  }
  return out;
}

int rank_of(const Matroid& m, Mask a) {
  Mask independent = 0;
  Mask span = closure(m, 0);
  int r = 0;
  for_each_element(a, [&](int e) {
    if (!(span & bit(e))) {
      independent |= bit(e);
      span = closure(m, independent);
      ++r;
    }
  });
  return r;
}

std::vector<Mask> circuits(const Matroid& m) {
  const RankOracle oracle(m);
  std::vector<Mask> out;
  const Mask ground = m.ground();
  for (Mask a = 1; a <= ground && a != 0; ++a) {
    const int size = popcount(a);
    if (oracle.rank(a) != size - 1) continue;
    bool minimal = true;
    for_each_element(a, [&](int e) {
      if (oracle.rank(a & ~bit(e)) != size - 1) minimal = false;
    });
    if (minimal) out.push_back(a);
  }
  return out;
}

std::vector<Mask> cocircuits(const Matroid& m) {
  std::vector<Mask> out;
  out.reserve(m.hyperplanes().size());
  for (Mask h : m.hyperplanes()) out.push_back(m.ground() & ~h);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mask> bases(const Matroid& m) {
  const RankOracle oracle(m);
  std::vector<Mask> out;
  for (Mask a : k_subsets(m.size(), m.rank())) {
    if (oracle.is_independent(a)) out.push_back(a);
  }
  return out;
}

std::vector<Mask> independent_sets(const Matroid& m) {
  const RankOracle oracle(m);
  std::vector<Mask> out;
  for (Mask a = 0; a <= m.ground(); ++a) {
    if (oracle.is_independent(a)) out.push_back(a);
    if (a == m.ground()) break;
  }
  return out;
}

std::vector<Mask> circuit_hyperplanes(const Matroid& m) {
  std::vector<Mask> out;
  if (m.rank() == 0) return out;
  const RankOracle oracle(m);
  for (Mask h : m.hyperplanes()) {
    if (popcount(h) != m.rank()) continue;
    bool all_independent = true;
    for_each_element(h, [&](int e) {
      if (!oracle.is_independent(h & ~bit(e))) all_independent = false;
    });
    if (all_independent) out.push_back(h);
  }
  return out;
}

Matroid dual(const Matroid& m) {
  std::vector<Mask> hyps;
  for (Mask c : circuits(m)) hyps.push_back(m.ground() & ~c);
  return Matroid::trusted(m.size(), m.size() - m.rank(), std::move(hyps));
}

Matroid restrict_to(const Matroid& m, Mask keep) {
  const RankOracle oracle(m);
  const int k = popcount(keep);
  std::vector<std::uint8_t> table(std::size_t{1} << k);
  for (Mask a = 0; a < table.size(); ++a) table[a] = static_cast<std::uint8_t>(oracle.rank(expand(a, keep)));
  return Matroid::from_rank_table(k, table);
}

Matroid delete_element(const Matroid& m, int e) {
  if (e < 0 || e >= m.size()) throw std::out_of_range("element out of range");
  return restrict_to(m, m.ground() & ~bit(e));
}

Matroid contract_element(const Matroid& m, int e) {
  if (e < 0 || e >= m.size()) throw std::out_of_range("element out of range");
  const RankOracle oracle(m);
  const Mask keep = m.ground() & ~bit(e);
  const int base = oracle.rank(bit(e));
  std::vector<std::uint8_t> table(std::size_t{1} << (m.size() - 1));
  for (Mask a = 0; a < table.size(); ++a) {
    table[a] = static_cast<std::uint8_t>(oracle.rank(expand(a, keep) | bit(e)) - base);
  }
  return Matroid::from_rank_table(m.size() - 1, table);
}

Mask loops(const Matroid& m) { return closure(m, 0); }

Mask coloops(const Matroid& m) {
  Mask out = 0;
  for (Mask h : m.hyperplanes()) {
    const Mask rest = m.ground() & ~h;
    if (popcount(rest) == 1) out |= rest;
  }
  return out;
}

std::vector<Mask> parallel_classes(const Matroid& m) {
  const Mask loop_set = loops(m);
  std::vector<Mask> classes;
  Mask seen = loop_set;
  for (int e = 0; e < m.size(); ++e) {
    if (seen & bit(e)) continue;
    const Mask cls = closure(m, bit(e)) & ~loop_set;
    classes.push_back(cls);
    seen |= cls;
  }
  return classes;
}

std::vector<Mask> series_classes(const Matroid& m) { return parallel_classes(dual(m)); }

Matroid simplify(const Matroid& m) {
  Mask keep = 0;
  for (Mask cls : parallel_classes(m)) keep |= bit(lowest(cls));
  return restrict_to(m, keep);
}

bool is_simple(const Matroid& m) {
  if (loops(m) != 0) return false;
  for (Mask cls : parallel_classes(m)) {
    if (popcount(cls) > 1) return false;
  }
  return true;
}

Matroid relax(const Matroid& m, Mask h) {
  const auto& hyps = m.hyperplanes();
  const bool is_hyperplane = std::binary_search(hyps.begin(), hyps.end(), h);
  bool is_circuit = is_hyperplane && popcount(h) == m.rank() && m.rank() > 0;
  if (is_circuit) {
    for_each_element(h, [&](int e) {
      if (rank_of(m, h & ~bit(e)) != m.rank() - 1) is_circuit = false;
    });
  }
  if (!is_circuit) throw NotCircuitHyperplane(to_string(h) + " is not a circuit-hyperplane");
  std::vector<Mask> out;
  out.reserve(hyps.size() + popcount(h));
  for (Mask x : hyps) {
    if (x != h) out.push_back(x);
  }
  for_each_element(h, [&](int e) { out.push_back(h & ~bit(e)); });
  return Matroid::trusted(m.size(), m.rank(), std::move(out));
}

Matroid truncate(const Matroid& m) {
  if (m.rank() == 0) throw RankZero("cannot truncate a rank-0 matroid");
  if (m.rank() == 1) return Matroid::trusted(m.size(), 0, {});
  auto levels = flats(m).levels;
  return Matroid::trusted(m.size(), m.rank() - 1, std::move(levels[m.rank() - 2]));
}

int connectivity(const Matroid& m) {
  const RankOracle oracle(m);
  const Mask ground = m.ground();
  const int n = m.size();
  const int r = m.rank();
  int best = kInfiniteConnectivity;
  for (Mask x = 1; x < ground; ++x) {
    const int lambda = oracle.rank(x) + oracle.rank(ground & ~x) - r;
    const int smaller_side = std::min(popcount(x), n - popcount(x));
    if (lambda + 1 <= smaller_side) best = std::min(best, lambda + 1);
  }
  return best;
}

std::uint64_t RankPolynomial::evaluate(std::uint64_t x, std::uint64_t y) const {
  std::uint64_t total = 0;
  std::uint64_t xp = 1;
  for (int i = 0; i <= x_degree; ++i) {
    std::uint64_t yp = 1;
    for (int j = 0; j <= y_degree; ++j) {
      total += at(i, j) * xp * yp;
      yp *= y;
    }
    xp *= x;
  }
  return total;
}

RankPolynomial rank_polynomial(const Matroid& m) {
  const RankOracle oracle(m);
  RankPolynomial poly;
  poly.x_degree = m.rank();
  poly.y_degree = m.size() - m.rank();
  poly.coefficients.assign(static_cast<std::size_t>(poly.x_degree + 1) * (poly.y_degree + 1), 0);
  const Mask ground = m.ground();
  for (Mask a = 0;; ++a) {
    const int ra = oracle.rank(a);
    poly.coefficients[(m.rank() - ra) * (poly.y_degree + 1) + (popcount(a) - ra)] += 1;
    if (a == ground) break;
  }
  return poly;
}

ValidationReport validate(const Matroid& m) {
  ValidationReport report;
  auto fail = [&](std::string axiom, Mask a, Mask b, std::string message) {
    report.ok = false;
    report.axiom = std::move(axiom);
    report.first = a;
    report.second = b;
    report.message = std::move(message);
    return report;
  };
  if (m.size() < 0 || m.size() > kMaxGround) return fail("hyperplanes", 0, 0, "ground size out of range");
  if (auto why = hyperplane_axiom_violation(m.size(), m.hyperplanes()); !why.empty()) {
    return fail("hyperplanes", 0, 0, why);
  }
  const RankOracle oracle(m);
  const Mask ground = m.ground();
  const int n = m.size();
  if (oracle.rank() != m.rank()) return fail("hyperplanes", ground, 0, "stored rank disagrees with the family");
  for (Mask a = 0;; ++a) {
    const int ra = oracle.rank(a);
    if (ra < 0 || ra > popcount(a)) return fail("R1", a, 0, "rank outside [0, |A|]");
    for (int e = 0; e < n; ++e) {
      if (a & bit(e)) continue;
      const int rb = oracle.rank(a | bit(e));
      if (rb < ra || rb > ra + 1) return fail("R2", a, a | bit(e), "rank not monotone by unit steps");
      for (int f = e + 1; f < n; ++f) {
        if (a & bit(f)) continue;
        if (rb + oracle.rank(a | bit(f)) < oracle.rank(a | bit(e) | bit(f)) + ra) {
          return fail("R3", a | bit(e), a | bit(f), "local submodularity fails");
        }
      }
    }
    if (a == ground) break;
  }
  auto check_pair = [&](Mask a, Mask b) {
    return oracle.rank(a & b) + oracle.rank(a | b) <= oracle.rank(a) + oracle.rank(b);
  };
  if (n <= 9) {
    for (Mask a = 0; a <= ground; ++a) {
      for (Mask b = a; b <= ground; ++b) {
        if (!check_pair(a, b)) return fail("R3", a, b, "submodularity fails");
      }
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Mask> pick(0, ground);
    for (int i = 0; i < (1 << 18); ++i) {
      const Mask a = pick(rng);
      const Mask b = pick(rng);
      if (!check_pair(a, b)) return fail("R3", a, b, "submodularity fails");
    }
  }
  const Matroid rebuilt = Matroid::from_rank_table(n, oracle.table());
  if (rebuilt.hyperplanes() != m.hyperplanes()) {
    return fail("hyperplanes", 0, 0, "rank-(r-1) flats differ from the stored hyperplanes");
  }
  return report;
}

Matroid permute(const Matroid& m, const std::vector<int>& perm) {
  std::vector<Mask> hyps;
  hyps.reserve(m.hyperplanes().size());
  for (Mask h : m.hyperplanes()) hyps.push_back(permute_mask(h, perm));
  return Matroid::trusted(m.size(), m.rank(), std::move(hyps));
}

Matroid uniform_matroid(int rank, int n) {
  check_ground_size(n);
  if (rank < 0 || rank > n) throw std::invalid_argument("uniform matroid rank out of range");
  if (rank == 0) return Matroid::trusted(n, 0, {});
  return Matroid::trusted(n, rank, k_subsets(n, rank - 1));
}

Matroid free_matroid(int n) { return uniform_matroid(n, n); }

Matroid add_loop(const Matroid& m) {
  check_ground_size(m.size() + 1);
  std::vector<Mask> hyps;
  for (Mask h : m.hyperplanes()) hyps.push_back(h | bit(m.size()));
  return Matroid::trusted(m.size() + 1, m.rank(), std::move(hyps));
}

Matroid add_coloop(const Matroid& m) {
  check_ground_size(m.size() + 1);
  std::vector<Mask> hyps{m.ground()};
  for (Mask h : m.hyperplanes()) hyps.push_back(h | bit(m.size()));
  return Matroid::trusted(m.size() + 1, m.rank() + 1, std::move(hyps));
}

std::string describe(const Matroid& m) {
  std::ostringstream out;
  out << "M(n=" << m.size() << ", r=" << m.rank() << ":";
  for (Mask h : m.hyperplanes()) out << ' ' << to_string(h);
  out << ')';
  return out.str();
}

}  // namespace matcat
