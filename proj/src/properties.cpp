#include "matcat/properties.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "matcat/canonical.hpp"
#include "matcat/errors.hpp"

namespace matcat {

PropertyFlags classify(const Matroid& m) {
  PropertyFlags p;
  const RankOracle oracle(m);
  const int n = m.size();
  const int r = m.rank();
  const auto circs = circuits(m);
  p.circuits = circs.size();
  for (Mask c : circs) {
    const int size = popcount(c);
    if (p.min_circuit_size == 0 || size < p.min_circuit_size) p.min_circuit_size = size;
  }
  const auto cocircs = cocircuits(m);
  p.cocircuits = cocircs.size();
  int min_cocircuit = 0;
  for (Mask c : cocircs) {
    const int size = popcount(c);
    if (min_cocircuit == 0 || size < min_cocircuit) min_cocircuit = size;
  }
  p.flats = flats(m).count();
  p.hyperplanes = m.hyperplanes().size();
  const Mask ground = m.ground();
  for (Mask a = 0;; ++a) {
    if (oracle.is_independent(a)) {
      ++p.independent_sets;
      if (popcount(a) == r) ++p.bases;
    }
    if (a == ground) break;
  }
  p.circuit_hyperplanes = circuit_hyperplanes(m).size();
  p.loops = popcount(loops(m));
  p.coloops = popcount(coloops(m));
  p.simple = p.min_circuit_size == 0 || p.min_circuit_size >= 3;
  p.cosimple = min_cocircuit == 0 || min_cocircuit >= 3;
  p.paving = p.min_circuit_size == 0 || p.min_circuit_size >= r;
  p.sparse_paving = p.paving && std::all_of(m.hyperplanes().begin(), m.hyperplanes().end(), [&](Mask h) {
    const int size = popcount(h);
    return size == r - 1 || size == r;
  });
  p.uniform = p.bases == binomial(n, r);
  return p;
}

// ---------------------------------------------------------------- Ingleton

IngletonWitness ingleton_sides(const RankOracle& o, Mask a, Mask b, Mask c, Mask d) {
  IngletonWitness w{a, b, c, d, 0, 0};
  w.left = o.rank(a) + o.rank(b) + o.rank(a | b | c) + o.rank(a | b | d) + o.rank(c | d);
  w.right = o.rank(a | b) + o.rank(a | c) + o.rank(a | d) + o.rank(b | c) + o.rank(b | d);
  return w;
}

std::optional<IngletonWitness> ingleton_violating(const Matroid& m, std::uint64_t budget) {
  // Written as I(A;B) <= I(A;B|C) + I(A;B|D) + I(C;D) with every term
  // non-negative. Replacing any of A, B, C, D by its closure leaves every
  // rank term unchanged, so the search runs over flats only; comparable A, B
  // always satisfy the inequality.
  const RankOracle o(m);
  const std::vector<Mask> fl = flats(m).all();
  const std::size_t z = fl.size();
  std::uint64_t work = 0;
  std::vector<std::pair<Mask, int>> candidates;
  for (std::size_t i = 0; i < z; ++i) {
    for (std::size_t j = i + 1; j < z; ++j) {
      const Mask a = fl[i];
      const Mask b = fl[j];
      const Mask ab = a | b;
      if ((a & b) == a || (a & b) == b) continue;
      const int t = o.rank(a) + o.rank(b) - o.rank(ab);
      if (t <= 0) continue;
      candidates.clear();
      for (Mask c : fl) {
        const int cond = o.rank(a | c) + o.rank(b | c) - o.rank(ab | c) - o.rank(c);
        if (cond < t) candidates.emplace_back(c, cond);
      }
      work += z;
      if (work > budget) throw BudgetExceeded("Ingleton search budget exhausted");
      for (std::size_t x = 0; x < candidates.size(); ++x) {
        const auto [c, cc] = candidates[x];
        for (std::size_t y = x; y < candidates.size(); ++y) {
          const auto [d, cd] = candidates[y];
          if (cc + cd >= t) continue;
          const int mutual = o.rank(c) + o.rank(d) - o.rank(c | d);
          if (cc + cd + mutual < t) return ingleton_sides(o, a, b, c, d);
        }
      }
    }
  }
  return std::nullopt;
}

bool ingleton_violating_by_minors(const Matroid& m, const std::vector<Matroid>& violators) {
  for (int e = 0; e < m.size(); ++e) {
    for (const Matroid& minor : {delete_element(m, e), contract_element(m, e)}) {
      if (std::binary_search(violators.begin(), violators.end(), canonical_form(minor))) return true;
    }
  }
  return false;
}

// --------------------------------------------------------- representability

namespace {

FiniteField make_field(int q) {
  FiniteField f;
  f.q = q;
  if (q == 4) {
    // Elements a + b*w encoded as a | (b << 1); w^2 = w + 1.
    static constexpr std::uint8_t kMul[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        f.add[a][b] = static_cast<std::uint8_t>(a ^ b);
        f.mul[a][b] = kMul[a][b];
      }
    }
  } else {
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        f.add[a][b] = static_cast<std::uint8_t>((a + b) % q);
        f.mul[a][b] = static_cast<std::uint8_t>((a * b) % q);
      }
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (f.add[a][b] == 0) f.neg[a] = static_cast<std::uint8_t>(b);
      if (f.mul[a][b] == 1) f.inv[a] = static_cast<std::uint8_t>(b);
    }
  }
  return f;
}

/// Rank over GF(q) of a list of column vectors of length `rows`.
int rank_of_columns(const FiniteField& f, int rows, std::vector<std::array<std::uint8_t, kMaxGround>>& cols) {
  int rank = 0;
  const int count = static_cast<int>(cols.size());
  for (int row = 0; row < rows && rank < count; ++row) {
    int pivot = -1;
    for (int c = rank; c < count; ++c) {
      if (cols[c][row] != 0) {
        pivot = c;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(cols[rank], cols[pivot]);
    const std::uint8_t scale = f.inv[cols[rank][row]];
    for (int c = rank + 1; c < count; ++c) {
      const std::uint8_t v = cols[c][row];
      if (v == 0) continue;
      const std::uint8_t factor = f.neg[f.mul[v][scale]];
      for (int k = row; k < rows; ++k) cols[c][k] = f.add[cols[c][k]][f.mul[factor][cols[rank][k]]];
    }
    ++rank;
  }
  return rank;
}

class RepresentationSearch {
 public:
  RepresentationSearch(const Matroid& m, const RankOracle& oracle, const FiniteField& field)
      : m_(m), o_(oracle), f_(field), n_(m.size()), k_(m.rank()) {}

  std::optional<RepresentationMatrix> run() {
    RepresentationMatrix mat;
    mat.q = f_.q;
    mat.rows = k_;
    mat.cols = n_;
    mat.entries.assign(static_cast<std::size_t>(k_) * n_, 0);
    if (k_ == 0) return mat;
    // Lexicographically first basis becomes the identity block.
    Mask basis = 0;
    for (int e = 0; e < n_; ++e) {
      if (o_.is_independent(basis | bit(e))) basis |= bit(e);
    }
    basis_ = elements_of(basis);
    for (int i = 0; i < k_; ++i) mat.entries[static_cast<std::size_t>(i) * n_ + basis_[i]] = 1;
    for (int e = 0; e < n_; ++e) {
      if (!(basis & bit(e))) others_.push_back(e);
    }
    // Fundamental-circuit pattern fixes which entries are nonzero.
    const int columns = static_cast<int>(others_.size());
    std::vector<std::vector<char>> nonzero(k_, std::vector<char>(columns, 0));
    for (int i = 0; i < k_; ++i) {
      for (int j = 0; j < columns; ++j) {
        nonzero[i][j] = o_.is_basis((basis & ~bit(basis_[i])) | bit(others_[j])) ? 1 : 0;
      }
    }
    // Spanning forest of the row/column incidence gets value 1.
    std::vector<std::vector<char>> fixed(k_, std::vector<char>(columns, 0));
    std::vector<char> row_seen(k_, 0), col_seen(columns, 0);
    for (int start = 0; start < k_; ++start) {
      if (row_seen[start]) continue;
      row_seen[start] = 1;
      std::vector<std::pair<bool, int>> queue{{true, start}};
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [is_row, v] = queue[head];
        if (is_row) {
          for (int j = 0; j < columns; ++j) {
            if (nonzero[v][j] && !col_seen[j]) {
              col_seen[j] = 1;
              fixed[v][j] = 1;
              queue.emplace_back(false, j);
            }
          }
        } else {
          for (int i = 0; i < k_; ++i) {
            if (nonzero[i][v] && !row_seen[i]) {
              row_seen[i] = 1;
              fixed[i][v] = 1;
              queue.emplace_back(true, i);
            }
          }
        }
      }
    }
    for (int j = 0; j < columns; ++j) {
      for (int i = 0; i < k_; ++i) {
        if (!nonzero[i][j]) continue;
        if (fixed[i][j]) {
          mat.entries[static_cast<std::size_t>(i) * n_ + others_[j]] = 1;
        } else {
          free_.push_back({i, j});
        }
      }
    }
    // Bases to test once column j is complete: k-sets with at least two
    // non-basis columns, the last of which is j. Sets with one non-basis
    // column are settled by the pattern.
    checks_.assign(columns, {});
    Mask seen_columns = basis;
    for (int j = 0; j < columns; ++j) {
      seen_columns |= bit(others_[j]);
      for (Mask s : k_subsets(n_, k_)) {
        if ((s & seen_columns) != s || !(s & bit(others_[j]))) continue;
        if (popcount(s & ~basis) < 2) continue;
        checks_[j].push_back(s);
      }
    }
    mat_ = std::move(mat);
    if (!assign(0)) return std::nullopt;
    return mat_;
  }

 private:
  struct Cell {
    int row;
    int column;
  };

  bool column_ok(int j) {
    for (Mask s : checks_[j]) {
      cols_.clear();
      for_each_element(s, [&](int e) {
        std::array<std::uint8_t, kMaxGround> v{};
        for (int i = 0; i < k_; ++i) v[i] = mat_.entries[static_cast<std::size_t>(i) * n_ + e];
        cols_.push_back(v);
      });
      const bool independent = rank_of_columns(f_, k_, cols_) == k_;
      if (independent != o_.is_basis(s)) return false;
    }
    return true;
  }

  bool complete_columns(int from_column, int to_column) {
    for (int j = from_column; j < to_column; ++j) {
      if (!column_ok(j)) return false;
    }
    return true;
  }

  bool assign(std::size_t index) {
    if (index == free_.size()) {
      const int last_done = free_.empty() ? -1 : free_.back().column;
      return complete_columns(last_done + 1, static_cast<int>(others_.size()));
    }
    const Cell cell = free_[index];
    // Columns without free cells before this one are already determined.
    const int previous = index == 0 ? -1 : free_[index - 1].column;
    if (cell.column != previous && !complete_columns(previous + 1, cell.column)) return false;
    std::uint8_t& entry = mat_.entries[static_cast<std::size_t>(cell.row) * n_ + others_[cell.column]];
    const bool closes_column = index + 1 == free_.size() || free_[index + 1].column != cell.column;
    for (int v = 1; v < f_.q; ++v) {
      entry = static_cast<std::uint8_t>(v);
      if (closes_column && !column_ok(cell.column)) continue;
      if (assign(index + 1)) return true;
    }
    entry = 0;
    return false;
  }

  const Matroid& m_;
  const RankOracle& o_;
  const FiniteField& f_;
  int n_;
  int k_;
  std::vector<int> basis_;
  std::vector<int> others_;
  std::vector<Cell> free_;
  std::vector<std::vector<Mask>> checks_;
  std::vector<std::array<std::uint8_t, kMaxGround>> cols_;
  RepresentationMatrix mat_;
};

/// Turns a representation of M* with an identity block into one of M.
RepresentationMatrix dual_representation(const RepresentationMatrix& star, const FiniteField& f) {
  const int n = star.cols;
  std::vector<int> identity_col(star.rows, -1);
  Mask basis = 0;
  for (int i = 0; i < star.rows; ++i) {
    for (int c = 0; c < n; ++c) {
      if (basis & bit(c)) continue;
      bool unit = star.at(i, c) == 1;
      for (int r = 0; r < star.rows && unit; ++r) unit = r == i || star.at(r, c) == 0;
      if (unit) {
        identity_col[i] = c;
        basis |= bit(c);
        break;
      }
    }
  }
  std::vector<int> rest;
  for (int c = 0; c < n; ++c) {
    if (!(basis & bit(c))) rest.push_back(c);
  }
  RepresentationMatrix out;
  out.q = star.q;
  out.rows = static_cast<int>(rest.size());
  out.cols = n;
  out.entries.assign(static_cast<std::size_t>(out.rows) * n, 0);
  for (int j = 0; j < out.rows; ++j) {
    out.entries[static_cast<std::size_t>(j) * n + rest[j]] = 1;
    for (int i = 0; i < star.rows; ++i) {
      out.entries[static_cast<std::size_t>(j) * n + identity_col[i]] = f.neg[star.at(i, rest[j])];
    }
  }
  return out;
}

}  // namespace

const FiniteField& FiniteField::get(int q) {
  static const FiniteField fields[4] = {make_field(2), make_field(3), make_field(4), make_field(5)};
  if (q < 2 || q > 5) throw std::invalid_argument("field order must be 2, 3, 4 or 5");
  return fields[q - 2];
}

int RepresentationMatrix::column_rank(Mask columns) const {
  const FiniteField& f = FiniteField::get(q);
  std::vector<std::array<std::uint8_t, kMaxGround>> cols;
  for_each_element(columns, [&](int c) {
    std::array<std::uint8_t, kMaxGround> v{};
    for (int r = 0; r < rows; ++r) v[r] = at(r, c);
    cols.push_back(v);
  });
  return rank_of_columns(f, rows, cols);
}

bool verify_representation(const Matroid& m, const RepresentationMatrix& matrix) {
  if (matrix.cols != m.size()) return false;
  const RankOracle oracle(m);
  const Mask ground = m.ground();
  for (Mask a = 0;; ++a) {
    if (matrix.column_rank(a) != oracle.rank(a)) return false;
    if (a == ground) break;
  }
  return true;
}

std::optional<RepresentationMatrix> representable(const Matroid& m, int q) {
  const FiniteField& f = FiniteField::get(q);
  std::optional<RepresentationMatrix> found;
  if (2 * m.rank() > m.size()) {
    const Matroid d = dual(m);
    const RankOracle oracle(d);
    RepresentationSearch search(d, oracle, f);
    if (auto star = search.run()) found = dual_representation(*star, f);
  } else {
    const RankOracle oracle(m);
    RepresentationSearch search(m, oracle, f);
    found = search.run();
  }
  if (found && !verify_representation(m, *found)) {
    throw Error("representation search returned a matrix that fails verification for " + describe(m));
  }
  return found;
}

namespace {

/// False when some single-element deletion or contraction is not representable.
bool minors_representable(const Matroid& m, const std::vector<Matroid>& smaller, const std::vector<bool>& flags) {
  for (int e = 0; e < m.size(); ++e) {
    for (const Matroid& minor : {delete_element(m, e), contract_element(m, e)}) {
      const Matroid key = canonical_form(minor);
      const auto it = std::lower_bound(smaller.begin(), smaller.end(), key);
      if (it == smaller.end() || !(*it == key)) throw Error("minor missing from catalogue level");
      if (!flags[it - smaller.begin()]) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::vector<bool>> representability_table(const std::vector<std::vector<Matroid>>& levels, int q,
                                                      bool parallel) {
  std::vector<std::vector<bool>> table;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& level = levels[k];
    std::vector<char> flags(level.size(), 1);
    if (k > 0) {
      const auto& prev = table.back();
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
      for (std::size_t i = 0; i < level.size(); ++i) {
        flags[i] = minors_representable(level[i], levels[k - 1], prev) && representable(level[i], q).has_value();
      }
    }
    table.emplace_back(flags.begin(), flags.end());
  }
  return table;
}

std::vector<Matroid> excluded_minors(const std::vector<std::vector<Matroid>>& levels, int q) {
  const auto table = representability_table(levels, q);
  std::vector<Matroid> out;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    for (std::size_t i = 0; i < levels[k].size(); ++i) {
      if (table[k][i]) continue;
      if (minors_representable(levels[k][i], levels[k - 1], table[k - 1])) out.push_back(levels[k][i]);
    }
  }
  return out;
}

// ------------------------------------------------------------- orderability

namespace {

struct BasisPairs {
  std::vector<Mask> bases;
  RankOracle oracle;

  explicit BasisPairs(const Matroid& m) : bases(matcat::bases(m)), oracle(m) {}

  /// Calls check(a_side, b_side, adjacency) for each unordered pair of bases
  /// differing in at least two elements; stops when check returns false.
  bool all_pairs(const std::function<bool(const std::vector<int>&, const std::vector<int>&, Mask, Mask,
                                          const std::vector<Mask>&)>& check) const {
    std::vector<Mask> adjacency;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      for (std::size_t j = i + 1; j < bases.size(); ++j) {
        const Mask a = bases[i];
        const Mask b = bases[j];
        const Mask only_a = a & ~b;
        const Mask only_b = b & ~a;
        if (popcount(only_a) < 2) continue;
        const std::vector<int> xs = elements_of(only_a);
        const std::vector<int> ys = elements_of(only_b);
        adjacency.assign(xs.size(), 0);
        for (std::size_t x = 0; x < xs.size(); ++x) {
          for (std::size_t y = 0; y < ys.size(); ++y) {
            const Mask a2 = (a & ~bit(xs[x])) | bit(ys[y]);
            const Mask b2 = (b & ~bit(ys[y])) | bit(xs[x]);
            if (oracle.is_basis(a2) && oracle.is_basis(b2)) adjacency[x] |= bit(static_cast<int>(y));
          }
        }
        if (!check(xs, ys, a, b, adjacency)) return false;
      }
    }
    return true;
  }
};

bool has_perfect_matching(const std::vector<Mask>& adjacency) {
  // Reachable sets of matched right vertices after each left vertex.
  std::vector<Mask> layer{0};
  std::vector<char> seen;
  for (Mask row : adjacency) {
    std::vector<Mask> next;
    seen.assign(std::size_t{1} << adjacency.size(), 0);
    for (Mask used : layer) {
      for_each_element(row & ~used, [&](int y) {
        const Mask u = used | bit(y);
        if (!seen[u]) {
          seen[u] = 1;
          next.push_back(u);
        }
      });
    }
    if (next.empty()) return false;
    layer = std::move(next);
  }
  return true;
}

}  // namespace

bool base_orderable(const Matroid& m) {
  const BasisPairs pairs(m);
  return pairs.all_pairs([](const std::vector<int>&, const std::vector<int>&, Mask, Mask,
                            const std::vector<Mask>& adjacency) { return has_perfect_matching(adjacency); });
}

bool strongly_base_orderable(const Matroid& m) {
  const BasisPairs pairs(m);
  const RankOracle& o = pairs.oracle;
  return pairs.all_pairs([&](const std::vector<int>& xs, const std::vector<int>& ys, Mask a, Mask b,
                             const std::vector<Mask>& adjacency) {
    const int size = static_cast<int>(xs.size());
    std::vector<int> image(size, -1);
    // Every exchange X -> image(X) must leave both sides bases.
    auto passes = [&]() {
      for (Mask sub = 1; sub < bit(size); ++sub) {
        if (popcount(sub) < 2) continue;
        Mask from = 0;
        Mask to = 0;
        for_each_element(sub, [&](int x) {
          from |= bit(xs[x]);
          to |= bit(ys[image[x]]);
        });
        if (!o.is_basis((a & ~from) | to) || !o.is_basis((b & ~to) | from)) return false;
      }
      return true;
    };
    std::function<bool(int, Mask)> match = [&](int x, Mask used) {
      if (x == size) return passes();
      bool ok = false;
      for_each_element(adjacency[x] & ~used, [&](int y) {
        if (ok) return;
        image[x] = y;
        ok = match(x + 1, used | bit(y));
      });
      return ok;
    };
    return match(0, 0);
  });
}

// ------------------------------------------------------------ transversality

std::vector<Mask> cyclic_flats(const Matroid& m) {
  const RankOracle o(m);
  std::vector<Mask> out;
  for (Mask f : flats(m).all()) {
    bool cyclic = true;
    for_each_element(f, [&](int e) { cyclic = cyclic && o.rank(f & ~bit(e)) == o.rank(f); });
    if (cyclic) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_transversal(const Matroid& m) {
  const std::vector<Mask> cf = cyclic_flats(m);
  const int z = static_cast<int>(cf.size());
  if (z > 24) throw BudgetExceeded("too many cyclic flats for the transversality test");
  const RankOracle o(m);
  const std::size_t families = std::size_t{1} << z;
  std::vector<std::uint16_t> combined(families, 0);
  std::vector<std::int32_t> bound(families, 0);
  // bound[F] = sum over nonempty G within F of (-1)^(|G|+1) r(union G).
  for (std::size_t s = 1; s < families; ++s) {
    const int low = std::countr_zero(s);
    combined[s] = static_cast<std::uint16_t>(combined[s & (s - 1)] | cf[low]);
    const int r = o.rank(combined[s]);
    bound[s] = (std::popcount(s) % 2 == 1) ? r : -r;
  }
  for (int i = 0; i < z; ++i) {
    for (std::size_t s = 0; s < families; ++s) {
      if (s & (std::size_t{1} << i)) bound[s] += bound[s ^ (std::size_t{1} << i)];
    }
  }
  const Mask ground = m.ground();
  combined[0] = static_cast<std::uint16_t>(ground);
  for (std::size_t s = 1; s < families; ++s) {
    const int low = std::countr_zero(s);
    combined[s] = static_cast<std::uint16_t>(combined[s & (s - 1)] & cf[low]);
    if (o.rank(combined[s]) > bound[s]) return false;
  }
  return true;
}

std::vector<std::uint8_t> matchable_sets(int n, const std::vector<Mask>& family) {
  std::vector<std::uint8_t> table(std::size_t{1} << n, 0);
  table[0] = 1;
  for (Mask set : family) {
    std::vector<std::uint8_t> next = table;
    for (Mask x = 0; x < table.size(); ++x) {
      if (!table[x]) continue;
      for_each_element(set & ~x, [&](int e) { next[x | bit(e)] = 1; });
    }
    table = std::move(next);
  }
  return table;
}

std::optional<std::vector<Mask>> transversal_presentation(const Matroid& m, std::uint64_t budget) {
  if (!is_transversal(m)) return std::nullopt;
  const int n = m.size();
  const int r = m.rank();
  const RankOracle o(m);
  const std::vector<Mask> cocircs = cocircuits(m);
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<Mask> chosen;
  std::vector<std::vector<std::uint8_t>> matchable{std::vector<std::uint8_t>(subsets, 0)};
  matchable[0][0] = 1;
  std::vector<std::vector<std::uint8_t>> meets{std::vector<std::uint8_t>(subsets, 0)};
  matchable.reserve(r + 1);
  meets.reserve(r + 1);
  std::uint64_t nodes = 0;
  std::function<bool(std::size_t)> search = [&](std::size_t from) {
    if (++nodes > budget) throw BudgetExceeded("transversal presentation search budget exhausted");
    const int depth = static_cast<int>(chosen.size());
    const auto& table = matchable[depth];
    const auto& meet = meets[depth];
    const int remaining = r - depth;
    for (Mask s = 0; s < subsets; ++s) {
      if (table[s] && !o.is_independent(s)) return false;
      if (o.rank(s) > meet[s] + remaining) return false;
    }
    if (remaining == 0) {
      for (Mask s = 0; s < subsets; ++s) {
        if ((table[s] != 0) != o.is_independent(s)) return false;
      }
      return true;
    }
    for (std::size_t i = from; i < cocircs.size(); ++i) {
      const Mask set = cocircs[i];
      std::vector<std::uint8_t> next = table;
      for (Mask x = 0; x < subsets; ++x) {
        if (!table[x]) continue;
        for_each_element(set & ~x, [&](int e) { next[x | bit(e)] = 1; });
      }
      std::vector<std::uint8_t> next_meet = meet;
      for (Mask s = 0; s < subsets; ++s) next_meet[s] = static_cast<std::uint8_t>(meet[s] + ((s & set) ? 1 : 0));
      chosen.push_back(set);
      matchable.push_back(std::move(next));
      meets.push_back(std::move(next_meet));
      if (search(i)) return true;
      chosen.pop_back();
      matchable.pop_back();
      meets.pop_back();
    }
    return false;
  };
  if (!search(0)) {
    throw Error("cyclic-flat criterion and presentation search disagree for " + describe(m));
  }
  return chosen;
}

}  // namespace matcat
