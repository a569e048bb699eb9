#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "matcat/subset.hpp"

namespace matcat {

/// A matroid stored as (ground size, rank, sorted hyperplane masks).
///
/// The hyperplane family determines every other structure; flats, circuits,
/// bases and the rank function are derived on demand. Values are immutable
/// after construction and may be shared freely between threads.
class Matroid {
 public:
  /// The empty matroid: no elements, rank 0, no hyperplanes.
  Matroid() = default;

  /// Validates the hyperplane axioms and infers the rank.
  /// Throws AxiomViolation if the family is not a valid hyperplane family.
  static Matroid from_hyperplanes(int n, std::vector<Mask> hyperplanes);

  /// Builds a matroid from a rank table indexed by subset mask. The table is
  /// trusted to satisfy the rank axioms (use validate() to confirm).
  static Matroid from_rank_table(int n, std::span<const std::uint8_t> rank);

  /// Skips validation; the caller guarantees the family is a hyperplane
  /// family of a rank-`rank` matroid. The list is sorted here.
  static Matroid trusted(int n, int rank, std::vector<Mask> hyperplanes);

  int size() const noexcept { return n_; }
  int rank() const noexcept { return rank_; }
  Mask ground() const noexcept { return full_mask(n_); }
  const std::vector<Mask>& hyperplanes() const noexcept { return hyperplanes_; }

  friend bool operator==(const Matroid&, const Matroid&) = default;
  friend auto operator<=>(const Matroid&, const Matroid&) = default;

 private:
  Matroid(int n, int rank, std::vector<Mask> hyperplanes)
      : n_(n), rank_(rank), hyperplanes_(std::move(hyperplanes)) {}

  int n_ = 0;
  int rank_ = 0;
  std::vector<Mask> hyperplanes_;
};

/// Full rank and closure tables over all 2^n subsets.
class RankOracle {
 public:
  explicit RankOracle(const Matroid& m);

  int size() const noexcept { return n_; }
  int rank() const noexcept { return rank_[full_mask(n_)]; }
  int rank(Mask a) const { return rank_[a]; }
  Mask closure(Mask a) const { return closure_[a]; }
  bool is_flat(Mask a) const { return closure_[a] == a; }
  bool is_independent(Mask a) const { return rank_[a] == popcount(a); }
  bool is_basis(Mask a) const { return popcount(a) == rank() && is_independent(a); }
  std::span<const std::uint8_t> table() const { return rank_; }

 private:
  int n_;
  std::vector<std::uint8_t> rank_;
  std::vector<Mask> closure_;
};

struct FlatsByRank {
  /// levels[k] holds the rank-k flats in increasing mask order.
  std::vector<std::vector<Mask>> levels;

  std::size_t count() const;
  std::vector<Mask> all() const;
};

FlatsByRank flats(const Matroid& m);

int rank_of(const Matroid& m, Mask a);
Mask closure(const Matroid& m, Mask a);

std::vector<Mask> circuits(const Matroid& m);
std::vector<Mask> cocircuits(const Matroid& m);
std::vector<Mask> bases(const Matroid& m);
std::vector<Mask> independent_sets(const Matroid& m);
std::vector<Mask> circuit_hyperplanes(const Matroid& m);

Matroid dual(const Matroid& m);

/// Deletion and contraction relabel elements above e down by one.
Matroid delete_element(const Matroid& m, int e);
Matroid contract_element(const Matroid& m, int e);

/// Restriction to `keep`, relabelled onto 0..|keep|-1 in increasing order.
Matroid restrict_to(const Matroid& m, Mask keep);

Mask loops(const Matroid& m);
Mask coloops(const Matroid& m);

/// Parallel classes of the non-loop elements, ordered by least element.
std::vector<Mask> parallel_classes(const Matroid& m);
/// Series classes: parallel classes of the dual.
std::vector<Mask> series_classes(const Matroid& m);

Matroid simplify(const Matroid& m);
bool is_simple(const Matroid& m);

/// Turns the circuit-hyperplane h into a basis. Throws NotCircuitHyperplane.
Matroid relax(const Matroid& m, Mask h);

/// Rank function min(r(A), r(M) - 1). Throws RankZero.
Matroid truncate(const Matroid& m);

inline constexpr int kInfiniteConnectivity = std::numeric_limits<int>::max();

/// Tutte connectivity; kInfiniteConnectivity when no k-separation exists.
int connectivity(const Matroid& m);

/// Whitney rank generating function: coefficient(i, j) multiplies x^i y^j.
struct RankPolynomial {
  int x_degree = 0;  // r(M)
  int y_degree = 0;  // n - r(M)
  std::vector<std::uint64_t> coefficients;

  std::uint64_t at(int i, int j) const { return coefficients[i * (y_degree + 1) + j]; }
  std::uint64_t evaluate(std::uint64_t x, std::uint64_t y) const;
  friend bool operator==(const RankPolynomial&, const RankPolynomial&) = default;
};

RankPolynomial rank_polynomial(const Matroid& m);

struct ValidationReport {
  bool ok = true;
  std::string axiom;  // "R1", "R2", "R3" or "hyperplanes"
  Mask first = 0;
  Mask second = 0;
  std::string message;
};

/// Checks R1-R3 on the induced rank function: every pair of subsets for
/// n <= 9, local submodularity plus a fixed-seed sample of pairs above that.
ValidationReport validate(const Matroid& m);

/// Element i of m becomes element perm[i] of the result.
Matroid permute(const Matroid& m, const std::vector<int>& perm);

/// Hyperplane-family axiom check used by from_hyperplanes; returns an empty
/// string when the family is valid, otherwise a description of the violation.
std::string hyperplane_axiom_violation(int n, const std::vector<Mask>& sorted_hyperplanes);

Matroid uniform_matroid(int rank, int n);
Matroid free_matroid(int n);

/// Direct sum with a loop or coloop appended as element n.
Matroid add_loop(const Matroid& m);
Matroid add_coloop(const Matroid& m);

std::string describe(const Matroid& m);

}  // namespace matcat
