#pragma once

// Classification flags and the expensive structural predicates:
// Ingleton violation, representability over small fields, excluded minors,
// base orderability and transversality.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "matcat/matroid.hpp"

namespace matcat {

struct PropertyFlags {
  bool simple = false;
  bool cosimple = false;
  bool paving = false;
  bool sparse_paving = false;
  bool uniform = false;
  /// Size of a smallest circuit; 0 when the matroid has no circuits.
  int min_circuit_size = 0;
  std::uint64_t bases = 0;
  std::uint64_t circuits = 0;
  std::uint64_t cocircuits = 0;
  std::uint64_t flats = 0;
  std::uint64_t hyperplanes = 0;
  std::uint64_t independent_sets = 0;
  std::uint64_t circuit_hyperplanes = 0;
  int loops = 0;
  int coloops = 0;
};

PropertyFlags classify(const Matroid& m);

// ---------------------------------------------------------------- Ingleton

struct IngletonWitness {
  Mask a = 0, b = 0, c = 0, d = 0;
  /// r(A)+r(B)+r(ABC)+r(ABD)+r(CD) and r(AB)+r(AC)+r(AD)+r(BC)+r(BD).
  int left = 0;
  int right = 0;
};

/// Recomputes both sides of the inequality for a quadruple.
IngletonWitness ingleton_sides(const RankOracle& oracle, Mask a, Mask b, Mask c, Mask d);

/// Exhaustive search over quadruples of flats. Throws BudgetExceeded when
/// more than `budget` (A, B, C) triples are inspected.
std::optional<IngletonWitness> ingleton_violating(const Matroid& m, std::uint64_t budget = 20'000'000'000ULL);

/// Minor test: true when some single-element deletion or contraction is
/// isomorphic to a member of `violators` (sorted canonical forms).
bool ingleton_violating_by_minors(const Matroid& m, const std::vector<Matroid>& violators);

// --------------------------------------------------------- representability

/// Arithmetic tables for GF(q), q in {2, 3, 4, 5}. GF(4) is F2[w]/(w^2+w+1)
/// with w encoded as 2 and w+1 as 3.
struct FiniteField {
  int q = 2;
  std::array<std::array<std::uint8_t, 5>, 5> add{};
  std::array<std::array<std::uint8_t, 5>, 5> mul{};
  std::array<std::uint8_t, 5> neg{};
  std::array<std::uint8_t, 5> inv{};

  static const FiniteField& get(int q);
};

struct RepresentationMatrix {
  int q = 2;
  int rows = 0;
  int cols = 0;
  /// Row-major entries in 0..q-1.
  std::vector<std::uint8_t> entries;

  std::uint8_t at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
  /// Rank over GF(q) of the columns in `columns`.
  int column_rank(Mask columns) const;
};

/// True when the column matroid of the matrix equals m on every subset.
bool verify_representation(const Matroid& m, const RepresentationMatrix& matrix);

/// Backtracking search for a representation over GF(q); the result is always
/// verified on all 2^n subsets. Empty when m is not GF(q)-representable.
std::optional<RepresentationMatrix> representable(const Matroid& m, int q);

/// Per-level representability with minor inheritance: a matroid with a
/// non-representable single-element minor is marked non-representable
/// without a search. levels[k] must be sorted canonical forms.
std::vector<std::vector<bool>> representability_table(const std::vector<std::vector<Matroid>>& levels, int q,
                                                      bool parallel = true);

/// Matroids that are not representable while every single-element deletion
/// and contraction is, over levels 0..levels.size()-1.
std::vector<Matroid> excluded_minors(const std::vector<std::vector<Matroid>>& levels, int q);

// ------------------------------------------------------------- orderability

bool base_orderable(const Matroid& m);
bool strongly_base_orderable(const Matroid& m);

// ------------------------------------------------------------ transversality

/// Cyclic flats (unions of circuits that are closed), ascending.
std::vector<Mask> cyclic_flats(const Matroid& m);

/// Decides transversality from the cyclic flats by the inclusion-exclusion
/// rank criterion. Throws BudgetExceeded above 24 cyclic flats.
bool is_transversal(const Matroid& m);

/// Independent sets of the transversal matroid of a set family, as a table
/// over all 2^n subsets (1 = matchable).
std::vector<std::uint8_t> matchable_sets(int n, const std::vector<Mask>& family);

/// A presentation by rank-many cocircuits whose transversal matroid is m, or
/// empty when m is not transversal. Throws BudgetExceeded past `budget` nodes.
std::optional<std::vector<Mask>> transversal_presentation(const Matroid& m, std::uint64_t budget = 50'000'000);

}  // namespace matcat
