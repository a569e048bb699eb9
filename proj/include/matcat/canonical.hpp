#pragma once

// Canonical labelling of set systems (points plus a family of distinct
// blocks) by individualization-refinement, and the matroid certificates
// built on top of it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "matcat/matroid.hpp"
#include "matcat/subset.hpp"

namespace matcat {

/// Bipartite incidence structure: point-vertices 0..points-1 and one
/// block-vertex per (distinct) block. Colour classes are never exchanged.
struct SetSystem {
  int points = 0;
  std::vector<Mask> blocks;
  /// Optional per-point colours; automorphisms must preserve them.
  std::vector<int> point_colors;
};

struct CanonOptions {
  std::size_t node_budget = 5'000'000;
};

struct CanonicalLabeling {
  /// order[i] is the original point receiving canonical label i.
  std::vector<int> order;
  /// label[p] is the canonical label of original point p.
  std::vector<int> label;
  /// Relabelled blocks in increasing mask order.
  std::vector<Mask> form;
  /// Point colours listed by canonical label (empty when uncoloured).
  std::vector<int> colors;
  /// orbit[p] is the least point in the automorphism orbit of p.
  std::vector<int> orbit;
  /// Point permutations generating the automorphism group.
  std::vector<std::vector<int>> generators;
  std::uint64_t group_order = 1;
  std::size_t nodes = 0;
};

/// Throws BudgetExceeded when the search tree exceeds the node budget.
CanonicalLabeling canonical_labeling(const SetSystem& system, const CanonOptions& options = {});

/// Points of the first cell of the equitable partition reached from the
/// colour partition. The point with canonical label 0 always lies in it,
/// so anything outside can be rejected without a full search.
Mask first_root_cell(const SetSystem& system);

/// Composes generators into an explicit permutation sending a to b, or
/// nothing when a and b lie in different orbits of the generated group.
std::optional<std::vector<int>> orbit_witness(const std::vector<std::vector<int>>& generators,
                                              int points, int a, int b);

/// The hyperplane graph of a matroid: element-vertices and one vertex per
/// hyperplane, adjacent when the hyperplane contains the element.
struct HyperplaneGraph {
  int n_elements = 0;
  int n_hyperplanes = 0;
  std::vector<Mask> incidence;

  std::size_t edge_count() const;
  SetSystem as_set_system() const;
};

HyperplaneGraph hyperplane_graph(const Matroid& m);

struct Certificate {
  /// n and rank as single bytes, then every canonically relabelled
  /// hyperplane as a big-endian 16-bit mask, in increasing order.
  std::vector<std::uint8_t> bytes;
  std::vector<int> element_orbits;
  std::uint64_t aut_order = 1;
  std::vector<int> canonical_order;
  std::vector<std::vector<int>> generators;

  int orbit_count() const;
};

Certificate certificate(const Matroid& m, const CanonOptions& options = {});

/// The canonically relabelled copy of m (same certificate, canonical labels).
Matroid canonical_form(const Matroid& m);

/// Rebuilds the canonical representative encoded in certificate bytes.
Matroid matroid_from_certificate(const std::vector<std::uint8_t>& bytes);

bool is_isomorphic(const Matroid& a, const Matroid& b);

/// The element with the lowest canonical label. Throws EmptyGroundSet.
int distinguished_element(const Matroid& m);

}  // namespace matcat
