#pragma once

// Sparse and non-sparse paving matroids through independent sets of
// Johnson-type graphs, enumerated up to symmetry.

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matcat/canonical.hpp"
#include "matcat/matroid.hpp"

namespace matcat {

struct JohnsonGraph {
  int n = 0;
  int k = 0;
  /// All k-subsets in increasing mask order.
  std::vector<Mask> vertices;
  std::vector<std::vector<int>> adjacency;

  std::size_t degree() const { return adjacency.empty() ? 0 : adjacency.front().size(); }
  /// Complementation is an extra graph automorphism exactly when n = 2k.
  bool has_complementation() const { return n == 2 * k; }
  /// n!, doubled when complementation applies.
  std::uint64_t symmetry_order() const;
};

/// Vertices are k-subsets; adjacent when they meet in exactly k-1 points.
JohnsonGraph johnson_graph(int n, int k);

/// The rank-(d+1) sparse paving matroid whose circuit-hyperplanes are the
/// given (d+1)-sets. Throws NotIndependent when two sets meet in d points.
Matroid sparse_paving_from_independent_set(int n, int d, const std::vector<Mask>& iset);

/// Orbit representatives of independent sets in a graph whose vertices are
/// subsets and whose edges join subsets meeting in at least `conflict`
/// points, under the point permutations preserving `point_colors`.
struct OrbitProblem {
  int n = 0;
  std::vector<Mask> vertices;
  int conflict = 0;
  std::vector<int> point_colors;
};

OrbitProblem johnson_problem(const JohnsonGraph& g);

struct IsetOptions {
  /// Largest independent-set size explored; -1 for no limit.
  int max_size = -1;
  bool keep_representatives = false;
  /// Level checkpoint written after every `batch` parents; empty disables.
  std::string checkpoint_path;
  std::size_t batch = 256;
  CanonOptions canon;
};

struct IsetEnumeration {
  /// classes_by_size[s]: orbits of independent sets of size s.
  std::vector<std::uint64_t> classes_by_size;
  /// representatives[s], sorted, when requested.
  std::vector<std::vector<std::vector<Mask>>> representatives;

  std::uint64_t total() const;
};

IsetEnumeration enumerate_iset_orbits(const OrbitProblem& problem, const IsetOptions& options = {});

/// S_n-orbits of independent sets of J(n,k) by size.
IsetEnumeration enumerate_isets_orderly(const JohnsonGraph& g, const IsetOptions& options = {});

/// Orbits under the point group extended by complementation (n = 2k):
/// complementary families are paired, so the count is (all + fixed) / 2.
struct ComplementPairing {
  std::vector<std::uint64_t> classes_by_size;
  std::vector<std::uint64_t> self_complementary_by_size;
  std::vector<std::uint64_t> paired_classes_by_size;
};

ComplementPairing pair_by_complement(const JohnsonGraph& g, const IsetEnumeration& orbits);

/// Self-dual sparse paving matroids of rank n/2 on n elements, counted once
/// through certificate equality of m and its dual and once through
/// complement-invariance of the circuit-hyperplane family.
struct SelfDualCount {
  std::uint64_t total_classes = 0;
  std::uint64_t by_certificate = 0;
  std::uint64_t by_complement = 0;
};

SelfDualCount count_self_dual_sparse(int n, const CanonOptions& canon = {});

/// Non-sparse paving matroids of rank d+1 on n elements, grouped by the size
/// k of a largest hyperplane and the number of hyperplanes of that size.
/// Each orbit of independent sets of the auxiliary graph contributes 1/c,
/// where c is the number of automorphism orbits on k-point hyperplanes.
using PavingBuckets = std::map<std::pair<int, int>, boost::rational<std::int64_t>>;

PavingBuckets count_nonsparse_paving(int n, int rank, const CanonOptions& canon = {});

/// Total number of paving matroids of the given rank on n elements:
/// sparse ones from J(n, rank) plus the non-sparse buckets.
std::uint64_t count_paving(int n, int rank);

struct EstimateReport {
  double estimate = 0;
  std::uint64_t exact_below_prefix = 0;
  std::uint64_t prefix_classes = 0;
  std::uint64_t sampled = 0;
  std::uint64_t sampled_subtree_total = 0;
  double fraction = 1.0;
  std::uint64_t seed = 0;
};

/// Exact orbit count below `prefix_size`, plus the subtrees under a seeded
/// uniform sample of the size-`prefix_size` representatives scaled by the
/// reciprocal of the realised sampling fraction.
EstimateReport estimate_iset_count(const JohnsonGraph& g, int prefix_size, double sample_fraction, std::uint64_t seed);

/// Number of orbit representatives in the subtree under `root` (root included).
std::uint64_t count_subtree(const OrbitProblem& problem, const std::vector<Mask>& root, const CanonOptions& canon = {});

}  // namespace matcat
