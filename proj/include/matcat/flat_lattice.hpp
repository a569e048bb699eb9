#pragma once

// Lattice of flats, modular cuts and single-element extensions.

#include <cstdint>
#include <functional>
#include <vector>

#include "matcat/matroid.hpp"
#include "matcat/subset.hpp"

namespace matcat {

/// Fixed-size bitset over flat indices.
class FlatSet {
 public:
  FlatSet() = default;
  explicit FlatSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  std::size_t count() const;
  bool none() const;
  std::vector<int> indices() const;

  friend bool operator==(const FlatSet&, const FlatSet&) = default;
  friend auto operator<=>(const FlatSet&, const FlatSet&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// The flats of a matroid indexed in (rank, mask) order with the cover and
/// strict-containment relations. Index 0 is cl(empty), the last index is E.
struct FlatLatticeGraph {
  int n = 0;
  int rank = 0;
  std::vector<Mask> flats;
  std::vector<int> flat_rank;
  /// upper[i]: flats covering flat i; lower[i]: flats covered by flat i.
  std::vector<std::vector<int>> upper;
  std::vector<std::vector<int>> lower;
  /// comparable[i]: flats strictly containing or strictly contained in flat i.
  std::vector<std::vector<int>> comparable;
  /// level_start[k] is the first index of rank k; level_start[rank+1] = size.
  std::vector<int> level_start;

  std::size_t size() const noexcept { return flats.size(); }
  int top() const noexcept { return static_cast<int>(flats.size()) - 1; }
  /// Index of a flat, or -1 when the mask is not a flat.
  int index_of(Mask flat) const;
  std::size_t cover_edge_count() const;
};

FlatLatticeGraph build_lattice(const Matroid& m);

/// r(F) + r(G) = r(F u G) + r(F n G); the union need not be a flat.
bool is_modular_pair(const Matroid& m, Mask f, Mask g);
bool is_modular_pair(const RankOracle& oracle, Mask f, Mask g);

/// Calls visit once per antichain of the flat poset, the empty one included.
/// Antichains are independent sets of the strict-comparability graph, listed
/// as increasing index sequences.
void for_each_antichain(const FlatLatticeGraph& lat, const std::function<void(const std::vector<int>&)>& visit);
std::uint64_t count_antichains(const FlatLatticeGraph& lat);

struct ModularCut {
  FlatSet members;
  std::vector<int> minimal;

  bool empty() const { return members.none(); }
  friend bool operator==(const ModularCut&, const ModularCut&) = default;
};

/// Up-set of the given flats.
FlatSet up_set(const FlatLatticeGraph& lat, const std::vector<int>& generators);

/// Re-verifies the two defining properties of a modular cut.
bool is_modular_cut(const FlatLatticeGraph& lat, const RankOracle& oracle, const FlatSet& members);

/// Fills in the minimal members.
ModularCut make_cut(const FlatLatticeGraph& lat, FlatSet members);

/// Every modular cut of m, the empty cut included, in the order produced by a
/// closure search over flats from the top down.
std::vector<ModularCut> modular_cuts(const Matroid& m);
std::vector<ModularCut> modular_cuts(const FlatLatticeGraph& lat, const RankOracle& oracle);

/// Reference route: up-set of every antichain, kept when modular-pair closed.
/// Only usable on small lattices since it visits every antichain.
std::vector<ModularCut> modular_cuts_by_antichains(const FlatLatticeGraph& lat, const RankOracle& oracle);

/// Streaming form of modular_cuts; the members set passed to visit is only
/// valid during the call.
class ModularCutSearch {
 public:
  ModularCutSearch(const FlatLatticeGraph& lat, const RankOracle& oracle);

  void run(const std::function<void(const FlatSet&)>& visit);
  int meet(int a, int b) const { return meet_[static_cast<std::size_t>(a) * size_ + b]; }
  bool modular(int a, int b) const { return modular_[static_cast<std::size_t>(a) * size_ + b] != 0; }

 private:
  bool include(int flat);
  void undo(std::size_t log_size, std::size_t member_count);
  void descend(int index, const std::function<void(const FlatSet&)>& visit);

  const FlatLatticeGraph& lat_;
  std::size_t size_;
  std::vector<int> meet_;
  std::vector<char> modular_;
  FlatSet in_;
  std::vector<char> out_;
  std::vector<int> members_;
  std::vector<int> log_;
};

/// Flats outside the cut covered by at least one member.
std::vector<int> collar(const FlatLatticeGraph& lat, const ModularCut& cut);

/// Single-element extension by a new element labelled n, built from the full
/// new flat family. Throws InvalidCut when the cut is not a modular cut.
Matroid extend(const Matroid& m, const ModularCut& cut);
Matroid extend(const Matroid& m, const FlatLatticeGraph& lat, const RankOracle& oracle, const ModularCut& cut);

/// Hyperplanes of the extension read directly from the cut: hyperplanes
/// outside the cut, hyperplanes in the cut with e added, and corank-2 flats
/// in neither the cut nor the collar with e added. Unchecked.
Matroid extension_from_cut(const FlatLatticeGraph& lat, const FlatSet& cut);

}  // namespace matcat
