#pragma once

// Isomorph-free generation of all matroids by single-element extension with
// canonical construction paths, plus a brute-force reference for tiny n.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matcat/canonical.hpp"
#include "matcat/matroid.hpp"

namespace matcat {

/// Children of one parent that pass the canonical-path test, in canonical
/// form and sorted, with duplicates removed.
std::vector<Matroid> extend_all(const Matroid& parent, const CanonOptions& canon = {});

struct ExtendStats {
  std::uint64_t cuts = 0;
  std::uint64_t quick_rejects = 0;
  std::uint64_t labelled = 0;
  std::uint64_t accepted = 0;
};

std::vector<Matroid> extend_all(const Matroid& parent, const CanonOptions& canon, ExtendStats& stats);

struct EnumOptions {
  /// Worker threads; 0 keeps the OpenMP default.
  int jobs = 0;
  bool parallel = true;
  CanonOptions canon;
  /// Parents per batch; a checkpoint is written after every batch.
  std::size_t batch = 64;
  /// Empty disables checkpointing.
  std::string checkpoint_path;
  std::function<void(std::size_t done, std::size_t total)> progress;
  /// Extend only parents of rank at most (n+1)/2 and obtain the higher ranks
  /// as duals of the lower ones.
  bool dual_completion = false;
};

/// All matroids on n+1 elements from the complete list on n elements.
/// Output is sorted by (n, rank, certificate) for any worker count.
std::vector<Matroid> next_level(const std::vector<Matroid>& parents, const EnumOptions& options = {});

/// Levels 0..max_n; levels[k] holds one canonical representative per
/// isomorphism class on k elements.
std::vector<std::vector<Matroid>> enumerate(int max_n, const EnumOptions& options = {});

/// Resumable checkpoint of a next_level run.
struct EnumCheckpoint {
  int parent_size = 0;
  std::uint64_t parent_count = 0;
  std::uint64_t parents_done = 0;
  std::vector<Matroid> children;
};

void write_checkpoint(const std::string& path, const EnumCheckpoint& state);
/// Throws IoError or FormatError.
EnumCheckpoint read_checkpoint(const std::string& path);

/// Every cocircuit antichain on n <= 5 elements satisfying circuit
/// elimination, deduplicated by certificate and sorted like next_level.
/// labelled_count receives the number of labelled matroids seen.
std::vector<Matroid> brute_force_enumerate(int n, std::uint64_t* labelled_count = nullptr);

struct DualityReport {
  bool closed = true;
  std::size_t missing = 0;
  std::size_t self_dual = 0;
  /// partner[i] is the index of the dual of entry i, or -1.
  std::vector<long> partner;
};

/// Checks that a sorted canonical level contains the dual of every entry.
DualityReport verify_duality_closure(const std::vector<Matroid>& level);

}  // namespace matcat
