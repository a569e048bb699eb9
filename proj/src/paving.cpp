#include "matcat/paving.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "matcat/errors.hpp"

namespace matcat {

std::uint64_t JohnsonGraph::symmetry_order() const {
  std::uint64_t order = 1;
  for (int i = 2; i <= n; ++i) order *= static_cast<std::uint64_t>(i);
  return has_complementation() ? 2 * order : order;
}

JohnsonGraph johnson_graph(int n, int k) {
  if (k < 1 || k >= n || n > kMaxGround) throw std::invalid_argument("johnson_graph needs 1 <= k < n <= 15");
  JohnsonGraph g;
  g.n = n;
  g.k = k;
  g.vertices = k_subsets(n, k);
  g.adjacency.assign(g.vertices.size(), {});
  for (std::size_t a = 0; a < g.vertices.size(); ++a) {
    for (std::size_t b = 0; b < g.vertices.size(); ++b) {
      if (a != b && popcount(g.vertices[a] & g.vertices[b]) == k - 1) g.adjacency[a].push_back(static_cast<int>(b));
    }
  }
  return g;
}

Matroid sparse_paving_from_independent_set(int n, int d, const std::vector<Mask>& iset) {
  for (std::size_t a = 0; a < iset.size(); ++a) {
    if (popcount(iset[a]) != d + 1) throw NotIndependent(to_string(iset[a]) + " is not a vertex of the Johnson graph");
    for (std::size_t b = a + 1; b < iset.size(); ++b) {
      if (popcount(iset[a] & iset[b]) >= d) {
        throw NotIndependent(to_string(iset[a]) + " and " + to_string(iset[b]) + " are adjacent");
      }
    }
  }
  std::vector<Mask> hyps(iset.begin(), iset.end());
  for (Mask s : k_subsets(n, d)) {
    if (std::none_of(iset.begin(), iset.end(), [&](Mask b) { return (b & s) == s; })) hyps.push_back(s);
  }
  return Matroid::from_hyperplanes(n, std::move(hyps));
}

OrbitProblem johnson_problem(const JohnsonGraph& g) { return OrbitProblem{g.n, g.vertices, g.k - 1, {}}; }

std::uint64_t IsetEnumeration::total() const {
  return std::accumulate(classes_by_size.begin(), classes_by_size.end(), std::uint64_t{0});
}

namespace {

using Family = std::vector<Mask>;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Canonical augmentation over independent sets: a child is kept when the
/// added block lies in the orbit of the block whose canonical image is least.
class OrbitEngine {
 public:
  OrbitEngine(const OrbitProblem& problem, const CanonOptions& canon)
      : p_(problem), canon_(canon), index_(std::size_t{1} << problem.n, -1) {
    for (std::size_t v = 0; v < p_.vertices.size(); ++v) index_[p_.vertices[v]] = static_cast<int>(v);
    conflicts_.assign(p_.vertices.size(), {});
    for (std::size_t a = 0; a < p_.vertices.size(); ++a) {
      for (std::size_t b = 0; b < p_.vertices.size(); ++b) {
        if (a != b && popcount(p_.vertices[a] & p_.vertices[b]) >= p_.conflict) {
          conflicts_[a].push_back(static_cast<int>(b));
        }
      }
    }
  }

  CanonicalLabeling label(const Family& blocks) const {
    return canonical_labeling(SetSystem{p_.n, blocks, p_.point_colors}, canon_);
  }

  std::vector<Family> children(const Family& parent) const {
    const std::size_t v_count = p_.vertices.size();
    std::vector<char> blocked(v_count, 0);
    for (Mask b : parent) {
      const int i = index_[b];
      blocked[i] = 1;
      for (int c : conflicts_[i]) blocked[c] = 1;
    }
    // One candidate per orbit of the parent's automorphism group.
    const CanonicalLabeling parent_label = label(parent);
    UnionFind orbits(v_count);
    for (const auto& gen : parent_label.generators) {
      for (std::size_t v = 0; v < v_count; ++v) orbits.unite(v, static_cast<std::size_t>(index_[permute_mask(p_.vertices[v], gen)]));
    }
    std::vector<char> orbit_tried(v_count, 0);
    std::set<Family> accepted;
    for (std::size_t v = 0; v < v_count; ++v) {
      if (blocked[v]) continue;
      const std::size_t root = orbits.find(v);
      if (orbit_tried[root]) continue;
      orbit_tried[root] = 1;
      Family child = parent;
      child.insert(std::upper_bound(child.begin(), child.end(), p_.vertices[v]), p_.vertices[v]);
      const CanonicalLabeling lab = label(child);
      if (!added_block_is_canonical(child, p_.vertices[v], lab)) continue;
      accepted.insert(lab.form);
    }
    return {accepted.begin(), accepted.end()};
  }

  std::uint64_t subtree(const Family& root) const {
    std::uint64_t total = 1;
    for (const Family& child : children(root)) total += subtree(child);
    return total;
  }

 private:
  static bool added_block_is_canonical(const Family& blocks, Mask added, const CanonicalLabeling& lab) {
    std::size_t least = 0;
    Mask least_image = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const Mask image = permute_mask(blocks[i], lab.label);
      if (i == 0 || image < least_image) {
        least = i;
        least_image = image;
      }
    }
    const std::size_t added_index = static_cast<std::size_t>(std::lower_bound(blocks.begin(), blocks.end(), added) - blocks.begin());
    if (added_index == least) return true;
    UnionFind block_orbits(blocks.size());
    for (const auto& gen : lab.generators) {
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Mask image = permute_mask(blocks[i], gen);
        block_orbits.unite(i, static_cast<std::size_t>(std::lower_bound(blocks.begin(), blocks.end(), image) - blocks.begin()));
      }
    }
    return block_orbits.find(added_index) == block_orbits.find(least);
  }

  const OrbitProblem& p_;
  CanonOptions canon_;
  std::vector<int> index_;
  std::vector<std::vector<int>> conflicts_;
};

constexpr char kIsetMagic[8] = {'M', 'C', 'A', 'T', 'I', 'S', 'E', 'T'};
constexpr std::uint32_t kIsetVersion = 1;

struct LevelCheckpoint {
  std::uint32_t size = 0;
  std::uint64_t parents_done = 0;
  std::vector<std::uint64_t> classes_by_size;
  std::vector<Family> parents;
  std::vector<Family> children;
  std::vector<std::vector<Family>> kept;
};

void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw FormatError(0, "truncated independent-set checkpoint");
  return v;
}

void put_families(std::ostream& out, const std::vector<Family>& families) {
  put_u64(out, families.size());
  for (const Family& f : families) {
    put_u64(out, f.size());
    for (Mask m : f) put_u64(out, m);
  }
}

std::vector<Family> get_families(std::istream& in) {
  std::vector<Family> out(get_u64(in));
  for (Family& f : out) {
    f.resize(get_u64(in));
    for (Mask& m : f) m = static_cast<Mask>(get_u64(in));
  }
  return out;
}

void save(const std::string& path, const OrbitProblem& p, const LevelCheckpoint& state) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp);
    out.write(kIsetMagic, sizeof kIsetMagic);
    out.write(reinterpret_cast<const char*>(&kIsetVersion), sizeof kIsetVersion);
    put_u64(out, static_cast<std::uint64_t>(p.n));
    put_u64(out, p.vertices.size());
    put_u64(out, static_cast<std::uint64_t>(p.conflict));
    put_u64(out, state.size);
    put_u64(out, state.parents_done);
    put_u64(out, state.classes_by_size.size());
    for (std::uint64_t c : state.classes_by_size) put_u64(out, c);
    put_families(out, state.parents);
    put_families(out, state.children);
    put_u64(out, state.kept.size());
    for (const auto& level : state.kept) put_families(out, level);
    if (!out) throw IoError("short write to checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<LevelCheckpoint> load(const std::string& path, const OrbitProblem& p) {
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  char magic[sizeof kIsetMagic];
  std::uint32_t version = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!in || std::memcmp(magic, kIsetMagic, sizeof magic) != 0) throw FormatError(0, "bad checkpoint magic");
  if (version != kIsetVersion) throw FormatError(0, "unsupported checkpoint version");
  if (get_u64(in) != static_cast<std::uint64_t>(p.n) || get_u64(in) != p.vertices.size() ||
      get_u64(in) != static_cast<std::uint64_t>(p.conflict)) {
    return std::nullopt;
  }
  LevelCheckpoint state;
  state.size = static_cast<std::uint32_t>(get_u64(in));
  state.parents_done = get_u64(in);
  state.classes_by_size.resize(get_u64(in));
  for (auto& c : state.classes_by_size) c = get_u64(in);
  state.parents = get_families(in);
  state.children = get_families(in);
  state.kept.resize(get_u64(in));
  for (auto& level : state.kept) level = get_families(in);
  return state;
}

}  // namespace

IsetEnumeration enumerate_iset_orbits(const OrbitProblem& problem, const IsetOptions& options) {
  const OrbitEngine engine(problem, options.canon);
  LevelCheckpoint state;
  if (auto saved = load(options.checkpoint_path, problem)) {
    state = std::move(*saved);
  } else {
    state.parents = {Family{}};
    state.classes_by_size = {1};
    if (options.keep_representatives) state.kept = {state.parents};
  }
  const std::size_t batch = std::max<std::size_t>(1, options.batch);
  while (!state.parents.empty() && (options.max_size < 0 || static_cast<int>(state.size) < options.max_size)) {
    for (std::size_t begin = state.parents_done; begin < state.parents.size(); begin += batch) {
      const std::size_t end = std::min(state.parents.size(), begin + batch);
      std::vector<std::vector<Family>> slots(end - begin);
#pragma omp parallel for schedule(dynamic, 1)
      for (std::size_t i = begin; i < end; ++i) slots[i - begin] = engine.children(state.parents[i]);
      for (auto& slot : slots) {
        state.children.insert(state.children.end(), std::make_move_iterator(slot.begin()),
                              std::make_move_iterator(slot.end()));
      }
      state.parents_done = end;
      if (!options.checkpoint_path.empty()) save(options.checkpoint_path, problem, state);
    }
    std::sort(state.children.begin(), state.children.end());
    if (std::adjacent_find(state.children.begin(), state.children.end()) != state.children.end()) {
      throw Error("canonical augmentation produced duplicate independent-set orbits");
    }
    ++state.size;
    if (state.children.empty()) {
      state.parents.clear();
    } else {
      state.classes_by_size.push_back(state.children.size());
      if (options.keep_representatives) state.kept.push_back(state.children);
      state.parents = std::move(state.children);
    }
    state.children.clear();
    state.parents_done = 0;
    if (!options.checkpoint_path.empty()) save(options.checkpoint_path, problem, state);
  }
  IsetEnumeration out;
  out.classes_by_size = std::move(state.classes_by_size);
  out.representatives = std::move(state.kept);
  return out;
}

IsetEnumeration enumerate_isets_orderly(const JohnsonGraph& g, const IsetOptions& options) {
  return enumerate_iset_orbits(johnson_problem(g), options);
}

std::uint64_t count_subtree(const OrbitProblem& problem, const std::vector<Mask>& root, const CanonOptions& canon) {
  const OrbitEngine engine(problem, canon);
  return engine.subtree(root);
}

namespace {

std::vector<Mask> canonical_family(const OrbitProblem& p, const std::vector<Mask>& blocks) {
  std::vector<Mask> sorted(blocks);
  std::sort(sorted.begin(), sorted.end());
  return canonical_labeling(SetSystem{p.n, sorted, p.point_colors}).form;
}

std::vector<Mask> complement_family(int n, const std::vector<Mask>& blocks) {
  std::vector<Mask> out;
  for (Mask b : blocks) out.push_back(full_mask(n) & ~b);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ComplementPairing pair_by_complement(const JohnsonGraph& g, const IsetEnumeration& orbits) {
  if (!g.has_complementation()) throw std::invalid_argument("complement pairing needs n = 2k");
  if (orbits.representatives.size() != orbits.classes_by_size.size()) {
    throw std::invalid_argument("complement pairing needs the orbit representatives");
  }
  const OrbitProblem p = johnson_problem(g);
  ComplementPairing out;
  for (const auto& level : orbits.representatives) {
    std::uint64_t fixed = 0;
    for (const auto& family : level) fixed += canonical_family(p, complement_family(g.n, family)) == family ? 1 : 0;
    out.classes_by_size.push_back(level.size());
    out.self_complementary_by_size.push_back(fixed);
    out.paired_classes_by_size.push_back((level.size() + fixed) / 2);
  }
  return out;
}

SelfDualCount count_self_dual_sparse(int n, const CanonOptions& canon) {
  if (n % 2 != 0 || n < 2) throw std::invalid_argument("self-dual count needs an even n >= 2");
  const JohnsonGraph g = johnson_graph(n, n / 2);
  IsetOptions options;
  options.keep_representatives = true;
  options.canon = canon;
  const IsetEnumeration orbits = enumerate_isets_orderly(g, options);
  const OrbitProblem p = johnson_problem(g);
  SelfDualCount out;
  for (const auto& level : orbits.representatives) {
    for (const auto& family : level) {
      ++out.total_classes;
      const Matroid m = sparse_paving_from_independent_set(n, n / 2 - 1, family);
      if (certificate(m, canon).bytes == certificate(dual(m), canon).bytes) ++out.by_certificate;
      if (canonical_family(p, complement_family(n, family)) == family) ++out.by_complement;
    }
  }
  return out;
}

PavingBuckets count_nonsparse_paving(int n, int rank, const CanonOptions& canon) {
  const int d = rank - 1;
  if (d < 1 || rank >= n) throw std::invalid_argument("non-sparse paving count needs 2 <= rank < n");
  PavingBuckets buckets;
  for (int k = d + 2; k <= n - 1; ++k) {
    const Mask fixed_block = full_mask(k);
    OrbitProblem p;
    p.n = n;
    p.conflict = d;
    for (int size = d + 1; size <= k; ++size) {
      for (Mask s : k_subsets(n, size)) {
        if (popcount(s & fixed_block) < d) p.vertices.push_back(s);
      }
    }
    std::sort(p.vertices.begin(), p.vertices.end());
    p.point_colors.assign(n, 1);
    for (int i = 0; i < k; ++i) p.point_colors[i] = 0;
    IsetOptions options;
    options.keep_representatives = true;
    options.canon = canon;
    const IsetEnumeration orbits = enumerate_iset_orbits(p, options);
    for (const auto& level : orbits.representatives) {
      for (const auto& family : level) {
        std::vector<Mask> hyps(family.begin(), family.end());
        hyps.push_back(fixed_block);
        for (Mask s : k_subsets(n, d)) {
          if ((s & fixed_block) == s) continue;
          if (std::none_of(family.begin(), family.end(), [&](Mask b) { return (b & s) == s; })) hyps.push_back(s);
        }
        const Matroid m = Matroid::from_hyperplanes(n, std::move(hyps));
        std::vector<Mask> largest;
        for (Mask h : m.hyperplanes()) {
          if (popcount(h) == k) largest.push_back(h);
        }
        const Certificate cert = certificate(m, canon);
        UnionFind orbits_on_largest(largest.size());
        for (const auto& gen : cert.generators) {
          for (std::size_t i = 0; i < largest.size(); ++i) {
            const Mask image = permute_mask(largest[i], gen);
            orbits_on_largest.unite(i, static_cast<std::size_t>(std::lower_bound(largest.begin(), largest.end(), image) - largest.begin()));
          }
        }
        std::int64_t c = 0;
        for (std::size_t i = 0; i < largest.size(); ++i) c += orbits_on_largest.find(i) == i ? 1 : 0;
        buckets[{k, static_cast<int>(largest.size())}] += boost::rational<std::int64_t>(1, c);
      }
    }
  }
  return buckets;
}

std::uint64_t count_paving(int n, int rank) {
  const IsetEnumeration sparse = enumerate_isets_orderly(johnson_graph(n, rank));
  boost::rational<std::int64_t> total(static_cast<std::int64_t>(sparse.total()));
  for (const auto& [key, weight] : count_nonsparse_paving(n, rank)) total += weight;
  if (total.denominator() != 1) throw Error("paving weights did not sum to an integer");
  return static_cast<std::uint64_t>(total.numerator());
}

EstimateReport estimate_iset_count(const JohnsonGraph& g, int prefix_size, double sample_fraction, std::uint64_t seed) {
  if (sample_fraction <= 0 || sample_fraction > 1) throw std::invalid_argument("sample fraction must lie in (0, 1]");
  const OrbitProblem p = johnson_problem(g);
  IsetOptions options;
  options.max_size = prefix_size;
  options.keep_representatives = true;
  const IsetEnumeration prefix = enumerate_iset_orbits(p, options);
  EstimateReport report;
  report.seed = seed;
  for (int s = 0; s < prefix_size && s < static_cast<int>(prefix.classes_by_size.size()); ++s) {
    report.exact_below_prefix += prefix.classes_by_size[s];
  }
  if (prefix_size >= static_cast<int>(prefix.representatives.size())) {
    report.estimate = static_cast<double>(report.exact_below_prefix);
    return report;
  }
  const auto& frontier = prefix.representatives[prefix_size];
  report.prefix_classes = frontier.size();
  const auto want = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_fraction * static_cast<double>(frontier.size()))));
  std::vector<std::vector<Mask>> sample;
  std::mt19937_64 rng(seed);
  std::sample(frontier.begin(), frontier.end(), std::back_inserter(sample), want, rng);
  report.sampled = sample.size();
  report.fraction = static_cast<double>(sample.size()) / static_cast<double>(frontier.size());
  const OrbitEngine engine(p, {});
  std::vector<std::uint64_t> sizes(sample.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < sample.size(); ++i) sizes[i] = engine.subtree(sample[i]);
  report.sampled_subtree_total = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
  report.estimate = static_cast<double>(report.exact_below_prefix) +
                    static_cast<double>(report.sampled_subtree_total) / report.fraction;
  return report;
}

}  // namespace matcat
