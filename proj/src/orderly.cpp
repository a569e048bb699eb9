#include "matcat/orderly.hpp"

#include <omp.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include "matcat/errors.hpp"
#include "matcat/flat_lattice.hpp"

namespace matcat {

namespace {

constexpr char kCheckpointMagic[8] = {'M', 'C', 'A', 'T', 'E', 'N', 'U', 'M'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError(0, "truncated checkpoint");
  return value;
}

void sort_unique(std::vector<Matroid>& level) {
  std::sort(level.begin(), level.end());
  level.erase(std::unique(level.begin(), level.end()), level.end());
}

}  // namespace

std::vector<Matroid> extend_all(const Matroid& parent, const CanonOptions& canon, ExtendStats& stats) {
  const FlatLatticeGraph lat = build_lattice(parent);
  const RankOracle oracle(parent);
  const int added = parent.size();
  std::vector<Matroid> children;
  ModularCutSearch search(lat, oracle);
  search.run([&](const FlatSet& cut) {
    ++stats.cuts;
    const Matroid child = extension_from_cut(lat, cut);
    const SetSystem sys{child.size(), child.hyperplanes(), {}};
    if (!(first_root_cell(sys) & bit(added))) {
      ++stats.quick_rejects;
      return;
    }
    ++stats.labelled;
    const Certificate cert = certificate(child, canon);
    if (cert.element_orbits[added] != cert.element_orbits[cert.canonical_order[0]]) return;
    ++stats.accepted;
    children.push_back(matroid_from_certificate(cert.bytes));
  });
  sort_unique(children);
  return children;
}

std::vector<Matroid> extend_all(const Matroid& parent, const CanonOptions& canon) {
  ExtendStats stats;
  return extend_all(parent, canon, stats);
}

void write_checkpoint(const std::string& path, const EnumCheckpoint& state) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp);
    out.write(kCheckpointMagic, sizeof kCheckpointMagic);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(state.parent_size));
    put<std::uint64_t>(out, state.parent_count);
    put<std::uint64_t>(out, state.parents_done);
    put<std::uint64_t>(out, state.children.size());
    for (const Matroid& m : state.children) {
      put<std::uint8_t>(out, static_cast<std::uint8_t>(m.size()));
      put<std::uint8_t>(out, static_cast<std::uint8_t>(m.rank()));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(m.hyperplanes().size()));
      for (Mask h : m.hyperplanes()) put<std::uint16_t>(out, static_cast<std::uint16_t>(h));
    }
    if (!out) throw IoError("short write to checkpoint " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace checkpoint " + path + ": " + ec.message());
}

EnumCheckpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  char magic[sizeof kCheckpointMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) throw FormatError(0, "bad checkpoint magic");
  if (get<std::uint32_t>(in) != kCheckpointVersion) throw FormatError(0, "unsupported checkpoint version");
  EnumCheckpoint state;
  state.parent_size = static_cast<int>(get<std::uint32_t>(in));
  state.parent_count = get<std::uint64_t>(in);
  state.parents_done = get<std::uint64_t>(in);
  const auto count = get<std::uint64_t>(in);
  state.children.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const int n = get<std::uint8_t>(in);
    const int rank = get<std::uint8_t>(in);
    const auto h = get<std::uint32_t>(in);
    std::vector<Mask> hyps(h);
    for (auto& mask : hyps) mask = get<std::uint16_t>(in);
    state.children.push_back(Matroid::trusted(n, rank, std::move(hyps)));
  }
  return state;
}

std::vector<Matroid> next_level(const std::vector<Matroid>& all_parents, const EnumOptions& options) {
  const int parent_size = all_parents.empty() ? 0 : all_parents.front().size();
  const int child_size = parent_size + 1;
  // Extensions never lower the rank, so the lower half of the child level
  // comes from the lower half of the parents.
  const int max_rank = options.dual_completion ? child_size / 2 : child_size;
  std::vector<Matroid> parents;
  for (const Matroid& p : all_parents) {
    if (p.rank() <= max_rank) parents.push_back(p);
  }
  EnumCheckpoint state;
  state.parent_size = parent_size;
  state.parent_count = parents.size();
  if (!options.checkpoint_path.empty() && std::filesystem::exists(options.checkpoint_path)) {
    EnumCheckpoint saved = read_checkpoint(options.checkpoint_path);
    if (saved.parent_size == parent_size && saved.parent_count == parents.size()) state = std::move(saved);
  }
  const std::size_t batch = std::max<std::size_t>(1, options.batch);
  if (options.parallel && options.jobs > 0) omp_set_num_threads(options.jobs);
  for (std::size_t begin = state.parents_done; begin < parents.size(); begin += batch) {
    const std::size_t end = std::min(parents.size(), begin + batch);
    std::vector<std::vector<Matroid>> slots(end - begin);
    if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::size_t i = begin; i < end; ++i) slots[i - begin] = extend_all(parents[i], options.canon);
    } else {
      for (std::size_t i = begin; i < end; ++i) slots[i - begin] = extend_all(parents[i], options.canon);
    }
    for (auto& slot : slots) {
      state.children.insert(state.children.end(), std::make_move_iterator(slot.begin()),
                            std::make_move_iterator(slot.end()));
    }
    state.parents_done = end;
    if (!options.checkpoint_path.empty()) write_checkpoint(options.checkpoint_path, state);
    if (options.progress) options.progress(end, parents.size());
  }
  std::vector<Matroid> level = std::move(state.children);
  if (options.dual_completion) {
    std::erase_if(level, [&](const Matroid& m) { return m.rank() > max_rank; });
    std::vector<Matroid> lower;
    for (const Matroid& m : level) {
      if (m.rank() < child_size - max_rank) lower.push_back(m);
    }
    std::vector<Matroid> duals(lower.size());
#pragma omp parallel for schedule(dynamic, 64) if (options.parallel)
    for (std::size_t i = 0; i < lower.size(); ++i) duals[i] = canonical_form(dual(lower[i]));
    level.insert(level.end(), duals.begin(), duals.end());
  }
  const std::size_t before = level.size();
  sort_unique(level);
  if (level.size() != before) {
    throw Error("canonical-path acceptance produced " + std::to_string(before - level.size()) +
                " duplicate children");
  }
  return level;
}

std::vector<std::vector<Matroid>> enumerate(int max_n, const EnumOptions& options) {
  std::vector<std::vector<Matroid>> levels{{Matroid()}};
  for (int n = 1; n <= max_n; ++n) {
    EnumOptions level_options = options;
    if (!options.checkpoint_path.empty()) level_options.checkpoint_path += ".n" + std::to_string(n);
    levels.push_back(next_level(levels.back(), level_options));
  }
  return levels;
}

std::vector<Matroid> brute_force_enumerate(int n, std::uint64_t* labelled_count) {
  if (n < 0 || n > 5) throw std::invalid_argument("brute force enumeration supports n <= 5");
  const int subsets = (1 << n) - 1;
  // Vertex v stands for the nonempty subset v + 1.
  std::vector<std::vector<int>> comparable(subsets);
  for (int a = 0; a < subsets; ++a) {
    for (int b = 0; b < subsets; ++b) {
      const Mask x = static_cast<Mask>(a + 1);
      const Mask y = static_cast<Mask>(b + 1);
      if (a != b && ((x & y) == x || (x & y) == y)) comparable[a].push_back(b);
    }
  }
  auto eliminates = [](const std::vector<Mask>& family) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const Mask both = family[i] & family[j];
        const Mask either = family[i] | family[j];
        bool ok = true;
        for_each_element(both, [&](int e) {
          const Mask target = either & ~bit(e);
          bool found = false;
          for (Mask c : family) found = found || (c & target) == c;
          ok = ok && found;
        });
        if (!ok) return false;
      }
    }
    return true;
  };
  std::set<std::vector<std::uint8_t>> seen;
  std::vector<Matroid> classes;
  std::uint64_t labelled = 0;
  std::vector<Mask> family;
  std::vector<int> blocked(subsets, 0);
  const Mask ground = full_mask(n);
  std::function<void(int)> step = [&](int next) {
    if (eliminates(family)) {
      ++labelled;
      std::vector<Mask> hyps;
      for (Mask c : family) hyps.push_back(ground & ~c);
      const Matroid m = Matroid::from_hyperplanes(n, std::move(hyps));
      Certificate cert = certificate(m);
      if (seen.insert(cert.bytes).second) classes.push_back(matroid_from_certificate(cert.bytes));
    }
    for (int v = next; v < subsets; ++v) {
      if (blocked[v]) continue;
      family.push_back(static_cast<Mask>(v + 1));
      for (int u : comparable[v]) ++blocked[u];
      step(v + 1);
      for (int u : comparable[v]) --blocked[u];
      family.pop_back();
    }
  };
  step(0);
  if (labelled_count) *labelled_count = labelled;
  std::sort(classes.begin(), classes.end());
  return classes;
}

DualityReport verify_duality_closure(const std::vector<Matroid>& level) {
  DualityReport report;
  report.partner.assign(level.size(), -1);
  for (std::size_t i = 0; i < level.size(); ++i) {
    const Matroid d = canonical_form(dual(level[i]));
    const auto it = std::lower_bound(level.begin(), level.end(), d);
    if (it == level.end() || !(*it == d)) {
      report.closed = false;
      ++report.missing;
      continue;
    }
    report.partner[i] = it - level.begin();
    if (report.partner[i] == static_cast<long>(i)) ++report.self_dual;
  }
  for (std::size_t i = 0; i < level.size(); ++i) {
    const long p = report.partner[i];
    if (p >= 0 && report.partner[p] != static_cast<long>(i)) report.closed = false;
  }
  return report;
}

}  // namespace matcat
