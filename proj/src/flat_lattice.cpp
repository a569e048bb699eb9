#include "matcat/flat_lattice.hpp"

#include <algorithm>
#include <bit>

#include "matcat/errors.hpp"

namespace matcat {

std::size_t FlatSet::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool FlatSet::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<int> FlatSet::indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) out.push_back(static_cast<int>(i));
  }
  return out;
}

int FlatLatticeGraph::index_of(Mask flat) const {
  // Flats of one rank are contiguous and sorted, but the rank of an arbitrary
  // mask is unknown here, so search every level.
  for (int k = 0; k + 1 < static_cast<int>(level_start.size()); ++k) {
    const auto first = flats.begin() + level_start[k];
    const auto last = flats.begin() + level_start[k + 1];
    const auto it = std::lower_bound(first, last, flat);
    if (it != last && *it == flat) return static_cast<int>(it - flats.begin());
  }
  return -1;
}

std::size_t FlatLatticeGraph::cover_edge_count() const {
  std::size_t edges = 0;
  for (const auto& row : upper) edges += row.size();
  return edges;
}

FlatLatticeGraph build_lattice(const Matroid& m) {
  FlatLatticeGraph lat;
  lat.n = m.size();
  lat.rank = m.rank();
  const FlatsByRank levels = flats(m);
  for (int k = 0; k < static_cast<int>(levels.levels.size()); ++k) {
    lat.level_start.push_back(static_cast<int>(lat.flats.size()));
    for (Mask f : levels.levels[k]) {
      lat.flats.push_back(f);
      lat.flat_rank.push_back(k);
    }
  }
  lat.level_start.push_back(static_cast<int>(lat.flats.size()));
  const int z = static_cast<int>(lat.flats.size());
  lat.upper.assign(z, {});
  lat.lower.assign(z, {});
  lat.comparable.assign(z, {});
  for (int i = 0; i < z; ++i) {
    for (int j = i + 1; j < z; ++j) {
      if (lat.flat_rank[j] == lat.flat_rank[i]) continue;
      if ((lat.flats[i] & lat.flats[j]) != lat.flats[i]) continue;
      lat.comparable[i].push_back(j);
      lat.comparable[j].push_back(i);
      if (lat.flat_rank[j] == lat.flat_rank[i] + 1) {
        lat.upper[i].push_back(j);
        lat.lower[j].push_back(i);
      }
    }
  }
  for (auto& row : lat.comparable) std::sort(row.begin(), row.end());
  return lat;
}

bool is_modular_pair(const RankOracle& oracle, Mask f, Mask g) {
  return oracle.rank(f) + oracle.rank(g) == oracle.rank(f | g) + oracle.rank(f & g);
}

bool is_modular_pair(const Matroid& m, Mask f, Mask g) { return is_modular_pair(RankOracle(m), f, g); }

namespace {

void antichain_step(const FlatLatticeGraph& lat, std::vector<int>& chosen, std::vector<int>& blocked, int next,
                    const std::function<void(const std::vector<int>&)>& visit) {
  visit(chosen);
  const int z = static_cast<int>(lat.size());
  for (int v = next; v < z; ++v) {
    if (blocked[v]) continue;
    chosen.push_back(v);
    for (int u : lat.comparable[v]) ++blocked[u];
    antichain_step(lat, chosen, blocked, v + 1, visit);
    for (int u : lat.comparable[v]) --blocked[u];
    chosen.pop_back();
  }
}

}  // namespace

void for_each_antichain(const FlatLatticeGraph& lat, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> chosen;
  std::vector<int> blocked(lat.size(), 0);
  antichain_step(lat, chosen, blocked, 0, visit);
}

std::uint64_t count_antichains(const FlatLatticeGraph& lat) {
  std::uint64_t total = 0;
  for_each_antichain(lat, [&](const std::vector<int>&) { ++total; });
  return total;
}

FlatSet up_set(const FlatLatticeGraph& lat, const std::vector<int>& generators) {
  FlatSet members(lat.size());
  std::vector<int> stack(generators.begin(), generators.end());
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    if (members.test(f)) continue;
    members.set(f);
    for (int u : lat.upper[f]) stack.push_back(u);
  }
  return members;
}

bool is_modular_cut(const FlatLatticeGraph& lat, const RankOracle& oracle, const FlatSet& members) {
  if (members.size() != lat.size()) return false;
  const std::vector<int> in = members.indices();
  for (int f : in) {
    for (int u : lat.upper[f]) {
      if (!members.test(u)) return false;
    }
  }
  for (std::size_t a = 0; a < in.size(); ++a) {
    for (std::size_t b = a + 1; b < in.size(); ++b) {
      const Mask f = lat.flats[in[a]];
      const Mask g = lat.flats[in[b]];
      if (!is_modular_pair(oracle, f, g)) continue;
      if (!members.test(lat.index_of(f & g))) return false;
    }
  }
  return true;
}

ModularCut make_cut(const FlatLatticeGraph& lat, FlatSet members) {
  ModularCut cut;
  for (int f : members.indices()) {
    bool minimal = true;
    for (int l : lat.lower[f]) minimal = minimal && !members.test(l);
    if (minimal) cut.minimal.push_back(f);
  }
  cut.members = std::move(members);
  return cut;
}

ModularCutSearch::ModularCutSearch(const FlatLatticeGraph& lat, const RankOracle& oracle)
    : lat_(lat), size_(lat.size()), meet_(size_ * size_, 0), modular_(size_ * size_, 0), in_(size_),
      out_(size_, 0) {
  for (std::size_t a = 0; a < size_; ++a) {
    for (std::size_t b = a; b < size_; ++b) {
      const Mask f = lat.flats[a];
      const Mask g = lat.flats[b];
      const int m = lat.index_of(f & g);
      const char mod = is_modular_pair(oracle, f, g) ? 1 : 0;
      meet_[a * size_ + b] = meet_[b * size_ + a] = m;
      modular_[a * size_ + b] = modular_[b * size_ + a] = mod;
    }
  }
}

bool ModularCutSearch::include(int flat) {
  // Incremental closure: up-closure through covers plus modular meets with
  // every current member. Fails when an excluded flat is forced in.
  std::size_t head = log_.size();
  auto add = [&](int f) {
    if (in_.test(f)) return true;
    if (out_[f]) return false;
    in_.set(f);
    log_.push_back(f);
    return true;
  };
  if (!add(flat)) return false;
  while (head < log_.size()) {
    const int f = log_[head++];
    for (int u : lat_.upper[f]) {
      if (!add(u)) return false;
    }
    for (int g : members_) {
      if (modular(f, g) && !add(meet(f, g))) return false;
    }
    members_.push_back(f);
  }
  return true;
}

void ModularCutSearch::undo(std::size_t log_size, std::size_t member_count) {
  while (log_.size() > log_size) {
    in_.reset(log_.back());
    log_.pop_back();
  }
  members_.resize(member_count);
}

void ModularCutSearch::descend(int index, const std::function<void(const FlatSet&)>& visit) {
  if (index < 0) {
    visit(in_);
    return;
  }
  if (in_.test(index)) {
    descend(index - 1, visit);
    return;
  }
  out_[index] = 1;
  descend(index - 1, visit);
  out_[index] = 0;
  const std::size_t log_size = log_.size();
  const std::size_t member_count = members_.size();
  if (include(index)) descend(index - 1, visit);
  undo(log_size, member_count);
}

void ModularCutSearch::run(const std::function<void(const FlatSet&)>& visit) {
  descend(static_cast<int>(size_) - 1, visit);
}

std::vector<ModularCut> modular_cuts(const FlatLatticeGraph& lat, const RankOracle& oracle) {
  std::vector<ModularCut> cuts;
  ModularCutSearch search(lat, oracle);
  search.run([&](const FlatSet& members) { cuts.push_back(make_cut(lat, members)); });
  return cuts;
}

std::vector<ModularCut> modular_cuts(const Matroid& m) {
  const FlatLatticeGraph lat = build_lattice(m);
  return modular_cuts(lat, RankOracle(m));
}

std::vector<ModularCut> modular_cuts_by_antichains(const FlatLatticeGraph& lat, const RankOracle& oracle) {
  std::vector<ModularCut> cuts;
  for_each_antichain(lat, [&](const std::vector<int>& antichain) {
    FlatSet members = up_set(lat, antichain);
    if (is_modular_cut(lat, oracle, members)) cuts.push_back(make_cut(lat, std::move(members)));
  });
  return cuts;
}

std::vector<int> collar(const FlatLatticeGraph& lat, const ModularCut& cut) {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(lat.size()); ++f) {
    if (cut.members.test(f)) continue;
    for (int u : lat.upper[f]) {
      if (cut.members.test(u)) {
        out.push_back(f);
        break;
      }
    }
  }
  return out;
}

Matroid extend(const Matroid& m, const FlatLatticeGraph& lat, const RankOracle& oracle, const ModularCut& cut) {
  if (!is_modular_cut(lat, oracle, cut.members)) throw InvalidCut("flat set is not a modular cut");
  const int n = m.size();
  const Mask e = bit(n);
  const int new_rank = cut.empty() ? m.rank() + 1 : m.rank();
  std::vector<char> in_collar(lat.size(), 0);
  for (int f : collar(lat, cut)) in_collar[f] = 1;
  // New flats with their ranks: F (cut excluded) and F+e (collar excluded).
  std::vector<Mask> hyps;
  for (int f = 0; f < static_cast<int>(lat.size()); ++f) {
    const bool in_cut = cut.members.test(f);
    const int r = lat.flat_rank[f];
    if (!in_cut && r == new_rank - 1) hyps.push_back(lat.flats[f]);
    if (in_collar[f]) continue;
    const int r_with_e = in_cut ? r : r + 1;
    if (r_with_e == new_rank - 1) hyps.push_back(lat.flats[f] | e);
  }
  std::sort(hyps.begin(), hyps.end());
  return Matroid::trusted(n + 1, new_rank, std::move(hyps));
}

Matroid extend(const Matroid& m, const ModularCut& cut) {
  const FlatLatticeGraph lat = build_lattice(m);
  return extend(m, lat, RankOracle(m), cut);
}

Matroid extension_from_cut(const FlatLatticeGraph& lat, const FlatSet& cut) {
  const Mask e = bit(lat.n);
  const int r = lat.rank;
  std::vector<Mask> hyps;
  if (cut.none()) {
    hyps.push_back(lat.flats[lat.top()]);
    if (r >= 1) {
      for (int f = lat.level_start[r - 1]; f < lat.level_start[r]; ++f) hyps.push_back(lat.flats[f] | e);
    }
    std::sort(hyps.begin(), hyps.end());
    return Matroid::trusted(lat.n + 1, r + 1, std::move(hyps));
  }
  if (r >= 1) {
    for (int f = lat.level_start[r - 1]; f < lat.level_start[r]; ++f) {
      hyps.push_back(cut.test(f) ? lat.flats[f] | e : lat.flats[f]);
    }
  }
  if (r >= 2) {
    for (int f = lat.level_start[r - 2]; f < lat.level_start[r - 1]; ++f) {
      if (cut.test(f)) continue;
      bool collar = false;
      for (int u : lat.upper[f]) collar = collar || cut.test(u);
      if (!collar) hyps.push_back(lat.flats[f] | e);
    }
  }
  std::sort(hyps.begin(), hyps.end());
  return Matroid::trusted(lat.n + 1, r, std::move(hyps));
}

}  // namespace matcat
