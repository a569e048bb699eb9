#include "matcat/canonical.hpp"

#include <algorithm>
#include <numeric>

#include "matcat/errors.hpp"

namespace matcat {

namespace {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  std::uint64_t z = h + 0x9e3779b97f4a7c15ULL + v * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Compressed adjacency of the point/block incidence graph.
struct Graph {
  int points = 0;
  int vertices = 0;
  std::vector<int> offset;
  std::vector<int> target;
};

Graph build_graph(const SetSystem& sys) {
  Graph g;
  g.points = sys.points;
  g.vertices = sys.points + static_cast<int>(sys.blocks.size());
  std::vector<std::vector<int>> adj(g.vertices);
  for (std::size_t j = 0; j < sys.blocks.size(); ++j) {
    const int bv = sys.points + static_cast<int>(j);
    for_each_element(sys.blocks[j], [&](int x) {
      adj[x].push_back(bv);
      adj[bv].push_back(x);
    });
  }
  g.offset.assign(g.vertices + 1, 0);
  for (int v = 0; v < g.vertices; ++v) g.offset[v + 1] = g.offset[v] + static_cast<int>(adj[v].size());
  g.target.reserve(g.offset.back());
  for (const auto& row : adj) g.target.insert(g.target.end(), row.begin(), row.end());
  return g;
}

/// Ordered partition of the vertices. Cells are contiguous position ranges;
/// start[pos] is the first position of the cell holding pos and end[s] the
/// one-past-last position of the cell starting at s.
struct Partition {
  std::vector<int> lab;
  std::vector<int> inv;
  std::vector<int> start;
  std::vector<int> end;
  int point_cells = 0;
};

class Refiner {
 public:
  explicit Refiner(const Graph& g)
      : g_(g), count_(g.vertices, 0), mark_(g.vertices, 0), queued_(g.vertices, 0) {}

  /// Refines to the coarsest equitable partition below `part`, starting
  /// from the splitter cells in `queue`. Returns a hash of the split trace,
  /// which depends only on isomorphism-invariant data.
  std::uint64_t refine(Partition& part, std::vector<int>& queue) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (int s : queue) queued_[s] = 1;
    std::size_t head = 0;
    while (head < queue.size()) {
      const int s = queue[head++];
      queued_[s] = 0;
      splitter_.assign(part.lab.begin() + s, part.lab.begin() + part.end[s]);
      touched_.clear();
      for (int w : splitter_) {
        for (int k = g_.offset[w]; k < g_.offset[w + 1]; ++k) {
          const int u = g_.target[k];
          if (count_[u]++ == 0) touched_.push_back(u);
        }
      }
      touched_cells_.clear();
      for (int u : touched_) {
        const int c = part.start[part.inv[u]];
        if (!mark_[c]) {
          mark_[c] = 1;
          touched_cells_.push_back(c);
        }
      }
      std::sort(touched_cells_.begin(), touched_cells_.end());
      h = mix(h, static_cast<std::uint64_t>(s));
      for (int c : touched_cells_) {
        mark_[c] = 0;
        split(part, c, queue, h);
      }
      for (int u : touched_) count_[u] = 0;
    }
    return h;
  }

 private:
  void split(Partition& part, int c, std::vector<int>& queue, std::uint64_t& h) {
    const int ce = part.end[c];
    const int first_key = count_[part.lab[c]];
    bool uniform = true;
    for (int i = c + 1; i < ce && uniform; ++i) uniform = count_[part.lab[i]] == first_key;
    if (uniform) {
      h = mix(h, (static_cast<std::uint64_t>(c) << 20) ^ static_cast<std::uint64_t>(first_key));
      return;
    }
    members_.assign(part.lab.begin() + c, part.lab.begin() + ce);
    std::stable_sort(members_.begin(), members_.end(),
                     [&](int a, int b) { return count_[a] < count_[b]; });
    const bool was_queued = queued_[c] != 0;
    auto enqueue = [&](int fs) {
      if (!queued_[fs]) {
        queued_[fs] = 1;
        queue.push_back(fs);
      }
    };
    int fs = c;
    for (int i = c; i < ce; ++i) {
      const int v = members_[i - c];
      if (i > c && count_[v] != count_[members_[i - c - 1]]) {
        part.end[fs] = i;
        h = mix(h, (static_cast<std::uint64_t>(i - fs) << 32) ^ static_cast<std::uint64_t>(count_[members_[i - c - 1]]));
        if (fs != c || !was_queued) enqueue(fs);
        fs = i;
        if (c < g_.points) ++part.point_cells;
      }
      part.lab[i] = v;
      part.inv[v] = i;
      part.start[i] = fs;
    }
    part.end[fs] = ce;
    h = mix(h, (static_cast<std::uint64_t>(ce - fs) << 32) ^ static_cast<std::uint64_t>(count_[members_.back()]));
    if (fs != c || !was_queued) enqueue(fs);
  }

  const Graph& g_;
  std::vector<int> count_;
  std::vector<char> mark_;
  std::vector<char> queued_;
  std::vector<int> splitter_;
  std::vector<int> touched_;
  std::vector<int> touched_cells_;
  std::vector<int> members_;
};

/// Colour partition: points grouped by colour (ascending), then all blocks.
Partition initial_partition(const SetSystem& sys, const Graph& g, std::vector<int>& queue) {
  Partition part;
  const int p = sys.points;
  part.lab.resize(g.vertices);
  part.inv.resize(g.vertices);
  part.start.resize(g.vertices);
  part.end.assign(g.vertices, 0);
  std::iota(part.lab.begin(), part.lab.end(), 0);
  auto color = [&](int x) { return sys.point_colors.empty() ? 0 : sys.point_colors[x]; };
  std::stable_sort(part.lab.begin(), part.lab.begin() + p,
                   [&](int a, int b) { return color(a) < color(b); });
  queue.clear();
  int fs = 0;
  for (int i = 0; i <= p; ++i) {
    if (i == p || (i > fs && color(part.lab[i]) != color(part.lab[fs]))) {
      if (i > fs) {
        part.end[fs] = i;
        queue.push_back(fs);
        ++part.point_cells;
      }
      fs = i;
    }
    if (i < p) part.start[i] = fs;
  }
  if (g.vertices > p) {
    for (int i = p; i < g.vertices; ++i) part.start[i] = p;
    part.end[p] = g.vertices;
    queue.push_back(p);
  }
  for (int i = 0; i < g.vertices; ++i) part.inv[part.lab[i]] = i;
  return part;
}

void individualize(Partition& part, int v, int points, std::vector<int>& queue) {
  const int pos = part.inv[v];
  const int s = part.start[pos];
  const int e = part.end[s];
  const int u = part.lab[s];
  part.lab[s] = v;
  part.inv[v] = s;
  part.lab[pos] = u;
  part.inv[u] = pos;
  part.end[s] = s + 1;
  for (int i = s + 1; i < e; ++i) part.start[i] = s + 1;
  part.end[s + 1] = e;
  if (s < points) ++part.point_cells;
  queue.assign(1, s);
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

int lexicographic_compare(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                          std::size_t length) {
  const std::size_t limit = std::min({length, a.size(), b.size()});
  for (std::size_t i = 0; i < limit; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

class Search {
 public:
  Search(const SetSystem& sys, const CanonOptions& options)
      : sys_(sys), g_(build_graph(sys)), refiner_(g_), options_(options) {}

  CanonicalLabeling run() {
    std::vector<int> queue;
    Partition root = initial_partition(sys_, g_, queue);
    std::vector<std::uint64_t> trace{refiner_.refine(root, queue)};
    std::vector<int> path;
    explore(root, trace, path);
    return finish();
  }

 private:
  struct Leaf {
    std::vector<int> lab;
    std::vector<Mask> form;
    std::vector<std::uint64_t> trace;
    std::vector<int> path;
  };

  std::vector<Mask> leaf_form(const Partition& part) const {
    std::vector<Mask> form;
    form.reserve(sys_.blocks.size());
    for (Mask block : sys_.blocks) {
      Mask relabelled = 0;
      for_each_element(block, [&](int x) { relabelled |= bit(part.inv[x]); });
      form.push_back(relabelled);
    }
    std::sort(form.begin(), form.end());
    return form;
  }

  /// Automorphism carrying the labelling of `from` onto that of `to`.
  std::vector<int> automorphism(const std::vector<int>& from, const std::vector<int>& to) const {
    std::vector<int> perm(sys_.points);
    for (int i = 0; i < sys_.points; ++i) perm[from[i]] = to[i];
    return perm;
  }

  void add_generator(std::vector<int> perm) {
    bool identity = true;
    for (int i = 0; i < sys_.points && identity; ++i) identity = perm[i] == i;
    if (!identity) generators_.push_back(std::move(perm));
  }

  /// Orbits of the subgroup generated by the known generators that fix
  /// every point of `path`.
  UnionFind stabilizer_orbits(const std::vector<int>& path) const {
    UnionFind uf(sys_.points);
    for (const auto& gen : generators_) {
      bool fixes = true;
      for (int x : path) fixes = fixes && gen[x] == x;
      if (!fixes) continue;
      for (int x = 0; x < sys_.points; ++x) uf.unite(x, gen[x]);
    }
    return uf;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    int j = 0;
    while (j < static_cast<int>(a.size()) && j < static_cast<int>(b.size()) && a[j] == b[j]) ++j;
    return j;
  }

  int explore(const Partition& part, std::vector<std::uint64_t>& trace, std::vector<int>& path) {
    const int depth = static_cast<int>(path.size());
    if (++nodes_ > options_.node_budget) {
      throw BudgetExceeded("canonical labelling exceeded " + std::to_string(options_.node_budget) +
                           " search nodes");
    }
    bool equals_first = false;
    if (have_first_) {
      equals_first = trace.size() <= first_.trace.size() &&
                     lexicographic_compare(trace, first_.trace, trace.size()) == 0;
      if (!equals_first && lexicographic_compare(trace, best_.trace, trace.size()) < 0) {
        return depth - 1;
      }
    }
    const int p = sys_.points;
    if (part.point_cells == p) return visit_leaf(part, trace, path, equals_first);

    // Target cell: first smallest non-singleton cell among the points.
    int target = -1;
    int target_size = p + 1;
    for (int s = 0; s < p; s = part.end[s]) {
      const int size = part.end[s] - s;
      if (size > 1 && size < target_size) {
        target = s;
        target_size = size;
      }
    }
    std::vector<int> cell(part.lab.begin() + target, part.lab.begin() + target + target_size);
    std::sort(cell.begin(), cell.end());
    if (!have_first_) first_path_cells_.push_back(cell);

    std::vector<int> explored;
    std::size_t known_generators = 0;
    std::optional<UnionFind> orbits;
    std::vector<int> queue;
    for (int v : cell) {
      if (!explored.empty()) {
        if (!orbits || known_generators != generators_.size()) {
          orbits.emplace(stabilizer_orbits(path));
          known_generators = generators_.size();
        }
        const int root = orbits->find(v);
        bool pruned = false;
        for (int u : explored) pruned = pruned || orbits->find(u) == root;
        if (pruned) continue;
      }
      Partition child = part;
      individualize(child, v, p, queue);
      const std::uint64_t h = mix(refiner_.refine(child, queue), static_cast<std::uint64_t>(target_size));
      trace.push_back(mix(h, static_cast<std::uint64_t>(target)));
      path.push_back(v);
      const int resume = explore(child, trace, path);
      trace.pop_back();
      path.pop_back();
      explored.push_back(v);
      if (resume < depth) return resume;
    }
    return depth - 1;
  }

  int visit_leaf(const Partition& part, const std::vector<std::uint64_t>& trace, const std::vector<int>& path,
                 bool equals_first) {
    const int depth = static_cast<int>(path.size());
    Leaf leaf{std::vector<int>(part.lab.begin(), part.lab.begin() + sys_.points), leaf_form(part), trace, path};
    if (!have_first_) {
      have_first_ = true;
      first_ = leaf;
      best_ = std::move(leaf);
      return depth - 1;
    }
    if (equals_first && leaf.form == first_.form) {
      add_generator(automorphism(first_.lab, leaf.lab));
      return common_prefix(path, first_.path);
    }
    int cmp = lexicographic_compare(leaf.trace, best_.trace, std::max(leaf.trace.size(), best_.trace.size()));
    if (cmp == 0 && leaf.trace.size() != best_.trace.size()) cmp = leaf.trace.size() < best_.trace.size() ? -1 : 1;
    if (cmp == 0) cmp = leaf.form == best_.form ? 0 : (leaf.form < best_.form ? -1 : 1);
    if (cmp == 0) {
      add_generator(automorphism(best_.lab, leaf.lab));
      return common_prefix(path, best_.path);
    }
    if (cmp > 0) best_ = std::move(leaf);
    return depth - 1;
  }

  CanonicalLabeling finish() {
    CanonicalLabeling out;
    const int p = sys_.points;
    out.order = best_.lab;
    out.label.assign(p, 0);
    for (int i = 0; i < p; ++i) out.label[out.order[i]] = i;
    out.form = best_.form;
    if (!sys_.point_colors.empty()) {
      for (int i = 0; i < p; ++i) out.colors.push_back(sys_.point_colors[out.order[i]]);
    }
    UnionFind all(p);
    for (const auto& gen : generators_) {
      for (int x = 0; x < p; ++x) all.unite(x, gen[x]);
    }
    out.orbit.resize(p);
    for (int x = 0; x < p; ++x) out.orbit[x] = all.find(x);
    // Orbit-stabilizer along the first path gives the group order.
    std::uint64_t order = 1;
    for (std::size_t level = 0; level < first_path_cells_.size(); ++level) {
      const std::vector<int> prefix(first_.path.begin(), first_.path.begin() + static_cast<long>(level));
      UnionFind uf = stabilizer_orbits(prefix);
      const int root = uf.find(first_.path[level]);
      std::uint64_t size = 0;
      for (int v : first_path_cells_[level]) size += uf.find(v) == root ? 1 : 0;
      order *= size;
    }
    out.group_order = order;
    out.generators = std::move(generators_);
    out.nodes = nodes_;
    return out;
  }

  const SetSystem& sys_;
  Graph g_;
  Refiner refiner_;
  CanonOptions options_;
  bool have_first_ = false;
  Leaf first_;
  Leaf best_;
  std::vector<std::vector<int>> first_path_cells_;
  std::vector<std::vector<int>> generators_;
  std::size_t nodes_ = 0;
};

}  // namespace

CanonicalLabeling canonical_labeling(const SetSystem& system, const CanonOptions& options) {
  Search search(system, options);
  return search.run();
}

Mask first_root_cell(const SetSystem& system) {
  const Graph g = build_graph(system);
  Refiner refiner(g);
  std::vector<int> queue;
  Partition root = initial_partition(system, g, queue);
  refiner.refine(root, queue);
  Mask cell = 0;
  if (system.points == 0) return cell;
  for (int i = 0; i < root.end[0]; ++i) cell |= bit(root.lab[i]);
  return cell;
}

std::optional<std::vector<int>> orbit_witness(const std::vector<std::vector<int>>& generators, int points, int a,
                                              int b) {
  // Breadth-first search over the Schreier graph, carrying the permutation
  // that sends a to each reached point.
  std::vector<std::vector<int>> reach(points);
  std::vector<int> frontier{a};
  reach[a].resize(points);
  std::iota(reach[a].begin(), reach[a].end(), 0);
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const int x = frontier[head];
    if (x == b) return reach[x];
    for (const auto& gen : generators) {
      const int y = gen[x];
      if (!reach[y].empty()) continue;
      reach[y].resize(points);
      for (int i = 0; i < points; ++i) reach[y][i] = gen[reach[x][i]];
      frontier.push_back(y);
    }
  }
  return std::nullopt;
}

std::size_t HyperplaneGraph::edge_count() const {
  std::size_t edges = 0;
  for (Mask h : incidence) edges += static_cast<std::size_t>(popcount(h));
  return edges;
}

SetSystem HyperplaneGraph::as_set_system() const { return SetSystem{n_elements, incidence, {}}; }

HyperplaneGraph hyperplane_graph(const Matroid& m) {
  return HyperplaneGraph{m.size(), static_cast<int>(m.hyperplanes().size()), m.hyperplanes()};
}

int Certificate::orbit_count() const {
  int count = 0;
  for (std::size_t i = 0; i < element_orbits.size(); ++i) count += element_orbits[i] == static_cast<int>(i) ? 1 : 0;
  return count;
}

Certificate certificate(const Matroid& m, const CanonOptions& options) {
  const SetSystem sys{m.size(), m.hyperplanes(), {}};
  CanonicalLabeling lab = canonical_labeling(sys, options);
  Certificate cert;
  cert.bytes.reserve(2 + 2 * lab.form.size());
  cert.bytes.push_back(static_cast<std::uint8_t>(m.size()));
  cert.bytes.push_back(static_cast<std::uint8_t>(m.rank()));
  for (Mask h : lab.form) {
    cert.bytes.push_back(static_cast<std::uint8_t>(h >> 8));
    cert.bytes.push_back(static_cast<std::uint8_t>(h & 0xff));
  }
  cert.element_orbits = std::move(lab.orbit);
  cert.aut_order = lab.group_order;
  cert.canonical_order = std::move(lab.order);
  cert.generators = std::move(lab.generators);
  return cert;
}

Matroid matroid_from_certificate(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes.size() % 2 != 0) throw std::invalid_argument("malformed certificate");
  std::vector<Mask> hyps;
  for (std::size_t i = 2; i < bytes.size(); i += 2) hyps.push_back((Mask{bytes[i]} << 8) | bytes[i + 1]);
  return Matroid::trusted(bytes[0], bytes[1], std::move(hyps));
}

Matroid canonical_form(const Matroid& m) { return matroid_from_certificate(certificate(m).bytes); }

bool is_isomorphic(const Matroid& a, const Matroid& b) {
  if (a.size() != b.size() || a.rank() != b.rank() || a.hyperplanes().size() != b.hyperplanes().size()) {
    return false;
  }
  return certificate(a).bytes == certificate(b).bytes;
}

int distinguished_element(const Matroid& m) {
  if (m.size() == 0) throw EmptyGroundSet("the empty matroid has no distinguished element");
  return certificate(m).canonical_order[0];
}

}  // namespace matcat
