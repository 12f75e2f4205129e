#include "optdesign/canonical.hpp"

#include <algorithm>
#include <bit>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

using Mask = std::uint16_t;

struct Partition {
  std::array<Mask, kMaxCanonicalOrder> cells{};
  int count = 0;
};

int lowest(Mask m) { return std::countr_zero(static_cast<unsigned>(m)); }

/// Splits cells by neighbour counts into every other cell until the ordered
/// partition is equitable. Only cell positions and counts steer the splitting,
/// so the result commutes with relabelling.
void refine(const SmallGraph& g, Partition& p) {
  bool changed = true;
  while (changed && p.count < g.n) {
    changed = false;
    for (int s = 0; s < p.count && p.count < g.n; ++s) {
      const Mask splitter = p.cells[static_cast<std::size_t>(s)];
      for (int c = 0; c < p.count; ++c) {
        const Mask cell = p.cells[static_cast<std::size_t>(c)];
        if ((cell & (cell - 1)) == 0) continue;
        std::array<Mask, kMaxCanonicalOrder + 1> buckets{};
        int lo = kMaxCanonicalOrder + 1;
        int hi = -1;
        for (Mask rest = cell; rest; rest &= static_cast<Mask>(rest - 1)) {
          const int x = lowest(rest);
          const int cnt = std::popcount(static_cast<unsigned>(g.adj[static_cast<std::size_t>(x)] & splitter));
          buckets[static_cast<std::size_t>(cnt)] |= static_cast<Mask>(1U << x);
          lo = std::min(lo, cnt);
          hi = std::max(hi, cnt);
        }
        if (lo == hi) continue;
        std::array<Mask, kMaxCanonicalOrder> parts{};
        int nparts = 0;
        for (int cnt = lo; cnt <= hi; ++cnt)
          if (buckets[static_cast<std::size_t>(cnt)]) parts[static_cast<std::size_t>(nparts++)] = buckets[static_cast<std::size_t>(cnt)];
        for (int i = p.count - 1; i > c; --i)
          p.cells[static_cast<std::size_t>(i + nparts - 1)] = p.cells[static_cast<std::size_t>(i)];
        for (int i = 0; i < nparts; ++i) p.cells[static_cast<std::size_t>(c + i)] = parts[static_cast<std::size_t>(i)];
        p.count += nparts - 1;
        c += nparts - 1;
        changed = true;
      }
    }
  }
}

bool less_rows(const SmallGraph& a, const SmallGraph& b) {
  for (int i = 0; i < a.n; ++i)
    if (a.adj[static_cast<std::size_t>(i)] != b.adj[static_cast<std::size_t>(i)])
      return a.adj[static_cast<std::size_t>(i)] < b.adj[static_cast<std::size_t>(i)];
  return false;
}

struct UnionFind16 {
  std::array<std::int8_t, kMaxCanonicalOrder> parent{};
  explicit UnionFind16(int n) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(i);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[static_cast<std::size_t>(a)] = static_cast<std::int8_t>(b);
  }
};

class Search {
 public:
  explicit Search(const SmallGraph& g) : g_(g) {}

  Labeling run() {
    Partition root;
    if (g_.n > 0) {
      root.cells[0] = static_cast<Mask>((1U << g_.n) - 1);
      root.count = 1;
    }
    refine(g_, root);
    visit(root, 0);

    Labeling out;
    out.order = best_order_;
    for (int i = 0; i < g_.n; ++i)
      out.position[static_cast<std::size_t>(best_order_[static_cast<std::size_t>(i)])] = static_cast<std::int8_t>(i);
    out.canonical = best_;
    out.generators = std::move(generators_);
    return out;
  }

 private:
  /// Returns the depth whose node should resume; a value below the caller's
  /// depth unwinds further.
  int visit(const Partition& p, int depth) {
    if (p.count == g_.n) return leaf(p, depth);

    int target = 0;
    while (std::popcount(static_cast<unsigned>(p.cells[static_cast<std::size_t>(target)])) == 1) ++target;
    const Mask cell = p.cells[static_cast<std::size_t>(target)];

    Mask explored = 0;
    for (Mask rest = cell; rest; rest &= static_cast<Mask>(rest - 1)) {
      const int v = lowest(rest);
      if (explored && in_explored_orbit(v, explored, depth)) continue;
      explored |= static_cast<Mask>(1U << v);

      Partition child = p;
      for (int i = child.count - 1; i > target; --i) child.cells[static_cast<std::size_t>(i + 1)] = child.cells[static_cast<std::size_t>(i)];
      child.cells[static_cast<std::size_t>(target)] = static_cast<Mask>(1U << v);
      child.cells[static_cast<std::size_t>(target + 1)] = static_cast<Mask>(cell & ~(1U << v));
      ++child.count;
      refine(g_, child);

      path_[static_cast<std::size_t>(depth)] = static_cast<std::int8_t>(v);
      const int resume = visit(child, depth + 1);
      if (resume < depth) return resume;
    }
    return depth - 1;
  }

  bool in_explored_orbit(int v, Mask explored, int depth) const {
    UnionFind16 uf(g_.n);
    bool any = false;
    for (const auto& gen : generators_) {
      bool fixes = true;
      for (int i = 0; i < depth && fixes; ++i) {
        const auto w = path_[static_cast<std::size_t>(i)];
        fixes = gen[static_cast<std::size_t>(w)] == w;
      }
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < g_.n; ++x) uf.unite(x, gen[static_cast<std::size_t>(x)]);
    }
    if (!any) return false;
    const int root = uf.find(v);
    for (Mask rest = explored; rest; rest &= static_cast<Mask>(rest - 1))
      if (uf.find(lowest(rest)) == root) return true;
    return false;
  }

  int leaf(const Partition& p, int depth) {
    Permutation order{};
    Permutation position{};
    for (int i = 0; i < g_.n; ++i) {
      const int v = lowest(p.cells[static_cast<std::size_t>(i)]);
      order[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(v);
      position[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(i);
    }
    SmallGraph relabeled;
    relabeled.n = g_.n;
    for (int i = 0; i < g_.n; ++i) {
      Mask row = 0;
      for (Mask rest = g_.adj[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]; rest;
           rest &= static_cast<Mask>(rest - 1))
        row |= static_cast<Mask>(1U << position[static_cast<std::size_t>(lowest(rest))]);
      relabeled.adj[static_cast<std::size_t>(i)] = row;
    }

    if (!have_first_) {
      have_first_ = true;
      first_ = best_ = relabeled;
      first_order_ = best_order_ = order;
      first_path_ = best_path_ = path_;
      first_depth_ = best_depth_ = depth;
      return depth - 1;
    }
    if (relabeled == first_) {
      record_automorphism(first_order_, order);
      return common_prefix(first_path_, first_depth_, depth);
    }
    if (relabeled == best_) {
      record_automorphism(best_order_, order);
      return common_prefix(best_path_, best_depth_, depth);
    }
    if (less_rows(best_, relabeled)) {
      best_ = relabeled;
      best_order_ = order;
      best_path_ = path_;
      best_depth_ = depth;
    }
    return depth - 1;
  }

  void record_automorphism(const Permutation& from, const Permutation& to) {
    Permutation gen{};
    for (int i = 0; i < g_.n; ++i) gen[static_cast<std::size_t>(from[static_cast<std::size_t>(i)])] = to[static_cast<std::size_t>(i)];
    generators_.push_back(gen);
  }

  int common_prefix(const Permutation& other, int other_depth, int depth) const {
    int l = 0;
    while (l < depth && l < other_depth && other[static_cast<std::size_t>(l)] == path_[static_cast<std::size_t>(l)]) ++l;
    return l;
  }

  const SmallGraph& g_;
  Permutation path_{};
  bool have_first_ = false;
  SmallGraph first_;
  Permutation first_order_{};
  Permutation first_path_{};
  int first_depth_ = 0;
  SmallGraph best_;
  Permutation best_order_{};
  Permutation best_path_{};
  int best_depth_ = 0;
  std::vector<Permutation> generators_;
};

}  // namespace

int SmallGraph::degree(int v) const { return std::popcount(static_cast<unsigned>(adj[static_cast<std::size_t>(v)])); }

int SmallGraph::edge_count() const {
  int twice = 0;
  for (int v = 0; v < n; ++v) twice += degree(v);
  return twice / 2;
}

int SmallGraph::component_count() const {
  if (n == 0) return 0;
  const Mask all = static_cast<Mask>((1U << n) - 1);
  Mask seen = 0;
  int components = 0;
  while (seen != all) {
    Mask comp = static_cast<Mask>(1U << lowest(static_cast<Mask>(~seen & all)));
    Mask frontier = comp;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= static_cast<Mask>(f - 1)) next |= adj[static_cast<std::size_t>(lowest(f))];
      frontier = static_cast<Mask>(next & ~comp);
      comp |= next;
    }
    seen |= comp;
    ++components;
  }
  return components;
}

SmallGraph SmallGraph::from_graph(const Graph& g) {
  if (g.order() > kMaxCanonicalOrder)
    throw DomainError("canonical labelling supports at most " + std::to_string(kMaxCanonicalOrder) + " vertices");
  SmallGraph s;
  s.n = g.order();
  for (auto [u, v] : g.edges()) s.add_edge(u, v);
  return s;
}

Graph SmallGraph::to_graph() const {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (has_edge(u, v)) g.add_edge(u, v);
  return g;
}

Labeling canonical_label(const SmallGraph& g) { return Search(g).run(); }

std::array<std::int8_t, kMaxCanonicalOrder> vertex_orbits(int n, const std::vector<Permutation>& generators) {
  UnionFind16 uf(n);
  for (const auto& gen : generators)
    for (int x = 0; x < n; ++x) uf.unite(x, gen[static_cast<std::size_t>(x)]);
  std::array<std::int8_t, kMaxCanonicalOrder> rep{};
  for (int x = 0; x < n; ++x) rep[static_cast<std::size_t>(x)] = static_cast<std::int8_t>(uf.find(x));
  return rep;
}

CanonicalForm canonical_form(const Graph& g) {
  const auto small = SmallGraph::from_graph(g);
  const auto lab = canonical_label(small);
  CanonicalForm out;
  out.labeling.resize(static_cast<std::size_t>(g.order()));
  for (int v = 0; v < g.order(); ++v) out.labeling[static_cast<std::size_t>(v)] = lab.position[static_cast<std::size_t>(v)];
  out.canonical = lab.canonical.to_graph();
  out.certificate = encode_graph6(out.canonical);
  for (const auto& gen : lab.generators) {
    std::vector<int> perm(static_cast<std::size_t>(g.order()));
    for (int v = 0; v < g.order(); ++v) perm[static_cast<std::size_t>(v)] = gen[static_cast<std::size_t>(v)];
    out.generators.push_back(std::move(perm));
  }
  return out;
}

}  // namespace optdesign
