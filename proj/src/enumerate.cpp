#include "optdesign/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>
#include <vector>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

// Depth (edge count) at which subtrees are dealt out to workers.
constexpr int kSplitDepth = 5;

struct PairIndex {
  int n;
  int operator()(int u, int v) const {
    if (u > v) std::swap(u, v);
    return v * (v - 1) / 2 + u;
  }
};

class Enumerator {
 public:
  Enumerator(const EnumerationOptions& opt, const std::function<void(const SmallGraph&)>& visit)
      : opt_(opt), visit_(visit), index_{opt.n} {}

  std::size_t run() {
    SmallGraph root;
    root.n = opt_.n;
    if (opt_.m == 0) {
      if ((!opt_.connected_only || opt_.n == 1) && opt_.part == 0) emit(root);
      return emitted_;
    }
    expand(root, canonical_label(root), 0);
    return emitted_;
  }

 private:
  bool viable(const SmallGraph& g, int edges) const {
    return !opt_.connected_only || g.component_count() - 1 <= opt_.m - edges;
  }

  void expand(const SmallGraph& g, const Labeling& lab, int edges) {
    const int n = opt_.n;
    const int child_depth = edges + 1;
    const int split = std::min(kSplitDepth, opt_.m);

    // One non-edge per orbit of Aut(g).
    std::array<int, 120> pair_root{};
    for (int i = 0; i < 120; ++i) pair_root[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
      while (pair_root[static_cast<std::size_t>(x)] != x) x = pair_root[static_cast<std::size_t>(x)];
      return x;
    };
    for (const auto& gen : lab.generators)
      for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u) {
          const int a = find(index_(u, v));
          const int b = find(index_(gen[static_cast<std::size_t>(u)], gen[static_cast<std::size_t>(v)]));
          if (a != b) pair_root[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }

    for (int v = 1; v < n; ++v)
      for (int u = 0; u < v; ++u) {
        if (g.has_edge(u, v) || find(index_(u, v)) != index_(u, v)) continue;
        SmallGraph child = g;
        child.add_edge(u, v);
        if (!viable(child, child_depth)) continue;

        Labeling child_lab;
        bool labelled = false;
        if (!is_canonical_extension(child, u, v, child_lab, labelled)) continue;

        if (child_depth == split && (counter_++ % static_cast<std::size_t>(opt_.parts)) != static_cast<std::size_t>(opt_.part))
          continue;
        if (child_depth == opt_.m) {
          emit(child);
          continue;
        }
        if (!labelled) child_lab = canonical_label(child);
        expand(child, child_lab, child_depth);
      }
  }

  /// Isomorphism-invariant score of edge uv; the deletable edge maximises it.
  static std::uint32_t edge_key(const SmallGraph& g, const std::array<int, kMaxCanonicalOrder>& deg, int u, int v) {
    auto vertex_key = [&](int x) {
      int nbr = 0;
      for (unsigned rest = g.adj[static_cast<std::size_t>(x)]; rest; rest &= rest - 1)
        nbr += deg[static_cast<std::size_t>(std::countr_zero(rest))];
      return static_cast<std::uint32_t>((deg[static_cast<std::size_t>(x)] << 8) | nbr);
    };
    const auto a = vertex_key(u);
    const auto b = vertex_key(v);
    const auto common = static_cast<std::uint32_t>(
        std::popcount(static_cast<unsigned>(g.adj[static_cast<std::size_t>(u)] & g.adj[static_cast<std::size_t>(v)])));
    return (std::min(a, b) << 18) | (std::max(a, b) << 5) | common;
  }

  bool is_canonical_extension(const SmallGraph& child, int u, int v, Labeling& lab, bool& labelled) const {
    const int n = child.n;
    std::array<int, kMaxCanonicalOrder> deg{};
    for (int x = 0; x < n; ++x) deg[static_cast<std::size_t>(x)] = child.degree(x);

    const auto added = edge_key(child, deg, u, v);
    std::array<std::pair<int, int>, 120> best{};
    int nbest = 0;
    for (int y = 1; y < n; ++y)
      for (unsigned rest = child.adj[static_cast<std::size_t>(y)] & ((1U << y) - 1); rest; rest &= rest - 1) {
        const int x = std::countr_zero(rest);
        const auto key = edge_key(child, deg, x, y);
        if (key > added) return false;
        if (key == added) best[static_cast<std::size_t>(nbest++)] = {x, y};
      }
    if (nbest == 1) return true;

    lab = canonical_label(child);
    labelled = true;
    // Among the top-scoring edges pick the one whose canonical positions are largest.
    std::pair<int, int> chosen{};
    std::pair<int, int> chosen_pos{-1, -1};
    for (int i = 0; i < nbest; ++i) {
      const auto [x, y] = best[static_cast<std::size_t>(i)];
      const int px = lab.position[static_cast<std::size_t>(x)];
      const int py = lab.position[static_cast<std::size_t>(y)];
      const std::pair<int, int> pos{std::max(px, py), std::min(px, py)};
      if (pos > chosen_pos) {
        chosen_pos = pos;
        chosen = {x, y};
      }
    }
    if (chosen == std::pair<int, int>{std::min(u, v), std::max(u, v)}) return true;
    if (lab.generators.empty()) return false;

    // Orbit of the chosen edge under Aut(child).
    std::array<bool, 120> in_orbit{};
    std::array<std::pair<int, int>, 120> queue{};
    int head = 0;
    int tail = 0;
    queue[static_cast<std::size_t>(tail++)] = chosen;
    in_orbit[static_cast<std::size_t>(index_(chosen.first, chosen.second))] = true;
    while (head < tail) {
      const auto [x, y] = queue[static_cast<std::size_t>(head++)];
      for (const auto& gen : lab.generators) {
        const int gx = gen[static_cast<std::size_t>(x)];
        const int gy = gen[static_cast<std::size_t>(y)];
        const int idx = index_(gx, gy);
        if (in_orbit[static_cast<std::size_t>(idx)]) continue;
        if (idx == index_(u, v)) return true;
        in_orbit[static_cast<std::size_t>(idx)] = true;
        queue[static_cast<std::size_t>(tail++)] = {gx, gy};
      }
    }
    return false;
  }

  void emit(const SmallGraph& g) {
    ++emitted_;
    visit_(g);
  }

  const EnumerationOptions& opt_;
  const std::function<void(const SmallGraph&)>& visit_;
  PairIndex index_;
  std::size_t counter_ = 0;
  std::size_t emitted_ = 0;
};

void validate(const EnumerationOptions& opt) {
  if (opt.n < 1 || opt.n > kMaxEnumerationOrder)
    throw DomainError("enumeration supports 1 <= n <= " + std::to_string(kMaxEnumerationOrder));
  if (opt.m < 0 || opt.m > opt.n * (opt.n - 1) / 2) throw DomainError("edge count out of range for n");
  if (opt.parts < 1 || opt.part < 0 || opt.part >= opt.parts) throw DomainError("invalid enumeration partition");
}

}  // namespace

std::size_t enumerate_graphs(const EnumerationOptions& options, const std::function<void(const SmallGraph&)>& visit) {
  validate(options);
  return Enumerator(options, visit).run();
}

std::size_t enumerate_graphs_parallel(EnumerationOptions options, int jobs,
                                      const std::function<void(const SmallGraph&)>& visit) {
  validate(options);
  if (jobs <= 1) return enumerate_graphs(options, visit);
  std::vector<std::size_t> counts(static_cast<std::size_t>(jobs), 0);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        EnumerationOptions part = options;
        part.part = w;
        part.parts = jobs;
        counts[static_cast<std::size_t>(w)] = Enumerator(part, visit).run();
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

std::size_t count_connected(int n, int m, int jobs) {
  return enumerate_graphs_parallel({n, m, true, 0, 1}, jobs, [](const SmallGraph&) {});
}

std::size_t cubic_graph_count(int n, bool include_disconnected, int jobs) {
  if (n % 2 != 0) return 0;
  std::atomic<std::size_t> cubic{0};
  enumerate_graphs_parallel({n, 3 * n / 2, !include_disconnected, 0, 1}, jobs, [&](const SmallGraph& g) {
    for (int v = 0; v < g.n; ++v)
      if (g.degree(v) != 3) return;
    ++cubic;
  });
  return cubic.load();
}

}  // namespace optdesign
