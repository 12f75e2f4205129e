#include "optdesign/graph.hpp"

#include <bit>
#include <istream>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {
constexpr int kGraph6Offset = 63;
constexpr std::string_view kGraph6Header = ">>graph6<<";
}  // namespace

Graph::Graph(int n) : n_(n) {
  if (n < 0 || n > kMaxOrder) throw DomainError("graph order must be in 0.." + std::to_string(kMaxOrder));
  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
  bits_.assign((pairs + 63) / 64, 0);
}

Graph Graph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range("vertex index out of range");
}

int Graph::edge_count() const {
  int count = 0;
  for (auto w : bits_) count += std::popcount(w);
  return count;
}

bool Graph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return false;
  if (u > v) std::swap(u, v);
  const auto idx = pair_index(u, v);
  return (bits_[idx / 64] >> (idx % 64)) & 1U;
}

void Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw DomainError("simple graphs have no loops");
  if (u > v) std::swap(u, v);
  const auto idx = pair_index(u, v);
  bits_[idx / 64] |= std::uint64_t{1} << (idx % 64);
}

void Graph::remove_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return;
  if (u > v) std::swap(u, v);
  const auto idx = pair_index(u, v);
  bits_[idx / 64] &= ~(std::uint64_t{1} << (idx % 64));
}

std::uint64_t Graph::neighbors(int v) const {
  check_vertex(v);
  std::uint64_t mask = 0;
  for (int u = 0; u < n_; ++u)
    if (u != v && has_edge(u, v)) mask |= std::uint64_t{1} << u;
  return mask;
}

int Graph::degree(int v) const { return std::popcount(neighbors(v)); }

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_), 0);
  for (auto [u, v] : edges()) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 1; j < n_; ++j)
    for (int i = 0; i < j; ++i) {
      const auto idx = pair_index(i, j);
      if ((bits_[idx / 64] >> (idx % 64)) & 1U) out.emplace_back(i, j);
    }
  return out;
}

int Graph::component_count() const {
  if (n_ == 0) return 0;
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n_), 0);
  for (auto [u, v] : edges()) {
    adj[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
    adj[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
  }
  const std::uint64_t all = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  std::uint64_t seen = 0;
  int components = 0;
  while (seen != all) {
    std::uint64_t frontier = (~seen & all) & (~(~seen & all) + 1);
    std::uint64_t comp = frontier;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      frontier = next & ~comp;
      comp |= next;
    }
    seen |= comp;
    ++components;
  }
  return components;
}

bool Graph::is_connected() const { return component_count() == 1; }

bool Graph::is_regular(int* degree) const {
  const auto deg = degrees();
  if (deg.empty()) return false;
  for (int d : deg)
    if (d != deg.front()) return false;
  if (degree) *degree = deg.front();
  return true;
}

Graph Graph::relabeled(std::span<const int> perm) const {
  if (perm.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("permutation size mismatch");
  Graph out(n_);
  for (auto [u, v] : edges()) out.add_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
  return out;
}

Graph decode_graph6(std::string_view text) {
  if (text.starts_with(kGraph6Header)) text.remove_prefix(kGraph6Header.size());
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw ParseError("graph6: empty record");
  for (char ch : text)
    if (static_cast<unsigned char>(ch) < 63 || static_cast<unsigned char>(ch) > 126)
      throw ParseError("graph6: invalid character");

  const int n = static_cast<unsigned char>(text[0]) - kGraph6Offset;
  if (n > Graph::kMaxOrder) throw ParseError("graph6: only orders up to 62 are supported");
  Graph g(n);
  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
  const std::size_t payload = (pairs + 5) / 6;
  if (text.size() - 1 < payload) throw ParseError("graph6: truncated bit payload");
  if (text.size() - 1 > payload) throw ParseError("graph6: trailing characters after payload");

  std::size_t bit = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++bit) {
      const int group = static_cast<unsigned char>(text[1 + bit / 6]) - kGraph6Offset;
      if ((group >> (5 - bit % 6)) & 1) g.add_edge(i, j);
    }
  if (pairs % 6 != 0) {
    const int last = static_cast<unsigned char>(text.back()) - kGraph6Offset;
    const int padding = static_cast<int>(6 - pairs % 6);
    if (last & ((1 << padding) - 1)) throw ParseError("graph6: nonzero padding bits");
  }
  return g;
}

std::string encode_graph6(const Graph& g) {
  const int n = g.order();
  std::string out(1, static_cast<char>(n + kGraph6Offset));
  int group = 0;
  int filled = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      group = (group << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(group + kGraph6Offset));
        group = 0;
        filled = 0;
      }
    }
  if (filled > 0) out.push_back(static_cast<char>((group << (6 - filled)) + kGraph6Offset));
  return out;
}

std::vector<std::string> read_graph6_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

IntMatrix laplacian(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.order());
  IntMatrix lap(n, n);
  for (auto [u, v] : g.edges()) {
    const auto a = static_cast<std::size_t>(u);
    const auto b = static_cast<std::size_t>(v);
    lap(a, b) = lap(b, a) = -1;
    ++lap(a, a);
    ++lap(b, b);
  }
  return lap;
}

Graph petersen() {
  Graph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

Graph complete_graph(int n) {
  Graph g(n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) g.add_edge(i, j);
  return g;
}

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  if (n > 2) g.add_edge(0, n - 1);
  return g;
}

Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

}  // namespace optdesign
