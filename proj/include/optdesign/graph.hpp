#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optdesign/matrix.hpp"

namespace optdesign {

/// Simple undirected graph on vertices 0..n-1.
///
/// Adjacency is kept as the upper triangle packed in graph6 order: the pair
/// (i, j) with i < j occupies bit j(j-1)/2 + i, so (0,1),(0,2),(1,2),(0,3),...
/// are consecutive. The edge count is the popcount of that bitset.
class Graph {
 public:
  static constexpr int kMaxOrder = 62;

  Graph() = default;
  explicit Graph(int n);

  static Graph from_edges(int n, std::span<const std::pair<int, int>> edges);

  int order() const { return n_; }
  int edge_count() const;

  bool has_edge(int u, int v) const;
  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  /// Neighbourhood of v as a bitmask over vertices.
  std::uint64_t neighbors(int v) const;
  int degree(int v) const;
  std::vector<int> degrees() const;
  /// Edges (i, j), i < j, in graph6 bit order.
  std::vector<std::pair<int, int>> edges() const;

  bool is_connected() const;
  int component_count() const;
  /// True when every vertex has the same degree; that degree is stored in *degree.
  bool is_regular(int* degree = nullptr) const;

  /// Relabels vertex v as perm[v].
  Graph relabeled(std::span<const int> perm) const;

  const std::vector<std::uint64_t>& bits() const { return bits_; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.bits_ == b.bits_; }

 private:
  static std::size_t pair_index(int i, int j) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(j - 1) / 2 + static_cast<std::size_t>(i);
  }
  void check_vertex(int v) const;

  int n_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Parses one graph6 record (no header, trailing newline tolerated).
/// Throws ParseError on characters outside 63..126, a truncated or overlong
/// payload, or nonzero padding bits.
Graph decode_graph6(std::string_view text);
std::string encode_graph6(const Graph& g);

/// Reads every graph6 record of a stream. Blank lines and lines starting
/// with '#' (manifest headers written by this tool) are skipped, as is an
/// optional ">>graph6<<" prefix.
std::vector<std::string> read_graph6_lines(std::istream& in);

/// Degree matrix minus adjacency.
IntMatrix laplacian(const Graph& g);

Graph petersen();
Graph complete_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int leaves);

}  // namespace optdesign
