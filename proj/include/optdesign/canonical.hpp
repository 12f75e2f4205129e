#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "optdesign/graph.hpp"

namespace optdesign {

inline constexpr int kMaxCanonicalOrder = 16;

/// Adjacency rows as 16-bit masks; the working representation for
/// canonical labelling and enumeration.
struct SmallGraph {
  int n = 0;
  std::array<std::uint16_t, kMaxCanonicalOrder> adj{};

  bool has_edge(int u, int v) const { return (adj[static_cast<std::size_t>(u)] >> v) & 1U; }
  void add_edge(int u, int v) {
    adj[static_cast<std::size_t>(u)] |= static_cast<std::uint16_t>(1U << v);
    adj[static_cast<std::size_t>(v)] |= static_cast<std::uint16_t>(1U << u);
  }
  void remove_edge(int u, int v) {
    adj[static_cast<std::size_t>(u)] &= static_cast<std::uint16_t>(~(1U << v));
    adj[static_cast<std::size_t>(v)] &= static_cast<std::uint16_t>(~(1U << u));
  }
  int degree(int v) const;
  int edge_count() const;
  int component_count() const;

  /// Throws DomainError when g has more than 16 vertices.
  static SmallGraph from_graph(const Graph& g);
  Graph to_graph() const;

  friend bool operator==(const SmallGraph&, const SmallGraph&) = default;
};

using Permutation = std::array<std::int8_t, kMaxCanonicalOrder>;

/// Result of canonical labelling.
struct Labeling {
  /// order[i] is the vertex placed at canonical position i.
  Permutation order{};
  /// position[v] is the canonical position of vertex v.
  Permutation position{};
  /// The relabelled graph; equal for two inputs iff they are isomorphic.
  SmallGraph canonical;
  /// Generators of the automorphism group, as vertex images.
  std::vector<Permutation> generators;
};

/// Canonical labelling by equitable refinement and individualisation, with
/// automorphism pruning on the search tree.
Labeling canonical_label(const SmallGraph& g);

/// Orbit representative (smallest member) of every vertex under the group
/// generated by `generators`.
std::array<std::int8_t, kMaxCanonicalOrder> vertex_orbits(int n, const std::vector<Permutation>& generators);

struct CanonicalForm {
  std::vector<int> labeling;  ///< labeling[v] = canonical position of v
  Graph canonical;
  std::string certificate;  ///< graph6 bytes of the canonical graph
  std::vector<std::vector<int>> generators;
};

/// Throws DomainError above 16 vertices.
CanonicalForm canonical_form(const Graph& g);

}  // namespace optdesign
