#pragma once

#include <cstddef>
#include <functional>

#include "optdesign/canonical.hpp"
#include "optdesign/graph.hpp"

namespace optdesign {

inline constexpr int kMaxEnumerationOrder = 10;

struct EnumerationOptions {
  int n = 0;
  int m = 0;
  bool connected_only = true;
  /// Work is split between `parts` independent callers by the subtree they
  /// own at a fixed edge depth; caller `part` sees only its share.
  int part = 0;
  int parts = 1;
};

/// Streams one graph per isomorphism class of graphs with n vertices and m
/// edges (connected ones only unless told otherwise).
///
/// Graphs grow one edge at a time from the empty graph. A child G + e is kept
/// only when e lies in the automorphism orbit of the canonically chosen
/// deletable edge of the child, and only one non-edge per Aut(G) orbit is
/// tried, so each class appears exactly once and memory stays proportional to
/// the depth. Partial graphs that can no longer become connected with the
/// remaining edges are pruned.
///
/// Throws DomainError unless 1 <= n <= 10 and 0 <= m <= n(n-1)/2.
std::size_t enumerate_graphs(const EnumerationOptions& options, const std::function<void(const SmallGraph&)>& visit);

/// Same, fanned out over `jobs` threads. `visit` is called from worker
/// threads and must be thread-safe; the order of calls is unspecified.
std::size_t enumerate_graphs_parallel(EnumerationOptions options, int jobs,
                                      const std::function<void(const SmallGraph&)>& visit);

/// Convenience wrapper returning the class count of connected (n, m) graphs.
std::size_t count_connected(int n, int m, int jobs = 1);

/// Number of 3-regular graphs on n vertices, obtained by filtering the
/// (n, 3n/2) enumeration. Returns 0 for odd n.
std::size_t cubic_graph_count(int n, bool include_disconnected = false, int jobs = 1);

}  // namespace optdesign
