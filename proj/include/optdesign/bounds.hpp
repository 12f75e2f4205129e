#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "optdesign/graph.hpp"

namespace optdesign {

/// Bounds checked over connected graphs with 10 vertices and 15 edges.
inline constexpr int kBoundOrder = 10;
inline constexpr int kBoundEdges = 15;
inline constexpr double kMu9Bound = 2.0;
inline constexpr std::int64_t kProductBound = 20000;
inline constexpr double kMu9FilterTolerance = 1e-7;
inline constexpr double kMu9EscalationThreshold = 1e-5;

struct BoundViolation {
  std::size_t index = 0;  ///< position in the input stream
  std::string graph6;
  double value = 0.0;
  std::string detail;
};

struct PreconditionFailure {
  std::size_t index = 0;
  std::string graph6;
  std::string reason;
};

/// Result of checking the second-smallest Laplacian eigenvalue mu9 <= 2 and
/// the product of nonzero eigenvalues <= 20000 over a class of graphs.
/// Witness lists hold canonical certificates of graphs attaining a bound, each
/// confirmed in exact arithmetic; they are kept sorted and duplicate-free.
struct PropTeReport {
  std::size_t total_connected = 0;  ///< graphs that met the precondition
  std::size_t regular = 0;
  std::size_t exact_escalations = 0;  ///< mu9 near 2, decided by det(L - 2I)
  double max_mu9 = 0.0;
  std::int64_t max_product = 0;
  std::vector<BoundViolation> mu9_bound_violations;
  std::vector<std::string> mu9_equality_witnesses;
  std::vector<BoundViolation> product_bound_violations;
  std::vector<std::string> product_equality_witnesses;
  /// Non-regular graphs with mu9 above the minimum degree.
  std::vector<BoundViolation> min_degree_violations;
  std::vector<PreconditionFailure> precondition_failures;

  /// Adds one graph. Graphs failing the precondition are recorded, not thrown.
  void add(const Graph& g, std::size_t index);
  /// Combines disjoint partial reports; order-independent.
  void merge(const PropTeReport& other);

  bool no_violations() const;
  /// Both witness lists are exactly {Petersen}, identified by certificate and
  /// cross-checked against the Laplacian spectrum {5^4, 2^5, 0}.
  bool witnesses_are_petersen() const;
  bool verified() const { return no_violations() && precondition_failures.empty() && witnesses_are_petersen(); }
};

PropTeReport verify_prop_te(const std::vector<Graph>& graphs);

/// Enumerates every connected (10, 15) graph and checks each, over `jobs`
/// worker threads.
PropTeReport verify_prop_te_enumerated(int jobs = 1);

/// Canonical certificate of the Petersen graph.
const std::string& petersen_certificate();

nlohmann::json to_json(const PropTeReport& r);

}  // namespace optdesign
