#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optdesign/graph.hpp"
#include "optdesign/matrix.hpp"
#include "optdesign/spectrum.hpp"

namespace optdesign {

using Block = std::vector<int>;

/// Block design with v treatments and b blocks of constant size k.
///
/// Treatments are stored 0-based; the text format is 1-based. Each block is
/// kept sorted nondecreasing. Two designs compare equal when their multisets
/// of blocks agree, regardless of block order.
class Design {
 public:
  Design(int v, int k, std::vector<Block> blocks);

  int treatments() const { return v_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_size() const { return k_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// No block contains a repeated treatment.
  bool is_binary() const;
  /// r_i, the number of occurrences of treatment i over all blocks.
  std::vector<int> replications() const;
  bool is_equireplicate(int* r = nullptr) const;

  /// Label-dependent encoding of the block multiset ("1 2|1 3|..."), used for
  /// deterministic tie-breaks and tabu lists.
  std::string canonical_encoding() const;

  friend bool operator==(const Design& a, const Design& b);

 private:
  int v_;
  int k_;
  std::vector<Block> blocks_;
};

/// Parses the design text format: a header `v=<int> k=<int>`, then one block
/// per line as k whitespace-separated 1-based treatment indices. Lines whose
/// first non-blank character is '#' and blank lines are ignored.
Design parse_design(std::string_view text);
/// Inverse of parse_design (no comment lines).
std::string format_design(const Design& d);

/// v x b matrix of occurrence counts N(d).
IntMatrix incidence_matrix(const Design& d);
/// S(d) = N N^T.
IntMatrix concurrence_matrix(const Design& d);

/// Information matrix C(d) = R(d) - S(d)/k, held exactly as the integer
/// matrix k*C(d).
struct InfoMatrix {
  int k = 1;
  IntMatrix scaled;

  std::size_t order() const { return scaled.rows(); }
  double operator()(std::size_t i, std::size_t j) const {
    return static_cast<double>(scaled(i, j)) / static_cast<double>(k);
  }
  std::int64_t scaled_trace() const;
  double trace() const { return static_cast<double>(scaled_trace()) / static_cast<double>(k); }
  /// k^2 * trace(C^2), an exact integer.
  std::int64_t scaled_trace_sq() const;
  RealMatrix to_real() const;
};

InfoMatrix information_matrix(const Design& d);

/// Treatment-block incidence graph is connected (equivalently rank C = v-1).
bool is_connected(const Design& d);

/// Dual design with incidence N^T. Requires an equireplicate design.
Design dual(const Design& d);

/// Group divisible design parameters: m groups of n treatments, within-group
/// concurrence lambda1, between-group concurrence lambda2, replication r.
struct GddParams {
  int m = 0;
  int n = 0;
  int k = 0;
  int lambda1 = 0;
  int lambda2 = 0;
  int r = 0;

  int v() const { return m * n; }
  int b() const { return v() * r / k; }
  /// Throws DomainError unless r(k-1) = lambda1(n-1) + lambda2 n(m-1),
  /// vr is divisible by k and the parameters are in range.
  void validate() const;

  friend bool operator==(const GddParams&, const GddParams&) = default;
};

/// Replication implied by (m, n, k, lambda1, lambda2), if integral.
std::optional<int> gdd_replication(int m, int n, int k, int lambda1, int lambda2);

struct GddRecognition {
  GddParams params;
  std::vector<std::vector<int>> groups;  ///< 0-based treatments per group
};

/// Recognises d as a GDD. With `groups` supplied, checks that within- and
/// between-group concurrences are constant. Without, recovers the grouping
/// from the two distinct off-diagonal concurrence values. Returns nullopt for
/// designs that are not connected, binary and equireplicate, and for
/// one-class (balanced) concurrence patterns when recovering.
std::optional<GddRecognition> gdd_recognize(const Design& d,
                                            const std::optional<std::vector<std::vector<int>>>& groups = std::nullopt);

/// Analytic nonzero spectrum of the information matrix of a GDD.
Spectrum gdd_spectrum(const GddParams& p, double tol = kDefaultClusterTolerance);

/// Edges become blocks of size 2.
Design graph_as_design(const Graph& g);

}  // namespace optdesign
