#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optdesign/design.hpp"

namespace optdesign {

/// Optimality criterion driving the search.
struct SearchCriterion {
  enum class Kind { A, D, E, Phi };
  Kind kind = Kind::D;
  double p = 1.0;  ///< only for Phi

  /// "A", "D", "E", or "phi(<p>)" with p > 0. Throws std::invalid_argument.
  static SearchCriterion parse(const std::string& id);
  std::string name() const;
};

struct SearchConfig {
  int v = 0;
  int b = 0;
  int k = 0;
  SearchCriterion criterion;
  bool binary_only = true;
  int restarts = 1;
  int max_iterations = 2000;  ///< proposals per restart
  std::uint64_t seed = 1;
  int plateau_cap = 200;  ///< consecutive sideways moves allowed
  int tabu_length = 64;
  double tie_tolerance = 1e-9;
  int jobs = 1;
};

/// One accepted move. `value` is the criterion in its natural orientation:
/// A, D and E values never decrease along a restart, Phi_p never increases.
struct TraceEntry {
  int restart = 0;
  int iteration = 0;
  std::string move;  ///< "start", "swap" or "replace"
  double value = 0.0;
};

struct SearchResult {
  Design best;
  double value = 0.0;
  int restart = 0;  ///< restart that produced `best`
  /// k = 2 only: exact number of spanning trees of the (multi)graph.
  std::optional<std::int64_t> spanning_trees;
  std::vector<TraceEntry> trace;
};

/// Multi-restart exchange search over connected designs with b blocks of
/// size k on v treatments. Moves either swap one treatment occurrence in a
/// block for another treatment or replace a block by a random one; moves that
/// disconnect the design (or break binarity when required) are rejected.
/// Improvements are always taken, equal-value moves up to `plateau_cap` in a
/// row and never onto one of the last `tabu_length` designs. Under E, designs
/// sharing the smallest eigenvalue are ordered by their harmonic mean. Each restart is
/// seeded from (seed, restart) alone, so results do not depend on `jobs`.
///
/// Throws DomainError when no connected design exists (b(k-1) < v-1) or when
/// binary_only is set with k > v; std::invalid_argument on bad settings.
SearchResult local_search(const SearchConfig& cfg);

/// Criterion value of a connected design, natural orientation.
double criterion_value(const Design& d, const SearchCriterion& c);

nlohmann::json to_json(const TraceEntry& t);

}  // namespace optdesign
