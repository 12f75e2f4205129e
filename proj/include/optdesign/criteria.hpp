#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "optdesign/design.hpp"
#include "optdesign/spectrum.hpp"

namespace optdesign {

inline const std::vector<double> kDefaultPGrid = {0.5, 1.0, 2.0, 5.0, 10.0, 50.0};

/// ((sum mu_i^-p) / (v-1))^(1/p). Smaller is better.
/// Throws std::invalid_argument for p <= 0 or a nonpositive eigenvalue.
double phi_p_value(const Spectrum& s, double p);

/// Harmonic mean of the nonzero eigenvalues.
double a_value(const Spectrum& s);
/// Product of the nonzero eigenvalues.
double d_value(const Spectrum& s);
/// Smallest nonzero eigenvalue.
double e_value(const Spectrum& s);

/// trace(C(d)^2), evaluated exactly from the integer entries of k*C.
double trace_c_sq(const Design& d);

/// The two type-1 functionals: f(x) = x^-p and f(x) = -ln x.
struct Type1Function {
  enum class Kind { Power, NegLog };
  Kind kind = Kind::NegLog;
  double p = 1.0;

  static Type1Function power(double p) { return {Kind::Power, p}; }
  static Type1Function neglog() { return {Kind::NegLog, 0.0}; }
  /// Accepts "neglog" or "power(<p>)". Throws std::invalid_argument otherwise.
  static Type1Function parse(const std::string& id);
};

/// sum f(mu_i).
double type1_value(const Spectrum& s, const Type1Function& f);

/// Every prefix sum of `a` (sorted nonincreasing) is at least the
/// corresponding prefix sum of `b`, up to tol relative to the running total.
/// Throws std::invalid_argument when lengths differ.
bool majorizes(std::span<const double> a, std::span<const double> b, double tol = 1e-9);
bool majorizes(const Spectrum& a, const Spectrum& b, double tol = 1e-9);

/// Constant diagonal and constant off-diagonal. Exact on the integer form.
bool completely_symmetric(const InfoMatrix& c);
bool completely_symmetric(const RealMatrix& c, double tol);

/// g <= (v-1)(k-1) / (r(v-k)), compared exactly. Throws std::invalid_argument
/// when k >= v or an argument is out of range.
bool bagchi_precondition(int g, int v, int k, int r);

struct CriteriaReport {
  int v = 0;
  int b = 0;
  int k = 0;
  bool binary = false;
  double trace_c = 0.0;
  double trace_c_sq = 0.0;
  double e_value = 0.0;
  double d_value = 0.0;
  double a_value = 0.0;
  std::vector<std::pair<double, double>> phi_values;  ///< (p, Phi_p)
  int distinct_count = 0;
  Spectrum spectrum;
};

/// Full criteria report for a connected design. Throws DomainError if d is
/// disconnected.
CriteriaReport evaluate_criteria(const Design& d, std::span<const double> p_grid = kDefaultPGrid);

nlohmann::json to_json(const CriteriaReport& r);

// ---------------------------------------------------------------------------
// Two-eigenvalue optimality check over a class of competing designs.

struct MainTheoremOptions {
  std::vector<double> p_grid = kDefaultPGrid;
  double tie_tolerance = 1e-9;
  std::size_t witness_cap = 16;
};

/// A class member that attains (or ties) the best value of one criterion.
struct Witness {
  std::string id;
  std::string key;  ///< isomorphism key; equal to the candidate's key means "same design"
  double score = 0.0;
  std::optional<Design> design;
};

/// Minimum of one score (lower is better) over the class and its attainers.
struct Extremum {
  std::string name;
  double best = 0.0;
  bool seen = false;
  std::size_t tie_count = 0;  ///< members within tolerance of the best
  std::vector<Witness> witnesses;
};

struct CriterionVerdict {
  std::string name;
  double best = 0.0;
  double candidate = 0.0;
  bool candidate_attains = false;
  /// Every member tying the best is equivalent to the candidate.
  bool unique = false;
  std::size_t tie_count = 0;
  bool exact_tie_break = false;  ///< ties among rivals resolved in rational arithmetic
  std::vector<std::string> witness_ids;
};

struct MainTheoremReport {
  std::size_t members = 0;
  std::size_t skipped = 0;  ///< non-binary or disconnected members (outside the class)
  bool two_eigenvalues = false;   ///< candidate has exactly two distinct nonzero eigenvalues
  CriterionVerdict trace_sq;      ///< minimises trace C^2
  CriterionVerdict e_optimal;
  CriterionVerdict d_optimal;
  std::vector<CriterionVerdict> phi;  ///< one per p in the grid
  bool hypotheses_hold = false;
  bool phi_optimal_everywhere = false;
  /// Hypotheses imply the conclusion (vacuous when a hypothesis fails).
  bool consistent = false;
};

/// Streaming reduction over a class of binary connected designs with the
/// candidate's (v, b, k). Partial checks over disjoint parts of the class
/// combine with merge().
class MainTheoremCheck {
 public:
  MainTheoremCheck(Design candidate, MainTheoremOptions options = {});

  /// Throws DomainError if the member's (v, b, k) differs from the candidate's.
  void add(const Design& member, const std::string& id);
  void merge(const MainTheoremCheck& other);
  MainTheoremReport report() const;

  const Design& candidate() const { return candidate_; }

 private:
  struct Scores {
    double trace_sq = 0.0;
    double e = 0.0;
    double d = 0.0;
    std::vector<double> phi;
  };
  Scores score(const Design& d) const;
  std::string key_of(const Design& d) const;
  void offer(Extremum& ex, double score, const Design& d, const std::string& id, bool keep_design);
  CriterionVerdict verdict(const Extremum& ex, double candidate_score, std::optional<int> exact_power) const;

  Design candidate_;
  MainTheoremOptions options_;
  Scores candidate_scores_;
  std::string candidate_key_;
  int candidate_distinct_ = 0;
  std::size_t members_ = 0;
  std::size_t skipped_ = 0;
  Extremum trace_sq_;
  Extremum e_;
  Extremum d_;
  std::vector<Extremum> phi_;
};

/// Runs the check over every design produced by `source`.
template <class Source>
MainTheoremReport theorem_main_check(const Design& candidate, Source&& source, MainTheoremOptions options = {}) {
  MainTheoremCheck check(candidate, std::move(options));
  source([&](const Design& d, const std::string& id) { check.add(d, id); });
  return check.report();
}

nlohmann::json to_json(const MainTheoremReport& r);

}  // namespace optdesign
