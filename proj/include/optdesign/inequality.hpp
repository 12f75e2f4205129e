#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace optdesign {

/// Minimise sum x_i^-p over positive vectors whose sum matches, whose sum of
/// squares is at least, whose minimum is at most, and whose product is at
/// most that of the two-valued target (theta1 x m1, theta2 x m2).
struct KktProblem {
  int m1 = 1;
  int m2 = 1;
  double theta1 = 1.0;
  double theta2 = 2.0;
  double p = 1.0;
  /// Lower bound on x_1; defaults to (2 f(target))^(-1/p), so xi^-p = 2 f(target).
  double xi = 0.0;

  /// Validates 0 < theta1 < theta2, m1, m2 >= 1, p > 0 and xi^-p > f(target).
  /// Throws DomainError otherwise.
  static KktProblem make(int m1, int m2, double theta1, double theta2, double p,
                         std::optional<double> xi = std::nullopt);

  int n() const { return m1 + m2; }
  /// (theta1, ..., theta1, theta2, ..., theta2).
  std::vector<double> target() const;
  double target_objective() const;
  double target_sum() const { return m1 * theta1 + m2 * theta2; }
  double target_sum_sq() const { return m1 * theta1 * theta1 + m2 * theta2 * theta2; }
  double target_product() const;
};

inline constexpr double kFeasibilityTolerance = 1e-10;
inline constexpr double kObjectiveTolerance = 1e-12;
inline constexpr double kResidualTolerance = 1e-8;

/// sum x_i^-p, accumulated in sorted order so permutations agree bit for bit.
/// Throws DomainError on a nonpositive component.
double objective(std::span<const double> x, double p);

/// Constraint values at e, in the problem's coordinate order:
/// g (equality), h, k, l1, l2, m_i and n_i for i = 2..n-1.
struct ConstraintValues {
  double g = 0.0;
  double h = 0.0;
  double k = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  std::vector<double> m;  ///< index 0 is m_2
  std::vector<double> n;  ///< index 0 is n_2
  bool feasible = false;  ///< |g| and every inequality within kFeasibilityTolerance
};

/// Throws DomainError on a nonpositive component or a dimension mismatch.
ConstraintValues constraints(const KktProblem& problem, std::span<const double> e);

enum class Main2Status { Infeasible, Consistent, Violation };

struct Main2Verdict {
  Main2Status status = Main2Status::Infeasible;
  /// First failed hypothesis (1: equal sums, 2: sum of squares, 3: minimum,
  /// 4: product), 0 when all hold.
  int failed_condition = 0;
  double fx = 0.0;
  double ftarget = 0.0;
  double gap() const { return fx - ftarget; }
};

/// Checks the two-valued inequality at x: when all four hypotheses hold, the
/// power sum of x must be at least the power sum of the target.
/// Throws DomainError on dimension mismatch or nonpositive components.
Main2Verdict theorem_main2_check(const KktProblem& problem, std::span<const double> x);

struct SamplerStats {
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  double acceptance_rate() const { return attempts ? static_cast<double>(accepted) / attempts : 0.0; }
};

/// Streams `count` feasible points, sorted nondecreasing, deterministic in
/// `seed`. The stream opens with the target itself, then mixes zero-sum
/// perturbations of the target, points pushed onto the h, k or l1 boundary,
/// and (for n = 3) a fixed grid over the feasible slice.
SamplerStats sample_feasible(const KktProblem& problem, std::size_t count, std::uint64_t seed,
                             const std::function<void(std::span<const double>)>& visit);
std::vector<std::vector<double>> sample_feasible(const KktProblem& problem, std::size_t count, std::uint64_t seed);

/// Candidate minimiser with its KKT multipliers. alpha and beta are indexed
/// 2..n-1 (stored from index 0).
struct KktPoint {
  std::vector<double> e;
  double nu = 0.0;
  double lambda = 0.0;
  double rho = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  double D = 0.0;  ///< product of e

  /// Point with zero multipliers and D filled in.
  static KktPoint at(std::vector<double> e);
};

/// How many entries equal e_1 (r), equal e_n (t), and lie strictly between (s).
struct EndpointCounts {
  int r = 0;
  int s = 0;
  int t = 0;
};
EndpointCounts endpoint_counts(std::span<const double> e, double rel_tol = 1e-12);

struct KktResiduals {
  std::vector<double> stationarity;  ///< one row per coordinate
  double max_stationarity = 0.0;
  double max_complementarity = 0.0;
  double max_primal = 0.0;
  double max_residual = 0.0;
  bool signs_ok = true;  ///< lambda, rho, eta, alpha, beta all >= 0
  std::string problem;   ///< first invariant violation, empty when none
  bool pass = false;
};

/// Stationarity, complementary slackness and primal feasibility residuals.
/// Each row is measured relative to the size of its terms (never below 1):
/// stationarity against the sum of absolute gradient terms, slackness against
/// the multiplier, g, h and k against the target's sum, sum of squares and
/// product. `stationarity` holds the raw rows.
KktResiduals kkt_residuals(const KktProblem& problem, const KktPoint& point, double tol = kResidualTolerance);

/// Multipliers at the target with rho = eta = alpha = beta = 0, from the
/// 2x2 system -p theta_j^(-p-1) + nu - 2 lambda theta_j = 0.
KktPoint canonical_multipliers(const KktProblem& problem);

/// Positive zeros of y(x) = -p + nu x^(p+1) - 2 lambda x^(p+2) + rho D x^p,
/// located by sign changes on a 2048-point log grid over [1e-6, 1e6] and
/// refined by bisection to 1e-12.
std::vector<double> y_positive_roots(double nu, double lambda, double rho, double D, double p);

struct MfcqWitness {
  std::vector<double> w;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int t = 0;
};

struct MfcqCheck {
  MfcqWitness witness;
  double grad_g_dot = 0.0;
  std::vector<std::pair<std::string, double>> active;  ///< active inequality and grad . w
  bool verified = false;
};

/// Builds w = (-a, 0, ..., 0, b x (t-1), c) for a sorted feasible point and
/// verifies grad g . w = 0 and grad . w < 0 for every active inequality.
/// Throws DomainError when e_1 = e_n or l2 is active.
MfcqCheck mfcq_witness(const KktProblem& problem, std::span<const double> e, double b = 1.0, double c = 2.0);

/// Solutions (x, y) with 0 < x <= a1 < a2 <= y of
///   s x + t y = m a1 + n a2,  s x^2 + t y^2 = m a1^2 + n a2^2.
/// Throws DomainError unless m + n = s + t, all counts positive, a1 < a2.
std::vector<std::pair<double, double>> lemma_2eq_solve(int m, int n, int s, int t, double a1, double a2);

/// Test functions for the two-point majorisation lemmas.
struct PhiFunction {
  enum class Kind { Square, Exp, NegLog, Log, InversePower };
  Kind kind = Kind::Square;
  double p = 1.0;  ///< exponent for InversePower: x^-p

  double operator()(double x) const;
  bool convex() const;
  bool concave() const;
  bool derivative_convex() const;
  bool needs_positive() const;
  /// "square", "exp", "neg-log", "log", or "power(-<p>)".
  static PhiFunction parse(const std::string& id);
};

enum class BennetVerdict { Holds, Fails, NotApplicable };

/// variant 1: d1 < a1 < a2 < d2, equal weights and first moments, phi convex.
/// variant 2: a1 < d1 < a2 < d2, equal weights and first moments,
///            alpha.a^2 >= delta.d^2, phi concave with convex derivative.
/// Holds iff alpha.phi(a) <= delta.phi(d) + 1e-12.
BennetVerdict bennet_check(int variant, std::span<const double> alphas, std::span<const double> deltas,
                           std::span<const double> a, std::span<const double> d, const PhiFunction& phi);

nlohmann::json to_json(const KktResiduals& r);

}  // namespace optdesign
