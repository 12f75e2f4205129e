#include "optdesign/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

constexpr int kRootGridPoints = 2048;
constexpr double kRootGridLo = 1e-6;
constexpr double kRootGridHi = 1e6;
constexpr double kRootTolerance = 1e-12;
// Perturbation sizes, relative to theta1. Points closer than the lower end
// to the target are not emitted (the target itself is).
constexpr double kMinPerturbation = 1e-2;
constexpr double kMaxPerturbation = 0.5;

double product(std::span<const double> x) {
  double prod = 1.0;
  for (double v : x) prod *= v;
  return prod;
}

void require_positive(std::span<const double> x) {
  for (double v : x)
    if (!(v > 0.0)) throw DomainError("vector components must be positive");
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

std::vector<double> zero_sum_direction(std::mt19937_64& rng, std::size_t n, std::size_t skip_front) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n, 0.0);
  double mean = 0.0;
  for (std::size_t i = skip_front; i < n; ++i) mean += (z[i] = normal(rng));
  mean /= static_cast<double>(n - skip_front);
  double norm = 0.0;
  for (std::size_t i = skip_front; i < n; ++i) {
    z[i] -= mean;
    norm += z[i] * z[i];
  }
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (auto& v : z) v /= norm;
  return z;
}

}  // namespace

KktProblem KktProblem::make(int m1, int m2, double theta1, double theta2, double p, std::optional<double> xi) {
  if (m1 < 1 || m2 < 1) throw DomainError("multiplicities must be at least 1");
  if (!(theta1 > 0.0) || !(theta1 < theta2)) throw DomainError("need 0 < theta1 < theta2");
  if (!(p > 0.0)) throw DomainError("p must be positive");
  KktProblem pr{m1, m2, theta1, theta2, p, 0.0};
  const double f = pr.target_objective();
  pr.xi = xi.value_or(std::pow(2.0 * f, -1.0 / p));
  if (!(pr.xi > 0.0) || !(std::pow(pr.xi, -p) > f)) throw DomainError("xi must satisfy xi^-p > f(target)");
  return pr;
}

std::vector<double> KktProblem::target() const {
  std::vector<double> t(static_cast<std::size_t>(m1), theta1);
  t.insert(t.end(), static_cast<std::size_t>(m2), theta2);
  return t;
}

double KktProblem::target_objective() const { return objective(target(), p); }

double KktProblem::target_product() const { return std::pow(theta1, m1) * std::pow(theta2, m2); }

double objective(std::span<const double> x, double p) {
  require_positive(x);
  std::vector<double> terms(x.size());
  std::transform(x.begin(), x.end(), terms.begin(), [p](double v) { return std::pow(v, -p); });
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

ConstraintValues constraints(const KktProblem& problem, std::span<const double> e) {
  if (e.size() != static_cast<std::size_t>(problem.n())) throw DomainError("dimension mismatch");
  require_positive(e);
  ConstraintValues c;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : e) {
    sum += v;
    sum_sq += v * v;
  }
  c.g = sum - problem.target_sum();
  c.h = problem.target_sum_sq() - sum_sq;
  c.k = product(e) - problem.target_product();
  c.l1 = e.front() - problem.theta1;
  c.l2 = problem.xi - e.front();
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    c.m.push_back(e.front() - e[i]);
    c.n.push_back(e[i] - e.back());
  }
  const double tol = kFeasibilityTolerance;
  c.feasible = std::abs(c.g) <= tol && c.h <= tol && c.k <= tol && c.l1 <= tol && c.l2 <= tol &&
               std::all_of(c.m.begin(), c.m.end(), [tol](double v) { return v <= tol; }) &&
               std::all_of(c.n.begin(), c.n.end(), [tol](double v) { return v <= tol; });
  return c;
}

Main2Verdict theorem_main2_check(const KktProblem& problem, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(problem.n())) throw DomainError("dimension mismatch");
  require_positive(x);
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const auto c = constraints(problem, sorted);
  const double tol = kFeasibilityTolerance;

  Main2Verdict v;
  v.fx = objective(sorted, problem.p);
  v.ftarget = problem.target_objective();
  if (std::abs(c.g) > tol)
    v.failed_condition = 1;
  else if (c.h > tol)
    v.failed_condition = 2;
  else if (c.l1 > tol)
    v.failed_condition = 3;
  else if (c.k > tol)
    v.failed_condition = 4;
  if (v.failed_condition != 0) {
    v.status = Main2Status::Infeasible;
    return v;
  }
  v.status = v.fx >= v.ftarget - kObjectiveTolerance ? Main2Status::Consistent : Main2Status::Violation;
  return v;
}

SamplerStats sample_feasible(const KktProblem& problem, std::size_t count, std::uint64_t seed,
                             const std::function<void(std::span<const double>)>& visit) {
  SamplerStats stats;
  if (count == 0) return stats;
  const auto target = problem.target();
  const std::size_t n = target.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Emits x (sorted) if it is strictly feasible and not a near-copy of the target.
  auto offer = [&](std::vector<double> x, bool allow_target) {
    ++stats.attempts;
    if (std::any_of(x.begin(), x.end(), [](double v) { return !(v > 0.0); })) return;
    std::sort(x.begin(), x.end());
    if (!allow_target) {
      double dist = 0.0;
      for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, std::abs(x[i] - target[i]));
      if (dist < kMinPerturbation * problem.theta1) return;
    }
    const auto c = constraints(problem, x);
    if (!c.feasible || c.h > 0.0 || c.k > 0.0 || c.l1 > 0.0 || c.l2 > 0.0) return;
    ++stats.accepted;
    visit(x);
  };

  offer(target, true);

  if (n == 3 && stats.accepted < count) {
    // Sorted x1 <= x2 <= x3 with the target's sum, on a fixed grid.
    const double total = problem.target_sum();
    constexpr int kGrid = 48;
    const std::size_t budget = std::max<std::size_t>(1, count / 4);
    std::size_t used = 0;
    for (int i = 1; i <= kGrid && used < budget && stats.accepted < count; ++i) {
      const double x1 = total / 3.0 * i / kGrid;
      for (int j = 0; j <= kGrid && used < budget && stats.accepted < count; ++j) {
        const double x2 = x1 + ((total - x1) / 2.0 - x1) * j / kGrid;
        const std::size_t before = stats.accepted;
        offer({x1, x2, total - x1 - x2}, false);
        used += stats.accepted - before;
      }
    }
  }

  auto log_uniform_step = [&] {
    const double lo = std::log(kMinPerturbation);
    const double hi = std::log(kMaxPerturbation);
    return problem.theta1 * std::exp(lo + (hi - lo) * unit(rng));
  };

  std::size_t round = 0;
  while (stats.accepted < count) {
    const auto mode = round++ % 5;
    if (mode <= 1) {
      // zero-sum perturbation of the target
      const auto z = zero_sum_direction(rng, n, 0);
      const double eps = log_uniform_step();
      std::vector<double> x(target);
      for (std::size_t i = 0; i < n; ++i) x[i] += eps * z[i];
      offer(std::move(x), false);
    } else if (mode == 2) {
      // onto h = 0: |target + eps z|^2 = |target|^2
      auto z = zero_sum_direction(rng, n, 0);
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += target[i] * z[i];
      if (dot > 0.0)
        for (auto& v : z) v = -v;
      const double eps = 2.0 * std::abs(dot) * (1.0 + 1e-9);
      std::vector<double> x(target);
      for (std::size_t i = 0; i < n; ++i) x[i] += eps * z[i];
      offer(std::move(x), false);
    } else if (mode == 3) {
      // onto k = 0: contract a perturbed point towards the mean until the
      // product drops back to the target product
      const auto z = zero_sum_direction(rng, n, 0);
      const double eps = log_uniform_step();
      std::vector<double> y(target);
      for (std::size_t i = 0; i < n; ++i) y[i] += eps * z[i];
      if (std::any_of(y.begin(), y.end(), [](double v) { return !(v > 0.0); })) {
        ++stats.attempts;
        continue;
      }
      const double mean = problem.target_sum() / static_cast<double>(n);
      auto at = [&](double t) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = mean + t * (y[i] - mean);
        return x;
      };
      const double goal = problem.target_product();
      if (product(y) > goal) {
        ++stats.attempts;
        continue;
      }
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (product(at(mid)) > goal ? lo : hi) = mid;
      }
      offer(at(hi), false);
    } else {
      // onto l1 = 0: keep one theta1 coordinate fixed
      const auto z = zero_sum_direction(rng, n, 1);
      const double eps = log_uniform_step();
      std::vector<double> x(target);
      for (std::size_t i = 1; i < n; ++i) x[i] += eps * z[i];
      offer(std::move(x), false);
    }
  }
  return stats;
}

std::vector<std::vector<double>> sample_feasible(const KktProblem& problem, std::size_t count, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  out.reserve(count);
  sample_feasible(problem, count, seed, [&](std::span<const double> x) { out.emplace_back(x.begin(), x.end()); });
  return out;
}

KktPoint KktPoint::at(std::vector<double> e) {
  KktPoint pt;
  pt.D = product(e);
  const std::size_t inner = e.size() >= 2 ? e.size() - 2 : 0;
  pt.alpha.assign(inner, 0.0);
  pt.beta.assign(inner, 0.0);
  pt.e = std::move(e);
  return pt;
}

EndpointCounts endpoint_counts(std::span<const double> e, double rel_tol) {
  EndpointCounts c;
  if (e.empty()) return c;
  const double lo = *std::min_element(e.begin(), e.end());
  const double hi = *std::max_element(e.begin(), e.end());
  for (double v : e) {
    if (close_rel(v, lo, rel_tol))
      ++c.r;
    else if (close_rel(v, hi, rel_tol))
      ++c.t;
    else
      ++c.s;
  }
  if (close_rel(lo, hi, rel_tol)) c.t = c.r;
  return c;
}

KktResiduals kkt_residuals(const KktProblem& problem, const KktPoint& pt, double tol) {
  KktResiduals r;
  const std::size_t n = static_cast<std::size_t>(problem.n());
  if (pt.e.size() != n || pt.alpha.size() != n - 2 || pt.beta.size() != n - 2) {
    r.problem = "dimension mismatch";
    r.signs_ok = false;
    return r;
  }
  require_positive(pt.e);
  if (!std::is_sorted(pt.e.begin(), pt.e.end())) r.problem = "e is not nondecreasing";
  if (!close_rel(pt.D, product(pt.e), 1e-12) && r.problem.empty()) r.problem = "D differs from the product of e";

  auto nonneg = [&](double v, const char* name) {
    if (v < 0.0) {
      r.signs_ok = false;
      if (r.problem.empty()) r.problem = std::string(name) + " is negative";
    }
  };
  nonneg(pt.lambda, "lambda");
  nonneg(pt.rho, "rho");
  nonneg(pt.eta1, "eta1");
  nonneg(pt.eta2, "eta2");
  for (double a : pt.alpha) nonneg(a, "alpha");
  for (double b : pt.beta) nonneg(b, "beta");

  const double p = problem.p;
  auto common = [&](double x) { return -p * std::pow(x, -p - 1.0) + pt.nu - 2.0 * pt.lambda * x + pt.rho * pt.D / x; };
  r.stationarity.resize(n);
  double alpha_sum = 0.0;
  double beta_sum = 0.0;
  for (double a : pt.alpha) alpha_sum += a;
  for (double b : pt.beta) beta_sum += b;
  auto magnitude = [&](double x) {
    return p * std::pow(x, -p - 1.0) + std::abs(pt.nu) + 2.0 * std::abs(pt.lambda) * x + std::abs(pt.rho * pt.D / x);
  };
  std::vector<double> scale(n);
  r.stationarity[0] = common(pt.e[0]) + pt.eta1 - pt.eta2 + alpha_sum;
  scale[0] = magnitude(pt.e[0]) + pt.eta1 + pt.eta2 + alpha_sum;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    r.stationarity[i] = common(pt.e[i]) - pt.alpha[i - 1] + pt.beta[i - 1];
    scale[i] = magnitude(pt.e[i]) + pt.alpha[i - 1] + pt.beta[i - 1];
  }
  r.stationarity[n - 1] = common(pt.e[n - 1]) - beta_sum;
  scale[n - 1] = magnitude(pt.e[n - 1]) + beta_sum;
  for (std::size_t i = 0; i < n; ++i)
    r.max_stationarity = std::max(r.max_stationarity, std::abs(r.stationarity[i]) / std::max(1.0, std::abs(scale[i])));

  const auto c = constraints(problem, pt.e);
  auto slack = [&](double mult, double value) {
    r.max_complementarity = std::max(r.max_complementarity, std::abs(mult * value) / std::max(1.0, std::abs(mult)));
  };
  slack(pt.lambda, c.h);
  slack(pt.rho, c.k);
  slack(pt.eta1, c.l1);
  slack(pt.eta2, c.l2);
  for (std::size_t i = 0; i < c.m.size(); ++i) {
    slack(pt.alpha[i], c.m[i]);
    slack(pt.beta[i], c.n[i]);
  }

  r.max_primal = std::abs(c.g) / std::max(1.0, problem.target_sum());
  r.max_primal = std::max(r.max_primal, std::max(0.0, c.h) / std::max(1.0, problem.target_sum_sq()));
  r.max_primal = std::max(r.max_primal, std::max(0.0, c.k) / std::max(1.0, problem.target_product()));
  for (double v : {c.l1, c.l2}) r.max_primal = std::max(r.max_primal, std::max(0.0, v));
  for (double v : c.m) r.max_primal = std::max(r.max_primal, std::max(0.0, v));
  for (double v : c.n) r.max_primal = std::max(r.max_primal, std::max(0.0, v));

  r.max_residual = std::max({r.max_stationarity, r.max_complementarity, r.max_primal});
  r.pass = r.signs_ok && r.problem.empty() && r.max_residual <= tol;
  return r;
}

KktPoint canonical_multipliers(const KktProblem& problem) {
  if (!(problem.theta1 < problem.theta2)) throw DomainError("canonical multipliers need theta1 < theta2");
  auto pt = KktPoint::at(problem.target());
  const double p = problem.p;
  const double g1 = p * std::pow(problem.theta1, -p - 1.0);
  const double g2 = p * std::pow(problem.theta2, -p - 1.0);
  pt.lambda = (g1 - g2) / (2.0 * (problem.theta2 - problem.theta1));
  pt.nu = g1 + 2.0 * pt.lambda * problem.theta1;
  return pt;
}

std::vector<double> y_positive_roots(double nu, double lambda, double rho, double D, double p) {
  auto y = [&](double x) {
    return -p + nu * std::pow(x, p + 1.0) - 2.0 * lambda * std::pow(x, p + 2.0) + rho * D * std::pow(x, p);
  };
  std::vector<double> roots;
  const double step = std::log(kRootGridHi / kRootGridLo) / (kRootGridPoints - 1);
  double prev_x = kRootGridLo;
  double prev_y = y(prev_x);
  if (prev_y == 0.0) roots.push_back(prev_x);
  for (int i = 1; i < kRootGridPoints; ++i) {
    const double x = kRootGridLo * std::exp(step * i);
    const double fx = y(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (prev_y != 0.0 && (fx < 0.0) != (prev_y < 0.0)) {
      double lo = prev_x;
      double hi = x;
      const bool lo_neg = prev_y < 0.0;
      while (hi - lo > kRootTolerance * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((y(mid) < 0.0) == lo_neg ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_y = fx;
  }
  return roots;
}

MfcqCheck mfcq_witness(const KktProblem& problem, std::span<const double> e, double b, double c) {
  const std::size_t n = static_cast<std::size_t>(problem.n());
  if (e.size() != n) throw DomainError("dimension mismatch");
  require_positive(e);
  if (!std::is_sorted(e.begin(), e.end())) throw DomainError("MFCQ witness expects a nondecreasing point");
  if (!(e.front() < e.back())) throw DomainError("MFCQ witness needs e_1 < e_n");
  const auto cons = constraints(problem, e);
  if (cons.l2 >= -kFeasibilityTolerance) throw DomainError("MFCQ witness needs l2(e) < 0");
  if (!(b > 0.0) || !(c > b)) throw DomainError("MFCQ witness needs 0 < b < c");

  MfcqCheck out;
  auto& w = out.witness;
  w.b = b;
  w.c = c;
  w.t = static_cast<int>(std::count_if(e.begin(), e.end(), [&](double v) { return close_rel(v, e.back(), 1e-12); }));
  w.a = (w.t - 1) * b + c;
  w.w.assign(n, 0.0);
  w.w[0] = -w.a;
  for (std::size_t i = n - static_cast<std::size_t>(w.t); i + 1 < n; ++i) w.w[i] = b;
  w.w[n - 1] = c;

  out.grad_g_dot = std::accumulate(w.w.begin(), w.w.end(), 0.0);

  auto dot = [&](const std::vector<double>& grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += grad[i] * w.w[i];
    return s;
  };
  const double tol = kFeasibilityTolerance;
  const double D = product(e);
  if (std::abs(cons.h) <= tol) {
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = -2.0 * e[i];
    out.active.emplace_back("h", dot(grad));
  }
  if (std::abs(cons.k) <= tol * std::max(1.0, problem.target_product())) {
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = D / e[i];
    out.active.emplace_back("k", dot(grad));
  }
  if (std::abs(cons.l1) <= tol) {
    std::vector<double> grad(n, 0.0);
    grad[0] = 1.0;
    out.active.emplace_back("l1", dot(grad));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::abs(cons.m[i - 1]) <= tol) {
      std::vector<double> grad(n, 0.0);
      grad[0] = 1.0;
      grad[i] = -1.0;
      out.active.emplace_back("m" + std::to_string(i + 1), dot(grad));
    }
    if (std::abs(cons.n[i - 1]) <= tol) {
      std::vector<double> grad(n, 0.0);
      grad[i] = 1.0;
      grad[n - 1] = -1.0;
      out.active.emplace_back("n" + std::to_string(i + 1), dot(grad));
    }
  }
  out.verified = out.grad_g_dot == 0.0 &&
                 std::all_of(out.active.begin(), out.active.end(), [](const auto& a) { return a.second < 0.0; });
  return out;
}

std::vector<std::pair<double, double>> lemma_2eq_solve(int m, int n, int s, int t, double a1, double a2) {
  if (m < 1 || n < 1 || s < 1 || t < 1) throw DomainError("counts must be positive integers");
  if (m + n != s + t) throw DomainError("need m + n = s + t");
  if (!(a1 < a2)) throw DomainError("need a1 < a2");
  const double first = m * a1 + n * a2;
  const double second = m * a1 * a1 + n * a2 * a2;
  // x = (first - t y) / s substituted into the second equation.
  const double qa = static_cast<double>(t) * (t + s);
  const double qb = -2.0 * first * t;
  const double qc = first * first - s * second;
  const double disc = qb * qb - 4.0 * qa * qc;
  const double scale = std::max({1.0, std::abs(a1), std::abs(a2)});
  const double tol = 1e-9 * scale;
  std::vector<double> ys;
  if (disc < -1e-12 * qb * qb) return {};
  const double root = std::sqrt(std::max(0.0, disc));
  // Numerically stable pair of roots.
  const double q = -0.5 * (qb + (qb >= 0.0 ? root : -root));
  if (q != 0.0) ys.push_back(qc / q);
  ys.push_back(q / qa);

  std::vector<std::pair<double, double>> out;
  for (double y : ys) {
    const double x = (first - t * y) / s;
    if (x > 0.0 && x <= a1 + tol && y >= a2 - tol) {
      const std::pair<double, double> sol{std::min(x, a1), std::max(y, a2)};
      if (std::none_of(out.begin(), out.end(), [&](const auto& o) {
            return std::abs(o.first - sol.first) <= tol && std::abs(o.second - sol.second) <= tol;
          }))
        out.push_back(sol);
    }
  }
  return out;
}

double PhiFunction::operator()(double x) const {
  switch (kind) {
    case Kind::Square: return x * x;
    case Kind::Exp: return std::exp(x);
    case Kind::NegLog: return -std::log(x);
    case Kind::Log: return std::log(x);
    case Kind::InversePower: return std::pow(x, -p);
  }
  return 0.0;
}

bool PhiFunction::convex() const { return kind != Kind::Log; }
bool PhiFunction::concave() const { return kind == Kind::Log; }
// phi' for log is 1/x (convex); for the others it is not needed by variant 2.
bool PhiFunction::derivative_convex() const { return kind == Kind::Log || kind == Kind::Exp; }
bool PhiFunction::needs_positive() const {
  return kind == Kind::NegLog || kind == Kind::Log || kind == Kind::InversePower;
}

PhiFunction PhiFunction::parse(const std::string& id) {
  if (id == "square") return {Kind::Square, 1.0};
  if (id == "exp") return {Kind::Exp, 1.0};
  if (id == "neg-log") return {Kind::NegLog, 1.0};
  if (id == "log") return {Kind::Log, 1.0};
  if (id.rfind("power(-", 0) == 0 && id.back() == ')') {
    const auto inner = id.substr(7, id.size() - 8);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(inner, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == inner.size() && p > 0.0) return {Kind::InversePower, p};
  }
  throw std::invalid_argument("unknown phi function '" + id + "'");
}

BennetVerdict bennet_check(int variant, std::span<const double> alphas, std::span<const double> deltas,
                           std::span<const double> a, std::span<const double> d, const PhiFunction& phi) {
  if (alphas.size() != 2 || deltas.size() != 2 || a.size() != 2 || d.size() != 2)
    throw std::invalid_argument("bennet_check works on two-point configurations");
  if (variant != 1 && variant != 2) throw std::invalid_argument("variant must be 1 or 2");
  constexpr double rel = 1e-12;
  const bool weights_ok = alphas[0] >= 0 && alphas[1] >= 0 && deltas[0] >= 0 && deltas[1] >= 0;
  const bool mass_ok = close_rel(alphas[0] + alphas[1], deltas[0] + deltas[1], rel);
  const bool mean_ok = close_rel(alphas[0] * a[0] + alphas[1] * a[1], deltas[0] * d[0] + deltas[1] * d[1], rel);
  bool order_ok = false;
  bool extra_ok = true;
  bool shape_ok = false;
  if (variant == 1) {
    order_ok = d[0] < a[0] && a[0] < a[1] && a[1] < d[1];
    shape_ok = phi.convex();
  } else {
    order_ok = a[0] < d[0] && d[0] < a[1] && a[1] < d[1];
    const double lhs = alphas[0] * a[0] * a[0] + alphas[1] * a[1] * a[1];
    const double rhs = deltas[0] * d[0] * d[0] + deltas[1] * d[1] * d[1];
    extra_ok = lhs >= rhs - rel * std::max(1.0, std::abs(rhs));
    shape_ok = phi.concave() && phi.derivative_convex();
  }
  const bool domain_ok = !phi.needs_positive() || (a[0] > 0 && a[1] > 0 && d[0] > 0 && d[1] > 0);
  if (!(weights_ok && mass_ok && mean_ok && order_ok && extra_ok && shape_ok && domain_ok))
    return BennetVerdict::NotApplicable;
  const double lhs = alphas[0] * phi(a[0]) + alphas[1] * phi(a[1]);
  const double rhs = deltas[0] * phi(d[0]) + deltas[1] * phi(d[1]);
  return lhs <= rhs + 1e-12 ? BennetVerdict::Holds : BennetVerdict::Fails;
}

nlohmann::json to_json(const KktResiduals& r) {
  return {{"pass", r.pass},
          {"max_residual", r.max_residual},
          {"max_stationarity", r.max_stationarity},
          {"max_complementarity", r.max_complementarity},
          {"max_primal", r.max_primal},
          {"signs_ok", r.signs_ok},
          {"stationarity", r.stationarity},
          {"problem", r.problem}};
}

}  // namespace optdesign
