#include "optdesign/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <gmpxx.h>

#include "optdesign/canonical.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/spectra.hpp"

namespace optdesign {

namespace {

void require_positive(const Spectrum& s) {
  if (s.values.empty()) throw std::invalid_argument("empty spectrum");
  for (double x : s.values)
    if (!(x > 0.0)) throw std::invalid_argument("spectrum values must be positive");
}

bool ties(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Simple-graph view of a design, when it is one (k = 2, binary, no repeated block).
std::optional<Graph> as_simple_graph(const Design& d) {
  if (d.block_size() != 2 || !d.is_binary() || d.treatments() > kMaxCanonicalOrder) return std::nullopt;
  Graph g(d.treatments());
  for (const auto& block : d.blocks()) {
    if (g.has_edge(block[0], block[1])) return std::nullopt;
    g.add_edge(block[0], block[1]);
  }
  return g;
}

/// sum mu_i^-p over the nonzero eigenvalues of C(d), exactly, via
/// trace((C + J/v)^-p) - 1.
mpq_class exact_inverse_power_sum(const Design& d, int p) {
  const auto c = information_matrix(d);
  const std::size_t v = c.order();
  const long vk = static_cast<long>(v) * c.k;
  // A = v*(kC) + k*J, and C + J/v = A / (vk).
  std::vector<std::vector<mpq_class>> a(v, std::vector<mpq_class>(2 * v));
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = 0; j < v; ++j) a[i][j] = static_cast<long>(static_cast<long long>(v) * c.scaled(i, j) + c.k);
    a[i][v + i] = 1;
  }
  for (std::size_t col = 0; col < v; ++col) {
    std::size_t pivot = col;
    while (pivot < v && a[pivot][col] == 0) ++pivot;
    if (pivot == v) throw DomainError("information matrix is singular beyond its null direction");
    std::swap(a[pivot], a[col]);
    const mpq_class inv = 1 / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < v; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t j = 0; j < 2 * v; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<std::vector<mpq_class>> inv(v, std::vector<mpq_class>(v));
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j) inv[i][j] = a[i][v + j] * vk;
  auto power = inv;
  for (int step = 1; step < p; ++step) {
    std::vector<std::vector<mpq_class>> next(v, std::vector<mpq_class>(v));
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t l = 0; l < v; ++l) {
        if (power[i][l] == 0) continue;
        for (std::size_t j = 0; j < v; ++j) next[i][j] += power[i][l] * inv[l][j];
      }
    power = std::move(next);
  }
  mpq_class trace = 0;
  for (std::size_t i = 0; i < v; ++i) trace += power[i][i];
  return trace - 1;
}

std::optional<int> integral_power(double p) {
  if (p >= 1.0 && p <= 64.0 && std::floor(p) == p) return static_cast<int>(p);
  return std::nullopt;
}

}  // namespace

double phi_p_value(const Spectrum& s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("Phi_p requires p > 0");
  require_positive(s);
  // Scale by the smallest eigenvalue so large p cannot overflow.
  const double lo = *std::min_element(s.values.begin(), s.values.end());
  double sum = 0.0;
  for (double x : s.values) sum += std::pow(lo / x, p);
  return std::pow(sum / static_cast<double>(s.values.size()), 1.0 / p) / lo;
}

double a_value(const Spectrum& s) {
  require_positive(s);
  double inv = 0.0;
  for (double x : s.values) inv += 1.0 / x;
  return static_cast<double>(s.values.size()) / inv;
}

double d_value(const Spectrum& s) {
  require_positive(s);
  double prod = 1.0;
  for (double x : s.values) prod *= x;
  return prod;
}

double e_value(const Spectrum& s) {
  require_positive(s);
  return *std::min_element(s.values.begin(), s.values.end());
}

double trace_c_sq(const Design& d) {
  const auto c = information_matrix(d);
  return static_cast<double>(c.scaled_trace_sq()) / (static_cast<double>(c.k) * static_cast<double>(c.k));
}

Type1Function Type1Function::parse(const std::string& id) {
  if (id == "neglog") return neglog();
  if (id.rfind("power(", 0) == 0 && id.back() == ')') {
    const auto inner = id.substr(6, id.size() - 7);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(inner, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == inner.size() && p > 0.0) return power(p);
  }
  throw std::invalid_argument("unknown type-1 function '" + id + "'");
}

double type1_value(const Spectrum& s, const Type1Function& f) {
  require_positive(s);
  double sum = 0.0;
  for (double x : s.values) sum += f.kind == Type1Function::Kind::Power ? std::pow(x, -f.p) : -std::log(x);
  return sum;
}

bool majorizes(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("majorization needs vectors of equal length");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end(), std::greater<>());
  std::sort(y.begin(), y.end(), std::greater<>());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    if (sx < sy - tol * std::max({1.0, std::abs(sx), std::abs(sy)})) return false;
  }
  return true;
}

bool majorizes(const Spectrum& a, const Spectrum& b, double tol) { return majorizes(a.values, b.values, tol); }

bool completely_symmetric(const InfoMatrix& c) {
  const std::size_t n = c.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && c.scaled(i, j) != c.scaled(0, 0)) return false;
      if (i != j && c.scaled(i, j) != c.scaled(0, 1)) return false;
    }
  return true;
}

bool completely_symmetric(const RealMatrix& c, double tol) {
  const std::size_t n = c.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && std::abs(c(i, j) - c(0, 0)) > tol) return false;
      if (i != j && std::abs(c(i, j) - c(0, 1)) > tol) return false;
    }
  return true;
}

bool bagchi_precondition(int g, int v, int k, int r) {
  if (k >= v) throw std::invalid_argument("Bagchi precondition requires k < v");
  if (g < 0 || v < 1 || k < 1 || r < 1) throw std::invalid_argument("Bagchi precondition arguments out of range");
  return static_cast<long long>(g) * r * (v - k) <= static_cast<long long>(v - 1) * (k - 1);
}

CriteriaReport evaluate_criteria(const Design& d, std::span<const double> p_grid) {
  if (!is_connected(d)) throw DomainError("design is not connected");
  const auto c = information_matrix(d);
  CriteriaReport r;
  r.v = d.treatments();
  r.b = d.block_count();
  r.k = d.block_size();
  r.binary = d.is_binary();
  r.spectrum = nonzero_spectrum(c);
  r.trace_c = c.trace();
  r.trace_c_sq = static_cast<double>(c.scaled_trace_sq()) / (static_cast<double>(c.k) * c.k);
  r.e_value = e_value(r.spectrum);
  r.d_value = d_value(r.spectrum);
  r.a_value = a_value(r.spectrum);
  for (double p : p_grid) r.phi_values.emplace_back(p, phi_p_value(r.spectrum, p));
  r.distinct_count = r.spectrum.distinct_count();
  return r;
}

nlohmann::json to_json(const CriteriaReport& r) {
  nlohmann::json phi = nlohmann::json::array();
  for (auto [p, value] : r.phi_values) phi.push_back({{"p", p}, {"value", value}});
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : r.spectrum.clusters) clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  return {{"v", r.v},
          {"b", r.b},
          {"k", r.k},
          {"binary", r.binary},
          {"trace_c", r.trace_c},
          {"trace_c_sq", r.trace_c_sq},
          {"e_value", r.e_value},
          {"d_value", r.d_value},
          {"a_value", r.a_value},
          {"phi", phi},
          {"distinct_count", r.distinct_count},
          {"spectrum", clusters}};
}

// ---------------------------------------------------------------------------

MainTheoremCheck::MainTheoremCheck(Design candidate, MainTheoremOptions options)
    : candidate_(std::move(candidate)), options_(std::move(options)) {
  if (!candidate_.is_binary() || !is_connected(candidate_))
    throw DomainError("candidate must be a binary connected design");
  for (double p : options_.p_grid)
    if (!(p > 0.0)) throw DomainError("p grid values must be positive");
  candidate_scores_ = score(candidate_);
  candidate_key_ = key_of(candidate_);
  candidate_distinct_ = nonzero_spectrum(information_matrix(candidate_)).distinct_count();
  trace_sq_.name = "trace_c_sq";
  e_.name = "E";
  d_.name = "D";
  for (double p : options_.p_grid) {
    Extremum ex;
    ex.name = "phi_" + nlohmann::json(p).dump();
    phi_.push_back(std::move(ex));
  }
}

std::string MainTheoremCheck::key_of(const Design& d) const {
  if (auto g = as_simple_graph(d)) return "graph:" + canonical_form(*g).certificate;
  return "blocks:" + d.canonical_encoding();
}

MainTheoremCheck::Scores MainTheoremCheck::score(const Design& d) const {
  const auto c = information_matrix(d);
  const auto spectrum = nonzero_spectrum(c);
  Scores s;
  s.trace_sq = static_cast<double>(c.scaled_trace_sq());
  s.e = -e_value(spectrum);
  if (auto g = as_simple_graph(d)) {
    // Graph designs: D is certified through the spanning tree count.
    s.d = -static_cast<double>(spanning_tree_count(*g));
  } else {
    double logdet = 0.0;
    for (double x : spectrum.values) logdet += std::log(x);
    s.d = -logdet;
  }
  for (double p : options_.p_grid) s.phi.push_back(phi_p_value(spectrum, p));
  return s;
}

void MainTheoremCheck::offer(Extremum& ex, double value, const Design& d, const std::string& id, bool keep_design) {
  const double tol = options_.tie_tolerance;
  if (ex.seen && !ties(value, ex.best, tol) && value > ex.best) return;
  if (!ex.seen || (!ties(value, ex.best, tol) && value < ex.best)) {
    ex.seen = true;
    ex.best = value;
    ex.tie_count = 0;
    ex.witnesses.clear();
  }
  ex.best = std::min(ex.best, value);
  ++ex.tie_count;
  if (ex.witnesses.size() < options_.witness_cap)
    ex.witnesses.push_back({id, key_of(d), value, keep_design ? std::optional<Design>(d) : std::nullopt});
}

void MainTheoremCheck::add(const Design& member, const std::string& id) {
  if (member.treatments() != candidate_.treatments() || member.block_count() != candidate_.block_count() ||
      member.block_size() != candidate_.block_size())
    throw DomainError("class member '" + id + "' has a different (v, b, k) than the candidate");
  if (!member.is_binary() || !is_connected(member)) {
    ++skipped_;
    return;
  }
  ++members_;
  const auto s = score(member);
  offer(trace_sq_, s.trace_sq, member, id, false);
  offer(e_, s.e, member, id, false);
  offer(d_, s.d, member, id, false);
  for (std::size_t i = 0; i < phi_.size(); ++i) offer(phi_[i], s.phi[i], member, id, true);
}

void MainTheoremCheck::merge(const MainTheoremCheck& other) {
  members_ += other.members_;
  skipped_ += other.skipped_;
  auto fold = [&](Extremum& into, const Extremum& from) {
    if (!from.seen) return;
    const double tol = options_.tie_tolerance;
    if (!into.seen || (!ties(from.best, into.best, tol) && from.best < into.best)) {
      into = from;
      return;
    }
    if (!ties(from.best, into.best, tol)) return;
    into.best = std::min(into.best, from.best);
    into.tie_count += from.tie_count;
    for (const auto& w : from.witnesses)
      if (into.witnesses.size() < options_.witness_cap) into.witnesses.push_back(w);
  };
  fold(trace_sq_, other.trace_sq_);
  fold(e_, other.e_);
  fold(d_, other.d_);
  for (std::size_t i = 0; i < phi_.size(); ++i) fold(phi_[i], other.phi_[i]);
}

CriterionVerdict MainTheoremCheck::verdict(const Extremum& ex, double candidate_score,
                                           std::optional<int> exact_power) const {
  const double tol = options_.tie_tolerance;
  CriterionVerdict v;
  v.name = ex.name;
  v.candidate = candidate_score;
  if (!ex.seen) {
    v.best = candidate_score;
    v.candidate_attains = true;
    v.unique = true;
    return v;
  }
  v.best = std::min(ex.best, candidate_score);
  v.candidate_attains = ties(candidate_score, ex.best, tol) || candidate_score < ex.best;

  std::vector<const Witness*> tied;
  for (const auto& w : ex.witnesses)
    if (ties(w.score, v.best, tol)) tied.push_back(&w);
  v.tie_count = ex.tie_count;
  std::vector<const Witness*> rivals;
  for (const auto* w : tied)
    if (w->key != candidate_key_) rivals.push_back(w);

  if (!rivals.empty() && exact_power &&
      std::all_of(rivals.begin(), rivals.end(), [](const Witness* w) { return w->design.has_value(); })) {
    v.exact_tie_break = true;
    const auto mine = exact_inverse_power_sum(candidate_, *exact_power);
    std::vector<const Witness*> remaining;
    for (const auto* w : rivals) {
      const auto theirs = exact_inverse_power_sum(*w->design, *exact_power);
      if (theirs < mine) v.candidate_attains = false;
      if (theirs <= mine) remaining.push_back(w);
    }
    v.tie_count -= rivals.size() - remaining.size();
    rivals = std::move(remaining);
  }

  const bool overflowed = ex.tie_count > ex.witnesses.size();
  v.unique = v.candidate_attains && rivals.empty() && !overflowed;
  for (const auto* w : tied) v.witness_ids.push_back(w->id);
  return v;
}

MainTheoremReport MainTheoremCheck::report() const {
  MainTheoremReport r;
  r.members = members_;
  r.skipped = skipped_;
  r.two_eigenvalues = candidate_distinct_ == 2;
  r.trace_sq = verdict(trace_sq_, candidate_scores_.trace_sq, std::nullopt);
  r.e_optimal = verdict(e_, candidate_scores_.e, std::nullopt);
  r.d_optimal = verdict(d_, candidate_scores_.d, std::nullopt);
  r.phi_optimal_everywhere = true;
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    r.phi.push_back(verdict(phi_[i], candidate_scores_.phi[i], integral_power(options_.p_grid[i])));
    r.phi_optimal_everywhere = r.phi_optimal_everywhere && r.phi.back().candidate_attains;
  }
  r.hypotheses_hold = r.two_eigenvalues && r.trace_sq.candidate_attains && r.e_optimal.candidate_attains &&
                      r.d_optimal.candidate_attains;
  r.consistent = !r.hypotheses_hold || r.phi_optimal_everywhere;
  return r;
}

namespace {
nlohmann::json verdict_json(const CriterionVerdict& v) {
  return {{"name", v.name},
          {"best", v.best},
          {"candidate", v.candidate},
          {"candidate_attains", v.candidate_attains},
          {"unique", v.unique},
          {"tie_count", v.tie_count},
          {"exact_tie_break", v.exact_tie_break},
          {"witnesses", v.witness_ids}};
}
}  // namespace

nlohmann::json to_json(const MainTheoremReport& r) {
  nlohmann::json phi = nlohmann::json::array();
  for (const auto& v : r.phi) phi.push_back(verdict_json(v));
  return {{"members", r.members},
          {"skipped", r.skipped},
          {"h0_two_eigenvalues", r.two_eigenvalues},
          {"h1_trace_c_sq", verdict_json(r.trace_sq)},
          {"h2_e_optimal", verdict_json(r.e_optimal)},
          {"h3_d_optimal", verdict_json(r.d_optimal)},
          {"phi", phi},
          {"hypotheses_hold", r.hypotheses_hold},
          {"phi_optimal_everywhere", r.phi_optimal_everywhere},
          {"consistent", r.consistent}};
}

}  // namespace optdesign
