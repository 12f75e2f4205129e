#include "optdesign/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "optdesign/canonical.hpp"
#include "optdesign/enumerate.hpp"
#include "optdesign/spectra.hpp"

namespace optdesign {

namespace {

void insert_sorted(std::vector<std::string>& list, const std::string& s) {
  const auto it = std::lower_bound(list.begin(), list.end(), s);
  if (it == list.end() || *it != s) list.insert(it, s);
}

bool has_petersen_spectrum(const Graph& g) {
  if (g.order() != 10) return false;
  const auto eig = sym_eig(laplacian(g).cast<double>());
  static const double expected[] = {5, 5, 5, 5, 2, 2, 2, 2, 2, 0};
  for (std::size_t i = 0; i < 10; ++i)
    if (std::abs(eig[i] - expected[i]) > 1e-9) return false;
  return true;
}

bool equals_petersen(const std::vector<std::string>& witnesses) {
  if (witnesses.size() != 1 || witnesses.front() != petersen_certificate()) return false;
  return has_petersen_spectrum(decode_graph6(witnesses.front()));
}

template <class T>
void append(std::vector<T>& into, const std::vector<T>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end(), [](const T& a, const T& b) { return a.index < b.index; });
}

}  // namespace

const std::string& petersen_certificate() {
  static const std::string cert = canonical_form(petersen()).certificate;
  return cert;
}

void PropTeReport::add(const Graph& g, std::size_t index) {
  if (g.order() != kBoundOrder || g.edge_count() != kBoundEdges) {
    precondition_failures.push_back({index, encode_graph6(g),
                                     "expected 10 vertices and 15 edges, got " + std::to_string(g.order()) +
                                         " and " + std::to_string(g.edge_count())});
    return;
  }
  if (!g.is_connected()) {
    precondition_failures.push_back({index, encode_graph6(g), "graph is disconnected"});
    return;
  }
  ++total_connected;

  const auto eig = sym_eig(laplacian(g).cast<double>());
  const double mu9 = eig[static_cast<std::size_t>(kBoundOrder - 2)];
  max_mu9 = std::max(max_mu9, mu9);

  int degree = 0;
  const bool is_regular = g.is_regular(&degree);
  if (is_regular) ++regular;

  if (std::abs(mu9 - kMu9Bound) < kMu9EscalationThreshold) {
    ++exact_escalations;
    const bool certified = integer_eigenvalue_certificate(g, 2);
    if (certified && std::abs(mu9 - kMu9Bound) <= kMu9FilterTolerance)
      insert_sorted(mu9_equality_witnesses, canonical_form(g).certificate);
    else if (!certified && mu9 > kMu9Bound + kMu9FilterTolerance)
      mu9_bound_violations.push_back({index, encode_graph6(g), mu9, "mu9 exceeds 2 and 2 is not an eigenvalue"});
  } else if (mu9 > kMu9Bound) {
    mu9_bound_violations.push_back({index, encode_graph6(g), mu9, "mu9 exceeds 2"});
  }

  if (!is_regular) {
    const auto degs = g.degrees();
    const int min_degree = *std::min_element(degs.begin(), degs.end());
    if (mu9 > min_degree + kMu9FilterTolerance)
      min_degree_violations.push_back({index, encode_graph6(g), mu9, "mu9 exceeds the minimum degree"});
  }

  const std::int64_t product = kBoundOrder * spanning_tree_count(g);
  max_product = std::max(max_product, product);
  if (product > kProductBound)
    product_bound_violations.push_back(
        {index, encode_graph6(g), static_cast<double>(product), "product of nonzero eigenvalues exceeds 20000"});
  else if (product == kProductBound)
    insert_sorted(product_equality_witnesses, canonical_form(g).certificate);
}

void PropTeReport::merge(const PropTeReport& other) {
  total_connected += other.total_connected;
  regular += other.regular;
  exact_escalations += other.exact_escalations;
  max_mu9 = std::max(max_mu9, other.max_mu9);
  max_product = std::max(max_product, other.max_product);
  append(mu9_bound_violations, other.mu9_bound_violations);
  append(product_bound_violations, other.product_bound_violations);
  append(min_degree_violations, other.min_degree_violations);
  append(precondition_failures, other.precondition_failures);
  for (const auto& w : other.mu9_equality_witnesses) insert_sorted(mu9_equality_witnesses, w);
  for (const auto& w : other.product_equality_witnesses) insert_sorted(product_equality_witnesses, w);
}

bool PropTeReport::no_violations() const {
  return mu9_bound_violations.empty() && product_bound_violations.empty() && min_degree_violations.empty();
}

bool PropTeReport::witnesses_are_petersen() const {
  return equals_petersen(mu9_equality_witnesses) && equals_petersen(product_equality_witnesses);
}

PropTeReport verify_prop_te(const std::vector<Graph>& graphs) {
  PropTeReport report;
  for (std::size_t i = 0; i < graphs.size(); ++i) report.add(graphs[i], i);
  return report;
}

PropTeReport verify_prop_te_enumerated(int jobs) {
  jobs = std::max(1, jobs);
  std::vector<PropTeReport> parts(static_cast<std::size_t>(jobs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  auto work = [&](int w) {
    try {
      auto& report = parts[static_cast<std::size_t>(w)];
      std::size_t local = 0;
      enumerate_graphs({kBoundOrder, kBoundEdges, true, w, jobs},
                       [&](const SmallGraph& g) { report.add(g.to_graph(), local++); });
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) workers.emplace_back(work, w);
    for (auto& t : workers) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  PropTeReport total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

nlohmann::json to_json(const PropTeReport& r) {
  auto violations = [](const std::vector<BoundViolation>& list) {
    auto arr = nlohmann::json::array();
    for (const auto& v : list)
      arr.push_back({{"index", v.index}, {"graph6", v.graph6}, {"value", v.value}, {"detail", v.detail}});
    return arr;
  };
  auto failures = nlohmann::json::array();
  for (const auto& f : r.precondition_failures)
    failures.push_back({{"index", f.index}, {"graph6", f.graph6}, {"reason", f.reason}});
  return {{"total_connected", r.total_connected},
          {"regular", r.regular},
          {"exact_escalations", r.exact_escalations},
          {"max_mu9", r.max_mu9},
          {"max_product", r.max_product},
          {"mu9_bound_violations", violations(r.mu9_bound_violations)},
          {"mu9_equality_witnesses", r.mu9_equality_witnesses},
          {"product_bound_violations", violations(r.product_bound_violations)},
          {"product_equality_witnesses", r.product_equality_witnesses},
          {"min_degree_violations", violations(r.min_degree_violations)},
          {"precondition_failures", failures},
          {"witnesses_are_petersen", r.witnesses_are_petersen()},
          {"verified", r.verified()}};
}

}  // namespace optdesign
