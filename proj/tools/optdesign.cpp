#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "optdesign/bounds.hpp"
#include "optdesign/canonical.hpp"
#include "optdesign/criteria.hpp"
#include "optdesign/design.hpp"
#include "optdesign/enumerate.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/inequality.hpp"
#include "optdesign/manifest.hpp"
#include "optdesign/search.hpp"
#include "optdesign/spectra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace optdesign;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kDomain = 3, kVerification = 4, kCorrupt = 5 };

struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

int default_jobs() {
  if (const char* env = std::getenv("OPTDESIGN_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError(kUsage, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Machine records go to stdout behind a manifest line; tables go to stderr.
class Run {
 public:
  explicit Run(std::string command) {
    manifest_.command = std::move(command);
    manifest_.start();
  }
  RunManifest& manifest() { return manifest_; }
  void emit(json record) { records_.push_back(std::move(record)); }
  void add_input(const std::string& path) {
    try {
      manifest_.add_input(path);
    } catch (const std::exception& e) {
      throw ExitError(kUsage, e.what());
    }
  }
  /// Manifest line for embedding in output files.
  std::string header_line() {
    manifest_.finish();
    return to_json(manifest_).dump();
  }
  int finish(int code) {
    manifest_.finish();
    std::cout << to_json(manifest_).dump() << '\n';
    for (const auto& r : records_) std::cout << r.dump() << '\n';
    std::cout.flush();
    return code;
  }

 private:
  RunManifest manifest_;
  std::vector<json> records_;
};

void table(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) std::cerr << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string design;
  std::vector<double> p_grid = kDefaultPGrid;
};

int cmd_eval(const EvalArgs& a, Run& run) {
  run.manifest().flags = {{"design", a.design}, {"p", a.p_grid}};
  run.add_input(a.design);
  Design d = [&] {
    try {
      return parse_design(read_file(a.design));
    } catch (const ParseError& e) {
      throw ExitError(kUsage, std::string("parse error: ") + e.what());
    }
  }();
  const auto report = evaluate_criteria(d, a.p_grid);
  json rec = to_json(report);
  rec["type"] = "criteria";
  if (const auto gdd = gdd_recognize(d)) {
    const auto& p = gdd->params;
    rec["gdd"] = {{"m", p.m}, {"n", p.n}, {"k", p.k}, {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"r", p.r}};
  }
  run.emit(rec);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"design", a.design},
      {"v b k", std::to_string(report.v) + " " + std::to_string(report.b) + " " + std::to_string(report.k)},
      {"trace C", fmt(report.trace_c)},
      {"trace C^2", fmt(report.trace_c_sq)},
      {"E", fmt(report.e_value)},
      {"D", fmt(report.d_value)},
      {"A", fmt(report.a_value)},
      {"distinct", std::to_string(report.distinct_count)}};
  for (auto [p, v] : report.phi_values) rows.emplace_back("phi(" + fmt(p) + ")", fmt(v));
  table(rows);
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyPetersenArgs {
  std::string graphs;
  int jobs = 1;
};

int cmd_verify_petersen(const VerifyPetersenArgs& a, Run& run) {
  run.manifest().flags = {{"graphs", a.graphs}, {"jobs", a.jobs}};
  PropTeReport report;
  if (a.graphs.empty()) {
    report = verify_prop_te_enumerated(a.jobs);
  } else {
    run.add_input(a.graphs);
    std::ifstream in(a.graphs);
    const auto lines = read_graph6_lines(in);
    std::vector<Graph> graphs;
    graphs.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      try {
        graphs.push_back(decode_graph6(lines[i]));
      } catch (const ParseError& e) {
        throw ExitError(kCorrupt, "record " + std::to_string(i + 1) + " '" + lines[i] + "': " + e.what());
      }
    }
    const int jobs = std::clamp(a.jobs, 1, std::max<int>(1, static_cast<int>(graphs.size())));
    std::vector<PropTeReport> parts(static_cast<std::size_t>(jobs));
    std::vector<std::thread> workers;
    const std::size_t chunk = (graphs.size() + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(graphs.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) parts[static_cast<std::size_t>(w)].add(graphs[i], i);
      });
    for (auto& t : workers) t.join();
    for (const auto& p : parts) report.merge(p);
  }
  json rec = to_json(report);
  rec["type"] = "bounds";
  run.emit(rec);

  table({{"connected graphs", std::to_string(report.total_connected)},
         {"regular", std::to_string(report.regular)},
         {"max mu9", fmt(report.max_mu9)},
         {"max product", std::to_string(report.max_product)},
         {"mu9 violations", std::to_string(report.mu9_bound_violations.size())},
         {"product violations", std::to_string(report.product_bound_violations.size())},
         {"mu9 = 2 witnesses", std::to_string(report.mu9_equality_witnesses.size())},
         {"product = 20000 witnesses", std::to_string(report.product_equality_witnesses.size())},
         {"witnesses are Petersen", report.witnesses_are_petersen() ? "yes" : "no"},
         {"precondition failures", std::to_string(report.precondition_failures.size())}});
  for (const auto& f : report.precondition_failures)
    std::cerr << "precondition: record " << f.index + 1 << " " << f.graph6 << ": " << f.reason << '\n';
  for (const auto* list : {&report.mu9_bound_violations, &report.product_bound_violations, &report.min_degree_violations})
    for (const auto& v : *list) std::cerr << "violation: " << v.graph6 << " " << v.detail << " (" << fmt(v.value) << ")\n";

  if (!report.precondition_failures.empty()) return kCorrupt;
  return report.verified() ? kOk : kVerification;
}

// ---------------------------------------------------------------------------

struct VerifyIneqArgs {
  int m1 = 1;
  int m2 = 1;
  double theta1 = 1.0;
  double theta2 = 2.0;
  double p = 1.0;
  std::optional<double> xi;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  int jobs = 1;
};

constexpr std::size_t kSampleChunk = 10000;

struct IneqSummary {
  std::size_t samples = 0;
  std::size_t attempts = 0;
  std::size_t violations = 0;
  std::size_t infeasible = 0;
  std::size_t near_equal = 0;
  std::size_t near_equal_off_target = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> worst;  ///< violating points, capped
};

IneqSummary sample_chunk(const KktProblem& problem, std::size_t count, std::uint64_t seed) {
  IneqSummary s;
  const auto target = problem.target();
  const auto stats = sample_feasible(problem, count, seed, [&](std::span<const double> x) {
    ++s.samples;
    const auto verdict = theorem_main2_check(problem, x);
    if (verdict.status == Main2Status::Infeasible) {
      ++s.infeasible;
      return;
    }
    s.min_gap = std::min(s.min_gap, verdict.gap());
    if (verdict.status == Main2Status::Violation) {
      ++s.violations;
      if (s.worst.size() < 10) s.worst.emplace_back(x.begin(), x.end());
    }
    if (verdict.gap() < 1e-9) {
      ++s.near_equal;
      double dist = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dist = std::max(dist, std::abs(x[i] - target[i]));
      if (dist > 1e-6) ++s.near_equal_off_target;
    }
  });
  s.attempts = stats.attempts;
  return s;
}

int cmd_verify_ineq(const VerifyIneqArgs& a, Run& run) {
  run.manifest().flags = {{"m1", a.m1},         {"m2", a.m2}, {"theta1", a.theta1}, {"theta2", a.theta2},
                          {"p", a.p},           {"samples", a.samples}, {"jobs", a.jobs}};
  if (a.xi) run.manifest().flags["xi"] = *a.xi;
  run.manifest().seed = a.seed;
  KktProblem problem;
  try {
    problem = KktProblem::make(a.m1, a.m2, a.theta1, a.theta2, a.p, a.xi);
  } catch (const DomainError& e) {
    throw ExitError(kUsage, std::string("invalid problem: ") + e.what());
  }
  const std::size_t chunks = (a.samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<IneqSummary> parts(chunks);
  const int jobs = std::clamp(a.jobs, 1, std::max(1, static_cast<int>(chunks)));
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&, w] {
      for (std::size_t c = static_cast<std::size_t>(w); c < chunks; c += static_cast<std::size_t>(jobs)) {
        const std::size_t count = std::min(kSampleChunk, a.samples - c * kSampleChunk);
        parts[c] = sample_chunk(problem, count, splitmix64(splitmix64(a.seed) + c));
      }
    });
  for (auto& t : workers) t.join();

  IneqSummary total;
  for (const auto& p : parts) {
    total.samples += p.samples;
    total.attempts += p.attempts;
    total.violations += p.violations;
    total.infeasible += p.infeasible;
    total.near_equal += p.near_equal;
    total.near_equal_off_target += p.near_equal_off_target;
    total.min_gap = std::min(total.min_gap, p.min_gap);
    for (const auto& x : p.worst)
      if (total.worst.size() < 10) total.worst.push_back(x);
  }
  const double acceptance = total.attempts ? static_cast<double>(total.samples) / total.attempts : 0.0;
  run.emit({{"type", "inequality"},
            {"n", problem.n()},
            {"xi", problem.xi},
            {"f_target", problem.target_objective()},
            {"samples", total.samples},
            {"attempts", total.attempts},
            {"acceptance_rate", acceptance},
            {"violations", total.violations},
            {"infeasible", total.infeasible},
            {"min_gap", total.samples ? json(total.min_gap) : json(nullptr)},
            {"near_equal", total.near_equal},
            {"near_equal_off_target", total.near_equal_off_target},
            {"violating_points", total.worst}});
  table({{"samples", std::to_string(total.samples)},
         {"acceptance rate", fmt(acceptance)},
         {"f(target)", fmt(problem.target_objective())},
         {"min f(x) - f(target)", fmt(total.min_gap)},
         {"violations", std::to_string(total.violations)},
         {"near-equal off target", std::to_string(total.near_equal_off_target)}});
  return total.violations == 0 && total.infeasible == 0 ? kOk : kVerification;
}

// ---------------------------------------------------------------------------

struct EnumArgs {
  int n = 0;
  int m = 0;
  std::string out;
  bool all = false;
  int jobs = 1;
};

int cmd_enum_graphs(const EnumArgs& a, Run& run) {
  run.manifest().flags = {{"n", a.n}, {"m", a.m}, {"out", a.out}, {"all", a.all}, {"jobs", a.jobs}};
  std::mutex mu;
  std::vector<std::string> lines;
  std::size_t cubic = 0;
  std::size_t regular = 0;
  const auto count = enumerate_graphs_parallel({a.n, a.m, !a.all, 0, 1}, a.jobs, [&](const SmallGraph& sg) {
    const auto g = sg.to_graph();
    auto line = encode_graph6(g);
    int deg = 0;
    const bool reg = g.is_regular(&deg);
    std::lock_guard lock(mu);
    lines.push_back(std::move(line));
    if (reg) ++regular;
    if (reg && deg == 3) ++cubic;
  });
  std::sort(lines.begin(), lines.end());
  run.emit({{"type", "enumeration"},
            {"n", a.n},
            {"m", a.m},
            {"connected_only", !a.all},
            {"count", count},
            {"regular", regular},
            {"cubic", cubic}});
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw ExitError(kUsage, "cannot write " + a.out);
    out << "# " << run.header_line() << '\n';
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw ExitError(kUsage, "write failed for " + a.out);
  }
  table({{"graphs", std::to_string(count)}, {"regular", std::to_string(regular)}, {"3-regular", std::to_string(cubic)}});
  return kOk;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
  int v = 0;
  int b = 0;
  int k = 0;
  std::string criterion = "D";
  bool binary = false;
  int restarts = 1;
  int iterations = 2000;
  int plateau = 200;
  std::uint64_t seed = 1;
  std::string out;
  bool trace = false;
  int jobs = 1;
};

bool is_petersen_design(const Design& d) {
  if (d.treatments() != 10 || d.block_size() != 2 || d.block_count() != 15 || !d.is_binary()) return false;
  Graph g(10);
  for (const auto& blk : d.blocks()) {
    if (g.has_edge(blk[0], blk[1])) return false;
    g.add_edge(blk[0], blk[1]);
  }
  return canonical_form(g).certificate == petersen_certificate();
}

int cmd_search(const SearchArgs& a, Run& run) {
  run.manifest().flags = {{"v", a.v},
                          {"b", a.b},
                          {"k", a.k},
                          {"criterion", a.criterion},
                          {"binary", a.binary},
                          {"restarts", a.restarts},
                          {"iterations", a.iterations},
                          {"plateau", a.plateau},
                          {"out", a.out},
                          {"trace", a.trace},
                          {"jobs", a.jobs}};
  run.manifest().seed = a.seed;
  SearchConfig cfg;
  cfg.v = a.v;
  cfg.b = a.b;
  cfg.k = a.k;
  cfg.criterion = SearchCriterion::parse(a.criterion);
  cfg.binary_only = a.binary;
  cfg.restarts = a.restarts;
  cfg.max_iterations = a.iterations;
  cfg.plateau_cap = a.plateau;
  cfg.seed = a.seed;
  cfg.jobs = a.jobs;
  const auto result = local_search(cfg);
  if (a.trace)
    for (const auto& t : result.trace) {
      json rec = to_json(t);
      rec["type"] = "trace";
      run.emit(rec);
    }
  json rec = {{"type", "search"},
              {"criterion", cfg.criterion.name()},
              {"value", result.value},
              {"restart", result.restart},
              {"design", format_design(result.best)},
              {"petersen", is_petersen_design(result.best)}};
  rec["spanning_trees"] = result.spanning_trees ? json(*result.spanning_trees) : json(nullptr);
  run.emit(rec);
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw ExitError(kUsage, "cannot write " + a.out);
    out << "# " << run.header_line() << '\n' << format_design(result.best);
  }
  std::vector<std::pair<std::string, std::string>> rows = {{"criterion", cfg.criterion.name()},
                                                           {"value", fmt(result.value)},
                                                           {"best restart", std::to_string(result.restart)}};
  if (result.spanning_trees) rows.emplace_back("spanning trees", std::to_string(*result.spanning_trees));
  table(rows);
  std::cerr << format_design(result.best);
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_kkt_check(const std::string& path, Run& run) {
  run.manifest().flags = {{"point", path}};
  run.add_input(path);
  json in;
  try {
    in = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ExitError(kCorrupt, std::string("malformed JSON: ") + e.what());
  }
  KktProblem problem;
  KktPoint point;
  try {
    try {
      std::optional<double> xi;
      if (in.contains("xi")) xi = in.at("xi").get<double>();
      problem = KktProblem::make(in.at("m1").get<int>(), in.at("m2").get<int>(), in.at("theta1").get<double>(),
                                 in.at("theta2").get<double>(), in.at("p").get<double>(), xi);
    } catch (const DomainError& e) {
      throw ExitError(kUsage, std::string("invalid problem: ") + e.what());
    }
    if (in.value("canonical", false)) {
      point = canonical_multipliers(problem);
    } else {
      point = KktPoint::at(in.at("e").get<std::vector<double>>());
      point.nu = in.value("nu", 0.0);
      point.lambda = in.value("lambda", 0.0);
      point.rho = in.value("rho", 0.0);
      point.eta1 = in.value("eta1", 0.0);
      point.eta2 = in.value("eta2", 0.0);
      if (in.contains("alpha")) point.alpha = in.at("alpha").get<std::vector<double>>();
      if (in.contains("beta")) point.beta = in.at("beta").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ExitError(kCorrupt, std::string("bad point file: ") + e.what());
  }
  const double tol = in.value("tolerance", kResidualTolerance);
  const auto res = kkt_residuals(problem, point, tol);
  json rec = to_json(res);
  rec["type"] = "kkt";
  rec["multipliers"] = {{"nu", point.nu},     {"lambda", point.lambda}, {"rho", point.rho},  {"eta1", point.eta1},
                        {"eta2", point.eta2}, {"alpha", point.alpha},   {"beta", point.beta}, {"D", point.D}};
  rec["tolerance"] = tol;
  if (res.problem.empty() && point.e.front() < point.e.back() && constraints(problem, point.e).l2 < 0.0) {
    const auto mf = mfcq_witness(problem, point.e);
    json active = json::array();
    for (const auto& [name, dot] : mf.active) active.push_back({{"constraint", name}, {"dot", dot}});
    rec["mfcq"] = {{"verified", mf.verified}, {"w", mf.witness.w}, {"grad_g_dot", mf.grad_g_dot}, {"active", active}};
  }
  run.emit(rec);
  table({{"max stationarity", fmt(res.max_stationarity)},
         {"max complementarity", fmt(res.max_complementarity)},
         {"max primal", fmt(res.max_primal)},
         {"signs ok", res.signs_ok ? "yes" : "no"},
         {"pass", res.pass ? "yes" : "no"}});
  if (!res.problem.empty()) std::cerr << "problem: " << res.problem << '\n';
  return res.pass ? kOk : kVerification;
}

// ---------------------------------------------------------------------------

struct GddArgs {
  int m = 0;
  int n = 0;
  int k = 0;
  int l1 = 0;
  int l2 = 0;
  std::optional<int> r;
};

int cmd_gdd_spectrum(const GddArgs& a, Run& run) {
  run.manifest().flags = {{"m", a.m}, {"n", a.n}, {"k", a.k}, {"l1", a.l1}, {"l2", a.l2}};
  if (a.r) run.manifest().flags["r"] = *a.r;
  GddParams p{a.m, a.n, a.k, a.l1, a.l2, 0};
  if (a.r) {
    p.r = *a.r;
  } else {
    const auto r = gdd_replication(a.m, a.n, a.k, a.l1, a.l2);
    if (!r) throw DomainError("replication r(k-1) = lambda1(n-1) + lambda2 n(m-1) has no integer solution");
    p.r = *r;
  }
  const auto s = gdd_spectrum(p);
  json clusters = json::array();
  for (const auto& c : s.clusters) clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  run.emit({{"type", "gdd_spectrum"},
            {"m", p.m},
            {"n", p.n},
            {"k", p.k},
            {"lambda1", p.lambda1},
            {"lambda2", p.lambda2},
            {"r", p.r},
            {"v", p.v()},
            {"b", p.b()},
            {"distinct_count", s.distinct_count()},
            {"spectrum", clusters}});
  std::vector<std::pair<std::string, std::string>> rows = {{"v b r", std::to_string(p.v()) + " " + std::to_string(p.b()) +
                                                                        " " + std::to_string(p.r)}};
  for (const auto& c : s.clusters) rows.emplace_back(fmt(c.value), "x" + std::to_string(c.multiplicity));
  table(rows);
  return kOk;
}

// ---------------------------------------------------------------------------

struct TheoremArgs {
  std::string candidate;
  std::string class_dir;
  bool enumerate = false;
  std::vector<double> p_grid = kDefaultPGrid;
  int jobs = 1;
};

int cmd_theorem_main(const TheoremArgs& a, Run& run) {
  run.manifest().flags = {{"candidate", a.candidate}, {"class_dir", a.class_dir}, {"enumerate", a.enumerate},
                          {"p", a.p_grid},            {"jobs", a.jobs}};
  if (a.class_dir.empty() == !a.enumerate) throw ExitError(kUsage, "give exactly one of --class-dir or --enumerate");
  run.add_input(a.candidate);
  Design candidate = [&] {
    try {
      return parse_design(read_file(a.candidate));
    } catch (const ParseError& e) {
      throw ExitError(kCorrupt, std::string("candidate: ") + e.what());
    }
  }();
  MainTheoremOptions options;
  options.p_grid = a.p_grid;
  MainTheoremCheck check(candidate, options);

  if (a.enumerate) {
    if (candidate.block_size() != 2 || candidate.treatments() > kMaxEnumerationOrder)
      throw DomainError("--enumerate needs a candidate with k = 2 and v <= 10");
    const int jobs = std::max(1, a.jobs);
    std::vector<MainTheoremCheck> parts(static_cast<std::size_t>(jobs), MainTheoremCheck(candidate, options));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        try {
          enumerate_graphs({candidate.treatments(), candidate.block_count(), true, w, jobs}, [&](const SmallGraph& g) {
            const auto graph = g.to_graph();
            parts[static_cast<std::size_t>(w)].add(graph_as_design(graph), encode_graph6(graph));
          });
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& p : parts) check.merge(p);
  } else {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(a.class_dir, ec))
      if (entry.is_regular_file()) files.push_back(entry.path());
    if (ec) throw ExitError(kUsage, "cannot list " + a.class_dir + ": " + ec.message());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      run.add_input(f.string());
      const auto name = f.filename().string();
      try {
        if (f.extension() == ".g6") {
          std::ifstream in(f);
          std::size_t line = 0;
          for (const auto& rec : read_graph6_lines(in)) {
            ++line;
            check.add(graph_as_design(decode_graph6(rec)), name + ":" + std::to_string(line));
          }
        } else {
          check.add(parse_design(read_file(f.string())), name);
        }
      } catch (const ParseError& e) {
        throw ExitError(kCorrupt, name + ": " + e.what());
      }
    }
  }

  const auto report = check.report();
  json rec = to_json(report);
  rec["type"] = "theorem_main";
  run.emit(rec);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"members", std::to_string(report.members)},
      {"skipped", std::to_string(report.skipped)},
      {"two eigenvalues", report.two_eigenvalues ? "yes" : "no"},
      {"minimises trace C^2", report.trace_sq.unique ? "uniquely" : (report.trace_sq.candidate_attains ? "tied" : "no")},
      {"E-optimal", report.e_optimal.candidate_attains ? "yes" : "no"},
      {"D-optimal", report.d_optimal.candidate_attains ? "yes" : "no"}};
  for (std::size_t i = 0; i < report.phi.size(); ++i)
    rows.emplace_back("phi(" + fmt(options.p_grid[i]) + ")", report.phi[i].unique ? "unique minimiser" : "not unique");
  rows.emplace_back("consistent", report.consistent ? "yes" : "no");
  table(rows);
  return report.consistent ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimality checks for block designs and small graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  const int jobs = default_jobs();

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate optimality criteria of a design file");
  c_eval->add_option("--design", eval.design, "Design file")->required();
  c_eval->add_option("--p", eval.p_grid, "Comma-separated p grid")->delimiter(',');

  VerifyPetersenArgs vp{"", jobs};
  auto* c_vp = app.add_subcommand("verify-petersen", "Check the mu9 and eigenvalue-product bounds on (10,15) graphs");
  c_vp->add_option("--graphs", vp.graphs, "graph6 file (default: enumerate)");
  c_vp->add_option("--jobs", vp.jobs)->check(CLI::PositiveNumber);

  VerifyIneqArgs vi;
  vi.jobs = jobs;
  auto* c_vi = app.add_subcommand("verify-ineq", "Sample the two-valued power-sum inequality");
  c_vi->add_option("--m1", vi.m1)->required();
  c_vi->add_option("--m2", vi.m2)->required();
  c_vi->add_option("--theta1", vi.theta1)->required();
  c_vi->add_option("--theta2", vi.theta2)->required();
  c_vi->add_option("--p", vi.p)->required();
  c_vi->add_option("--xi", vi.xi);
  c_vi->add_option("--samples", vi.samples);
  c_vi->add_option("--seed", vi.seed);
  c_vi->add_option("--jobs", vi.jobs)->check(CLI::PositiveNumber);

  EnumArgs en;
  en.jobs = jobs;
  auto* c_en = app.add_subcommand("enum-graphs", "Enumerate graphs up to isomorphism");
  c_en->add_option("n", en.n)->required();
  c_en->add_option("m", en.m)->required();
  c_en->add_option("--out", en.out, "Write graph6 records here");
  c_en->add_flag("--all", en.all, "Include disconnected graphs");
  c_en->add_option("--jobs", en.jobs)->check(CLI::PositiveNumber);

  SearchArgs se;
  se.jobs = jobs;
  auto* c_se = app.add_subcommand("search", "Exchange search for optimal designs");
  c_se->add_option("v", se.v)->required();
  c_se->add_option("b", se.b)->required();
  c_se->add_option("k", se.k)->required();
  c_se->add_option("--criterion", se.criterion, "A, D, E or phi(p)");
  c_se->add_flag("--binary", se.binary);
  c_se->add_option("--restarts", se.restarts);
  c_se->add_option("--iterations", se.iterations);
  c_se->add_option("--plateau", se.plateau);
  c_se->add_option("--seed", se.seed);
  c_se->add_option("--out", se.out, "Write the best design here");
  c_se->add_flag("--trace", se.trace, "Emit accepted moves");
  c_se->add_option("--jobs", se.jobs)->check(CLI::PositiveNumber);

  std::string kkt_point;
  auto* c_kkt = app.add_subcommand("kkt-check", "Check KKT residuals of a point with multipliers");
  c_kkt->add_option("--point", kkt_point, "JSON point file")->required();

  GddArgs gd;
  auto* c_gd = app.add_subcommand("gdd-spectrum", "Nonzero spectrum of a group divisible design");
  c_gd->add_option("--m", gd.m)->required();
  c_gd->add_option("--n", gd.n)->required();
  c_gd->add_option("--k", gd.k)->required();
  c_gd->add_option("--l1", gd.l1)->required();
  c_gd->add_option("--l2", gd.l2)->required();
  c_gd->add_option("--r", gd.r);

  TheoremArgs th;
  th.jobs = jobs;
  auto* c_th = app.add_subcommand("theorem-main", "Check two-eigenvalue optimality over a class of designs");
  c_th->add_option("--candidate", th.candidate)->required();
  c_th->add_option("--class-dir", th.class_dir);
  c_th->add_flag("--enumerate", th.enumerate);
  c_th->add_option("--p", th.p_grid)->delimiter(',');
  c_th->add_option("--jobs", th.jobs)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  auto* sub = app.get_subcommands().front();
  Run run(sub->get_name());
  try {
    if (sub == c_eval) return run.finish(cmd_eval(eval, run));
    if (sub == c_vp) return run.finish(cmd_verify_petersen(vp, run));
    if (sub == c_vi) return run.finish(cmd_verify_ineq(vi, run));
    if (sub == c_en) return run.finish(cmd_enum_graphs(en, run));
    if (sub == c_se) return run.finish(cmd_search(se, run));
    if (sub == c_kkt) return run.finish(cmd_kkt_check(kkt_point, run));
    if (sub == c_gd) return run.finish(cmd_gdd_spectrum(gd, run));
    if (sub == c_th) return run.finish(cmd_theorem_main(th, run));
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    run.emit({{"type", "error"}, {"message", e.what()}, {"exit", e.code}});
    return run.finish(e.code);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    run.emit({{"type", "error"}, {"message", e.what()}, {"exit", kDomain}});
    return run.finish(kDomain);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    run.emit({{"type", "error"}, {"message", e.what()}, {"exit", kCorrupt}});
    return run.finish(kCorrupt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    run.emit({{"type", "error"}, {"message", e.what()}, {"exit", kUsage}});
    return run.finish(kUsage);
  }
  return kUsage;
}
