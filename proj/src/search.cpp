#include "optdesign/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "optdesign/criteria.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/spectra.hpp"

namespace optdesign {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Higher is better.
double primary_score(const Spectrum& s, const SearchCriterion& c) {
  switch (c.kind) {
    case SearchCriterion::Kind::A: return a_value(s);
    case SearchCriterion::Kind::D: {
      double sum = 0.0;
      for (double mu : s.values) sum += std::log(mu);
      return sum;
    }
    case SearchCriterion::Kind::E: return e_value(s);
    case SearchCriterion::Kind::Phi: return -phi_p_value(s, c.p);
  }
  return 0.0;
}

double natural_value(double score, const SearchCriterion& c) {
  switch (c.kind) {
    case SearchCriterion::Kind::D: return std::exp(score);
    case SearchCriterion::Kind::Phi: return -score;
    default: return score;
  }
}

// E alone is flat over large regions; the harmonic mean orders designs that
// share a smallest eigenvalue.
struct Score {
  double primary = 0.0;
  double guide = 0.0;
};

Score score_of(const Spectrum& s, const SearchCriterion& c) {
  return {primary_score(s, c), c.kind == SearchCriterion::Kind::E ? a_value(s) : 0.0};
}

/// +1 if a beats b, -1 if b beats a, 0 on a tie.
int compare(const Score& a, const Score& b, double tol) {
  if (a.primary > b.primary + tol) return 1;
  if (a.primary < b.primary - tol) return -1;
  if (a.guide > b.guide + tol) return 1;
  if (a.guide < b.guide - tol) return -1;
  return 0;
}

std::optional<Score> try_score(const Design& d, const SearchCriterion& c) {
  if (!is_connected(d)) return std::nullopt;
  try {
    return score_of(nonzero_spectrum(information_matrix(d)), c);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::int64_t multigraph_tree_count(const Design& d) {
  // For k = 2, k*C is the Laplacian of the multigraph whose edges are the blocks.
  const auto scaled = information_matrix(d).scaled;
  const std::size_t n = scaled.rows();
  if (n <= 1) return 1;
  IntMatrix minor(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) minor(i, j) = scaled(i, j);
  return static_cast<std::int64_t>(bareiss_determinant(minor));
}

struct RestartOutcome {
  std::vector<Block> blocks;
  Score score;
  std::string encoding;
  std::vector<TraceEntry> trace;
};

class Restart {
 public:
  Restart(const SearchConfig& cfg, int index)
      : cfg_(cfg), index_(index), rng_(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(index)))) {}

  RestartOutcome run() {
    auto blocks = initial_blocks();
    Design current(cfg_.v, cfg_.k, blocks);
    auto score = try_score(current, cfg_.criterion);
    if (!score) throw std::logic_error("initial design is not connected");
    Score cur = *score;
    RestartOutcome out{current.blocks(), cur, current.canonical_encoding(), {}};
    out.trace.push_back({index_, 0, "start", natural_value(cur.primary, cfg_.criterion)});
    remember(out.encoding);

    int sideways = 0;
    for (int it = 1; it <= cfg_.max_iterations; ++it) {
      std::string move;
      auto proposal = propose(current.blocks(), move);
      if (!proposal) continue;
      Design cand(cfg_.v, cfg_.k, std::move(*proposal));
      const auto s = try_score(cand, cfg_.criterion);
      if (!s) continue;
      const auto enc = cand.canonical_encoding();
      const int step = compare(*s, cur, cfg_.tie_tolerance);
      const bool level = std::abs(s->primary - cur.primary) <= cfg_.tie_tolerance;
      if (step > 0) {
        sideways = 0;
      } else if (level && sideways < cfg_.plateau_cap && !is_tabu(enc)) {
        ++sideways;
      } else {
        continue;
      }
      // Equal-value moves keep the reported value flat.
      if (step > 0 || level) cur = *s;
      current = std::move(cand);
      remember(enc);
      out.trace.push_back({index_, it, move, natural_value(cur.primary, cfg_.criterion)});
      const int vs_best = compare(cur, out.score, cfg_.tie_tolerance);
      if (vs_best > 0) {
        out.blocks = current.blocks();
        out.score = cur;
        out.encoding = enc;
      } else if (vs_best == 0 && enc < out.encoding) {
        out.blocks = current.blocks();
        out.encoding = enc;
      }
    }
    return out;
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Block random_block() {
    Block blk;
    if (cfg_.binary_only) {
      std::vector<int> all(static_cast<std::size_t>(cfg_.v));
      std::iota(all.begin(), all.end(), 0);
      for (int i = 0; i < cfg_.k; ++i) {
        const int j = uniform(i, cfg_.v - 1);
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
        blk.push_back(all[static_cast<std::size_t>(i)]);
      }
    } else {
      for (int i = 0; i < cfg_.k; ++i) blk.push_back(uniform(0, cfg_.v - 1));
    }
    return blk;
  }

  void fill(Block& blk) {
    while (static_cast<int>(blk.size()) < cfg_.k) {
      const int t = uniform(0, cfg_.v - 1);
      if (cfg_.binary_only && std::find(blk.begin(), blk.end(), t) != blk.end()) continue;
      blk.push_back(t);
    }
  }

  // Chains fresh treatments through the first blocks so the start is connected.
  std::vector<Block> initial_blocks() {
    std::vector<int> order(static_cast<std::size_t>(cfg_.v));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    std::size_t next = 0;
    std::vector<Block> blocks;
    for (int i = 0; i < cfg_.b; ++i) {
      Block blk;
      if (i > 0 && next < order.size()) blk.push_back(order[static_cast<std::size_t>(uniform(0, static_cast<int>(next) - 1))]);
      while (next < order.size() && static_cast<int>(blk.size()) < cfg_.k) blk.push_back(order[next++]);
      fill(blk);
      blocks.push_back(std::move(blk));
    }
    return blocks;
  }

  std::optional<std::vector<Block>> propose(const std::vector<Block>& blocks, std::string& move) {
    auto next = blocks;
    auto& blk = next[static_cast<std::size_t>(uniform(0, cfg_.b - 1))];
    if (std::uniform_int_distribution<int>(0, 1)(rng_) == 0) {
      move = "swap";
      const auto pos = static_cast<std::size_t>(uniform(0, cfg_.k - 1));
      const int t = uniform(0, cfg_.v - 1);
      if (t == blk[pos]) return std::nullopt;
      if (cfg_.binary_only && std::find(blk.begin(), blk.end(), t) != blk.end()) return std::nullopt;
      blk[pos] = t;
    } else {
      move = "replace";
      auto fresh = random_block();
      std::sort(fresh.begin(), fresh.end());
      if (fresh == blk) return std::nullopt;
      blk = std::move(fresh);
    }
    return next;
  }

  bool is_tabu(const std::string& enc) const { return std::find(tabu_.begin(), tabu_.end(), enc) != tabu_.end(); }

  void remember(const std::string& enc) {
    if (cfg_.tabu_length <= 0) return;
    tabu_.push_back(enc);
    while (static_cast<int>(tabu_.size()) > cfg_.tabu_length) tabu_.pop_front();
  }

  const SearchConfig& cfg_;
  int index_;
  std::mt19937_64 rng_;
  std::deque<std::string> tabu_;
};

void validate(const SearchConfig& cfg) {
  if (cfg.v < 1 || cfg.b < 1 || cfg.k < 1) throw std::invalid_argument("v, b and k must be positive");
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (cfg.max_iterations < 0 || cfg.plateau_cap < 0) throw std::invalid_argument("iteration limits must be nonnegative");
  if (cfg.criterion.kind == SearchCriterion::Kind::Phi && !(cfg.criterion.p > 0.0))
    throw std::invalid_argument("phi criterion needs p > 0");
  if (cfg.binary_only && cfg.k > cfg.v) throw DomainError("binary designs need k <= v");
  if (static_cast<long long>(cfg.b) * (cfg.k - 1) < cfg.v - 1)
    throw DomainError("no connected design exists: b(k-1) < v-1");
  if (cfg.v == 1) throw DomainError("a single treatment has no nonzero spectrum");
}

}  // namespace

SearchCriterion SearchCriterion::parse(const std::string& id) {
  if (id == "A") return {Kind::A, 1.0};
  if (id == "D") return {Kind::D, 1.0};
  if (id == "E") return {Kind::E, 1.0};
  const auto open = id.find('(');
  if (open != std::string::npos && id.back() == ')') {
    const auto head = id.substr(0, open);
    if (head == "phi" || head == "Phi") {
      const auto inner = id.substr(open + 1, id.size() - open - 2);
      std::size_t used = 0;
      double p = 0.0;
      try {
        p = std::stod(inner, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == inner.size() && used > 0 && p > 0.0) return {Kind::Phi, p};
    }
  }
  throw std::invalid_argument("unknown criterion '" + id + "' (expected A, D, E or phi(p))");
}

std::string SearchCriterion::name() const {
  switch (kind) {
    case Kind::A: return "A";
    case Kind::D: return "D";
    case Kind::E: return "E";
    case Kind::Phi: {
      std::string s = std::to_string(p);
      s.erase(s.find_last_not_of('0') + 1);
      if (s.back() == '.') s.pop_back();
      return "phi(" + s + ")";
    }
  }
  return "";
}

double criterion_value(const Design& d, const SearchCriterion& c) {
  return natural_value(primary_score(nonzero_spectrum(information_matrix(d)), c), c);
}

SearchResult local_search(const SearchConfig& cfg) {
  validate(cfg);
  std::vector<std::optional<RestartOutcome>> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.restarts));
  auto run_one = [&](int r) {
    try {
      outcomes[static_cast<std::size_t>(r)] = Restart(cfg, r).run();
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  };
  const int jobs = std::clamp(cfg.jobs, 1, cfg.restarts);
  if (jobs == 1) {
    for (int r = 0; r < cfg.restarts; ++r) run_one(r);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (int r = w; r < cfg.restarts; r += jobs) run_one(r);
      });
    for (auto& t : workers) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const bool exact_d = cfg.k == 2 && cfg.criterion.kind == SearchCriterion::Kind::D;
  std::vector<std::int64_t> trees(outcomes.size(), 0);
  if (cfg.k == 2)
    for (std::size_t r = 0; r < outcomes.size(); ++r)
      trees[r] = multigraph_tree_count(Design(cfg.v, cfg.k, outcomes[r]->blocks));

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    const auto& a = *outcomes[r];
    const auto& b = *outcomes[best];
    bool better;
    if (exact_d)
      better = trees[r] > trees[best] || (trees[r] == trees[best] && a.encoding < b.encoding);
    else if (const int c = compare(a.score, b.score, cfg.tie_tolerance); c != 0)
      better = c > 0;
    else
      better = a.encoding < b.encoding;
    if (better) best = r;
  }

  SearchResult result{Design(cfg.v, cfg.k, outcomes[best]->blocks), natural_value(outcomes[best]->score.primary, cfg.criterion),
                      static_cast<int>(best), std::nullopt, {}};
  if (cfg.k == 2) result.spanning_trees = trees[best];
  for (auto& o : outcomes) result.trace.insert(result.trace.end(), o->trace.begin(), o->trace.end());
  return result;
}

nlohmann::json to_json(const TraceEntry& t) {
  return {{"restart", t.restart}, {"iteration", t.iteration}, {"move", t.move}, {"value", t.value}};
}

}  // namespace optdesign
