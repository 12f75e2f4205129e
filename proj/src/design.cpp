#include "optdesign/design.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

Design::Design(int v, int k, std::vector<Block> blocks) : v_(v), k_(k), blocks_(std::move(blocks)) {
  if (v_ < 1) throw DomainError("design needs at least one treatment");
  if (k_ < 1) throw DomainError("block size must be positive");
  if (blocks_.empty()) throw DomainError("design needs at least one block");
  for (auto& block : blocks_) {
    if (static_cast<int>(block.size()) != k_) throw DomainError("inconsistent block size");
    for (int t : block)
      if (t < 0 || t >= v_) throw DomainError("treatment index out of range");
    std::sort(block.begin(), block.end());
  }
}

bool Design::is_binary() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const Block& b) { return std::adjacent_find(b.begin(), b.end()) == b.end(); });
}

std::vector<int> Design::replications() const {
  std::vector<int> r(static_cast<std::size_t>(v_), 0);
  for (const auto& block : blocks_)
    for (int t : block) ++r[static_cast<std::size_t>(t)];
  return r;
}

bool Design::is_equireplicate(int* r) const {
  const auto reps = replications();
  if (std::adjacent_find(reps.begin(), reps.end(), std::not_equal_to<>()) != reps.end()) return false;
  if (r) *r = reps.front();
  return true;
}

std::string Design::canonical_encoding() const {
  auto sorted = blocks_;
  std::sort(sorted.begin(), sorted.end());
  std::string out = "v=" + std::to_string(v_) + ";k=" + std::to_string(k_) + ";";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) out += '|';
    for (std::size_t j = 0; j < sorted[i].size(); ++j) {
      if (j) out += ' ';
      out += std::to_string(sorted[i][j] + 1);
    }
  }
  return out;
}

bool operator==(const Design& a, const Design& b) {
  if (a.v_ != b.v_ || a.k_ != b.k_ || a.blocks_.size() != b.blocks_.size()) return false;
  auto x = a.blocks_;
  auto y = b.blocks_;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

Design parse_design(std::string_view text) {
  std::optional<int> v;
  std::optional<int> k;
  std::vector<Block> blocks;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    const auto tokens = split_ws(line);

    if (!v) {
      for (auto tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) throw ParseError(where + "expected header 'v=<int> k=<int>'");
        const auto key = tok.substr(0, eq);
        const auto value = to_int(tok.substr(eq + 1));
        if (!value || *value < 1) throw ParseError(where + "header value must be a positive integer");
        if (key == "v")
          v = value;
        else if (key == "k")
          k = value;
        else
          throw ParseError(where + "unknown header key '" + std::string(key) + "'");
      }
      if (!v || !k) throw ParseError(where + "header must define both v and k");
      continue;
    }

    Block block;
    for (auto tok : tokens) {
      const auto value = to_int(tok);
      if (!value) throw ParseError(where + "malformed treatment index '" + std::string(tok) + "'");
      if (*value < 1 || *value > *v) throw ParseError(where + "treatment index out of range");
      block.push_back(*value - 1);
    }
    if (static_cast<int>(block.size()) != *k) throw ParseError(where + "inconsistent block size");
    blocks.push_back(std::move(block));
  }
  if (!v) throw ParseError("missing header 'v=<int> k=<int>'");
  if (blocks.empty()) throw ParseError("design has no blocks");
  return Design(*v, *k, std::move(blocks));
}

std::string format_design(const Design& d) {
  std::ostringstream os;
  os << "v=" << d.treatments() << " k=" << d.block_size() << '\n';
  for (const auto& block : d.blocks()) {
    for (std::size_t j = 0; j < block.size(); ++j) os << (j ? " " : "") << block[j] + 1;
    os << '\n';
  }
  return os.str();
}

IntMatrix incidence_matrix(const Design& d) {
  IntMatrix n(static_cast<std::size_t>(d.treatments()), static_cast<std::size_t>(d.block_count()));
  for (std::size_t j = 0; j < d.blocks().size(); ++j)
    for (int t : d.blocks()[j]) ++n(static_cast<std::size_t>(t), j);
  return n;
}

IntMatrix concurrence_matrix(const Design& d) {
  const auto v = static_cast<std::size_t>(d.treatments());
  IntMatrix s(v, v);
  for (const auto& block : d.blocks())
    for (int a : block)
      for (int b : block) ++s(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  return s;
}

std::int64_t InfoMatrix::scaled_trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < order(); ++i) t += scaled(i, i);
  return t;
}

std::int64_t InfoMatrix::scaled_trace_sq() const {
  std::int64_t t = 0;
  for (auto x : scaled.data()) t += x * x;
  return t;
}

RealMatrix InfoMatrix::to_real() const {
  RealMatrix out(order(), order());
  for (std::size_t i = 0; i < order(); ++i)
    for (std::size_t j = 0; j < order(); ++j) out(i, j) = (*this)(i, j);
  return out;
}

InfoMatrix information_matrix(const Design& d) {
  InfoMatrix c;
  c.k = d.block_size();
  c.scaled = concurrence_matrix(d);
  const auto reps = d.replications();
  for (std::size_t i = 0; i < c.order(); ++i)
    for (std::size_t j = 0; j < c.order(); ++j) {
      c.scaled(i, j) = -c.scaled(i, j);
      if (i == j) c.scaled(i, j) += static_cast<std::int64_t>(c.k) * reps[i];
    }
  return c;
}

bool is_connected(const Design& d) {
  UnionFind uf(d.treatments());
  for (const auto& block : d.blocks())
    for (int t : block) uf.unite(t, block.front());
  const int root = uf.find(0);
  for (int t = 1; t < d.treatments(); ++t)
    if (uf.find(t) != root) return false;
  return true;
}

Design dual(const Design& d) {
  int r = 0;
  if (!d.is_equireplicate(&r)) throw DomainError("dual requires an equireplicate design");
  std::vector<Block> blocks(static_cast<std::size_t>(d.treatments()));
  for (std::size_t j = 0; j < d.blocks().size(); ++j)
    for (int t : d.blocks()[j]) blocks[static_cast<std::size_t>(t)].push_back(static_cast<int>(j));
  return Design(d.block_count(), r, std::move(blocks));
}

std::optional<int> gdd_replication(int m, int n, int k, int lambda1, int lambda2) {
  if (k < 2) return std::nullopt;
  const long long numer = static_cast<long long>(lambda1) * (n - 1) + static_cast<long long>(lambda2) * n * (m - 1);
  if (numer % (k - 1) != 0) return std::nullopt;
  return static_cast<int>(numer / (k - 1));
}

void GddParams::validate() const {
  if (m < 1 || n < 1 || k < 2 || r < 1 || lambda2 < 1 || lambda1 < 0)
    throw DomainError("GDD parameters out of range");
  if (static_cast<long long>(r) * (k - 1) !=
      static_cast<long long>(lambda1) * (n - 1) + static_cast<long long>(lambda2) * n * (m - 1))
    throw DomainError("GDD parameters violate r(k-1) = lambda1(n-1) + lambda2 n(m-1)");
  if ((static_cast<long long>(v()) * r) % k != 0) throw DomainError("GDD parameters violate vr = 0 mod k");
  if (lambda1 > r || lambda2 > r) throw DomainError("GDD concurrence exceeds replication");
}

std::optional<GddRecognition> gdd_recognize(const Design& d,
                                            const std::optional<std::vector<std::vector<int>>>& groups) {
  int r = 0;
  if (!d.is_binary() || !d.is_equireplicate(&r) || !is_connected(d) || d.block_size() < 2) return std::nullopt;
  const int v = d.treatments();
  const auto s = concurrence_matrix(d);
  auto conc = [&](int a, int b) { return s(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };

  std::vector<int> group_of(static_cast<std::size_t>(v), -1);
  std::vector<std::vector<int>> classes;

  if (groups) {
    classes = *groups;
    for (std::size_t g = 0; g < classes.size(); ++g)
      for (int t : classes[g]) {
        if (t < 0 || t >= v || group_of[static_cast<std::size_t>(t)] != -1) return std::nullopt;
        group_of[static_cast<std::size_t>(t)] = static_cast<int>(g);
      }
    if (std::count(group_of.begin(), group_of.end(), -1) != 0) return std::nullopt;
  } else {
    std::set<std::int64_t> values;
    for (int a = 0; a < v; ++a)
      for (int b = a + 1; b < v; ++b) values.insert(conc(a, b));
    if (values.size() != 2) return std::nullopt;
    bool found = false;
    for (const auto same : values) {
      std::vector<int> label(static_cast<std::size_t>(v), -1);
      std::vector<std::vector<int>> cand;
      bool ok = true;
      for (int a = 0; a < v && ok; ++a) {
        if (label[static_cast<std::size_t>(a)] != -1) continue;
        std::vector<int> cls{a};
        for (int b = a + 1; b < v; ++b)
          if (conc(a, b) == same) cls.push_back(b);
        // transitivity: every pair inside the class concurs `same` times
        for (std::size_t i = 0; i < cls.size() && ok; ++i)
          for (std::size_t j = i + 1; j < cls.size() && ok; ++j) {
            if (conc(cls[i], cls[j]) != same || label[static_cast<std::size_t>(cls[j])] != -1) ok = false;
          }
        for (int t : cls) label[static_cast<std::size_t>(t)] = static_cast<int>(cand.size());
        cand.push_back(std::move(cls));
      }
      if (!ok || cand.size() < 2 || cand.front().size() < 2) continue;
      if (std::any_of(cand.begin(), cand.end(), [&](const auto& c) { return c.size() != cand.front().size(); }))
        continue;
      classes = std::move(cand);
      group_of = std::move(label);
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }

  const auto n = classes.front().size();
  if (n == 0 ||
      std::any_of(classes.begin(), classes.end(), [&](const auto& c) { return c.size() != n; }))
    return std::nullopt;

  std::optional<std::int64_t> within;
  std::optional<std::int64_t> between;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) {
      auto& slot = group_of[static_cast<std::size_t>(a)] == group_of[static_cast<std::size_t>(b)] ? within : between;
      if (!slot)
        slot = conc(a, b);
      else if (*slot != conc(a, b))
        return std::nullopt;
    }
  if (!between) return std::nullopt;

  GddRecognition out;
  out.params = GddParams{static_cast<int>(classes.size()), static_cast<int>(n), d.block_size(),
                         static_cast<int>(within.value_or(0)), static_cast<int>(*between), r};
  for (auto& c : classes) std::sort(c.begin(), c.end());
  out.groups = std::move(classes);
  return out;
}

Spectrum gdd_spectrum(const GddParams& p, double tol) {
  p.validate();
  const double r = p.r;
  const double k = p.k;
  const double within = r - (r - p.lambda1) / k;
  const double between = r - (r - p.lambda1 + static_cast<double>(p.n) * (p.lambda1 - p.lambda2)) / k;
  std::vector<double> values;
  values.insert(values.end(), static_cast<std::size_t>(p.m * (p.n - 1)), within);
  values.insert(values.end(), static_cast<std::size_t>(p.m - 1), between);
  if (std::any_of(values.begin(), values.end(), [](double x) { return x <= 0.0; }))
    throw DomainError("GDD parameters give a nonpositive information eigenvalue");
  return Spectrum::from_values(std::move(values), tol);
}

Design graph_as_design(const Graph& g) {
  std::vector<Block> blocks;
  for (auto [u, v] : g.edges()) blocks.push_back({u, v});
  if (blocks.empty()) throw DomainError("graph has no edges");
  return Design(g.order(), 2, std::move(blocks));
}

}  // namespace optdesign
