#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "optdesign/canonical.hpp"
#include "optdesign/enumerate.hpp"
#include "optdesign/errors.hpp"

using namespace optdesign;

namespace {

// Lexicographically smallest upper-triangle bit string over all n! labellings.
std::uint64_t brute_canonical(const Graph& g) {
  const int n = g.order();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~0ULL;
  do {
    std::uint64_t code = 0;
    int bit = 0;
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i, ++bit)
        if (g.has_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])) code |= 1ULL << bit;
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Isomorphism classes of connected (n, m) graphs, by brute force over edge sets.
std::map<int, std::size_t> brute_class_counts(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
  std::map<int, std::set<std::uint64_t>> classes;
  for (std::uint64_t mask = 0; mask < (1ULL << pairs.size()); ++mask) {
    Graph g(n);
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (mask >> e & 1ULL) g.add_edge(pairs[e].first, pairs[e].second);
    if (!g.is_connected()) continue;
    classes[g.edge_count()].insert(brute_canonical(g));
  }
  std::map<int, std::size_t> counts;
  for (const auto& [m, set] : classes) counts[m] = set.size();
  return counts;
}

Graph random_graph(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution coin(density);
  Graph g(n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

std::vector<int> random_perm(std::mt19937_64& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace

TEST(Canonical, PathAndReversal) {
  const auto p = path_graph(4);
  const auto rev = p.relabeled(std::vector<int>{3, 2, 1, 0});
  EXPECT_EQ(canonical_form(p).certificate, canonical_form(rev).certificate);
}

TEST(Canonical, PathVersusStar) {
  EXPECT_NE(canonical_form(path_graph(4)).certificate, canonical_form(star_graph(3)).certificate);
}

TEST(Canonical, PetersenPermutations) {
  std::mt19937_64 rng(1);
  const auto cert = canonical_form(petersen()).certificate;
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(canonical_form(petersen().relabeled(random_perm(rng, 10))).certificate, cert);
}

TEST(Canonical, InvariantUnderRelabelling) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % kMaxCanonicalOrder);
    const auto g = random_graph(rng, n, 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0);
    const auto cf = canonical_form(g);
    const auto moved = canonical_form(g.relabeled(random_perm(rng, n)));
    ASSERT_EQ(cf.certificate, moved.certificate) << encode_graph6(g);
    ASSERT_EQ(cf.canonical, moved.canonical);
  }
}

TEST(Canonical, LabelingProducesCanonicalGraph) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng, 9, 0.4);
    const auto cf = canonical_form(g);
    EXPECT_EQ(g.relabeled(cf.labeling), cf.canonical);
  }
}

TEST(Canonical, GeneratorsAreAutomorphisms) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng, 10, 0.3);
    for (const auto& gen : canonical_form(g).generators) EXPECT_EQ(g.relabeled(gen), g);
  }
  const auto orbits = vertex_orbits(10, canonical_label(SmallGraph::from_graph(petersen())).generators);
  for (int v = 0; v < 10; ++v) EXPECT_EQ(orbits[static_cast<std::size_t>(v)], 0);
}

TEST(Canonical, AgreesWithBruteForceIsomorphism) {
  std::mt19937_64 rng(5);
  std::map<std::uint64_t, std::string> cert_of;
  std::map<std::string, std::uint64_t> brute_of;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto g = random_graph(rng, 6, 0.5);
    const auto brute = brute_canonical(g);
    const auto cert = canonical_form(g).certificate;
    auto [it, fresh] = cert_of.emplace(brute, cert);
    if (!fresh) ASSERT_EQ(it->second, cert);
    auto [jt, fresh2] = brute_of.emplace(cert, brute);
    if (!fresh2) ASSERT_EQ(jt->second, brute);
  }
}

TEST(Canonical, SizeLimit) {
  EXPECT_THROW(canonical_form(Graph(17)), DomainError);
  EXPECT_NO_THROW(canonical_form(Graph(16)));
}

TEST(Enumerate, SmallCases) {
  EXPECT_EQ(count_connected(3, 3), 1u);
  EXPECT_EQ(count_connected(4, 3), 2u);
  EXPECT_EQ(count_connected(1, 0), 1u);
  EXPECT_EQ(count_connected(3, 0), 0u);
  EXPECT_EQ(count_connected(5, 3), 0u);
}

TEST(Enumerate, FourThreeIsPathAndStar) {
  std::set<std::string> certs;
  enumerate_graphs({4, 3}, [&](const SmallGraph& g) { certs.insert(canonical_form(g.to_graph()).certificate); });
  const std::set<std::string> expected = {canonical_form(path_graph(4)).certificate,
                                          canonical_form(star_graph(3)).certificate};
  EXPECT_EQ(certs, expected);
}

TEST(Enumerate, MatchesBruteForceUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    const auto expected = brute_class_counts(n);
    for (int m = 0; m <= n * (n - 1) / 2; ++m) {
      const auto it = expected.find(m);
      ASSERT_EQ(count_connected(n, m), it == expected.end() ? 0u : it->second) << "n=" << n << " m=" << m;
    }
  }
}

TEST(Enumerate, TotalsForSevenAndEight) {
  // Connected graphs on 7 and 8 vertices: 853 and 11117.
  std::size_t seven = 0;
  for (int m = 0; m <= 21; ++m) seven += count_connected(7, m);
  EXPECT_EQ(seven, 853u);
  std::size_t eight = 0;
  for (int m = 0; m <= 28; ++m) eight += count_connected(8, m);
  EXPECT_EQ(eight, 11117u);
}

TEST(Enumerate, OutputIsIsomorphFreeAndValid) {
  std::set<std::string> certs;
  std::size_t seen = 0;
  enumerate_graphs({8, 10}, [&](const SmallGraph& g) {
    ++seen;
    EXPECT_EQ(g.edge_count(), 10);
    EXPECT_EQ(g.component_count(), 1);
    certs.insert(canonical_form(g.to_graph()).certificate);
  });
  EXPECT_EQ(certs.size(), seen);
}

TEST(Enumerate, DisconnectedIncluded) {
  // All graphs on 4 vertices with 2 edges: 2K2 and P3 + K1.
  EXPECT_EQ(enumerate_graphs({4, 2, false}, [](const SmallGraph&) {}), 2u);
  std::size_t all = 0;
  for (int m = 0; m <= 10; ++m) all += enumerate_graphs({5, m, false}, [](const SmallGraph&) {});
  EXPECT_EQ(all, 34u);
}

TEST(Enumerate, PartitionCoversEveryClassOnce) {
  const auto whole = count_connected(8, 12);
  std::size_t sum = 0;
  for (int part = 0; part < 3; ++part) sum += enumerate_graphs({8, 12, true, part, 3}, [](const SmallGraph&) {});
  EXPECT_EQ(sum, whole);
  EXPECT_EQ(count_connected(8, 12, 3), whole);
}

TEST(Enumerate, CubicCounts) {
  EXPECT_EQ(cubic_graph_count(4), 1u);
  EXPECT_EQ(cubic_graph_count(6), 2u);
  EXPECT_EQ(cubic_graph_count(8), 5u);
  EXPECT_EQ(cubic_graph_count(5), 0u);
}

TEST(Enumerate, RejectsOutOfRange) {
  EXPECT_THROW(count_connected(11, 15), DomainError);
  EXPECT_THROW(count_connected(0, 0), DomainError);
  EXPECT_THROW(count_connected(4, 7), DomainError);
  EXPECT_THROW(count_connected(4, -1), DomainError);
}
