#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <sstream>

#include "optdesign/errors.hpp"
#include "optdesign/graph.hpp"
#include "optdesign/spectra.hpp"

using namespace optdesign;

namespace {

// Straight transcription of the format: size byte, then the upper triangle
// column by column, six bits per character, padded with zeros.
std::string reference_graph6(const Graph& g) {
  const int n = g.order();
  std::string out(1, static_cast<char>(63 + n));
  std::vector<int> bits;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) bits.push_back(g.has_edge(i, j) ? 1 : 0);
  while (bits.size() % 6 != 0) bits.push_back(0);
  for (std::size_t c = 0; c < bits.size(); c += 6) {
    int v = 0;
    for (int b = 0; b < 6; ++b) v = (v << 1) | bits[c + static_cast<std::size_t>(b)];
    out.push_back(static_cast<char>(63 + v));
  }
  return out;
}

Graph random_graph(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution coin(density);
  Graph g(n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST(Graph6, DecodesTriangle) {
  const auto g = decode_graph6("Bw");
  EXPECT_EQ(g.order(), 3);
  EXPECT_EQ(g, complete_graph(3));
}

TEST(Graph6, DecodesPath) {
  const auto g = decode_graph6("Bg");
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(encode_graph6(g), "Bg");
}

TEST(Graph6, EncodeMatchesReference) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const auto g = random_graph(rng, n, 0.3);
    ASSERT_EQ(encode_graph6(g), reference_graph6(g));
  }
}

TEST(Graph6, RoundTrip) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = static_cast<int>(rng() % (Graph::kMaxOrder + 1));
    const auto g = random_graph(rng, n, 0.5);
    const auto s = encode_graph6(g);
    ASSERT_EQ(decode_graph6(s), g);
    ASSERT_EQ(encode_graph6(decode_graph6(s)), s);
  }
}

TEST(Graph6, ToleratesHeaderAndNewline) {
  EXPECT_EQ(decode_graph6(">>graph6<<Bw\n"), complete_graph(3));
  EXPECT_EQ(decode_graph6("Bw\r\n"), complete_graph(3));
}

TEST(Graph6, RejectsMalformed) {
  EXPECT_THROW(decode_graph6(""), ParseError);
  EXPECT_THROW(decode_graph6("B"), ParseError);       // truncated payload
  EXPECT_THROW(decode_graph6("Bww"), ParseError);     // trailing data
  EXPECT_THROW(decode_graph6("B "), ParseError);      // below 63
  EXPECT_THROW(decode_graph6("B\x7f"), ParseError);   // above 126
  EXPECT_THROW(decode_graph6("Bx"), ParseError);      // padding bits set
  EXPECT_THROW(decode_graph6("~??"), ParseError);     // n > 62 unsupported
}

TEST(Graph6, ReadsStreamSkippingComments) {
  std::istringstream in("# header\nBw\n\nBg\n");
  const auto lines = read_graph6_lines(in);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "Bw");
  EXPECT_EQ(lines[1], "Bg");
}

TEST(Graph, BasicInvariants) {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(3, 1);
  g.add_edge(1, 3);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_EQ(g.degree(1), 2);
  EXPECT_EQ(g.component_count(), 3);
  EXPECT_FALSE(g.is_connected());
  EXPECT_THROW(g.add_edge(2, 2), DomainError);
  g.remove_edge(1, 3);
  EXPECT_FALSE(g.has_edge(3, 1));
}

TEST(Graph, EdgesInGraph6Order) {
  const auto edges = complete_graph(4).edges();
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
  EXPECT_EQ(edges, expected);
}

TEST(Graph, RelabelPreservesStructure) {
  const auto p = petersen();
  std::vector<int> perm = {3, 1, 4, 0, 5, 9, 2, 6, 8, 7};
  const auto q = p.relabeled(perm);
  EXPECT_EQ(q.edge_count(), 15);
  for (auto [u, v] : p.edges()) EXPECT_TRUE(q.has_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]));
}

TEST(Laplacian, Triangle) {
  const auto l = laplacian(complete_graph(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(l(i, j), i == j ? 2 : -1);
}

TEST(Laplacian, RowSumsVanish) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng, 12, 0.4);
    const auto l = laplacian(g);
    for (std::size_t i = 0; i < 12; ++i) {
      std::int64_t sum = 0;
      for (std::size_t j = 0; j < 12; ++j) sum += l(i, j);
      EXPECT_EQ(sum, 0);
      EXPECT_EQ(l(i, i), g.degree(static_cast<int>(i)));
    }
  }
}

TEST(Laplacian, StarSpectrum) {
  const auto eig = sym_eig(laplacian(star_graph(3)).cast<double>());
  const std::vector<double> expected = {4, 1, 1, 0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(eig[i], expected[i], 1e-12);
}

TEST(Petersen, Structure) {
  const auto p = petersen();
  EXPECT_EQ(p.order(), 10);
  EXPECT_EQ(p.edge_count(), 15);
  int deg = 0;
  EXPECT_TRUE(p.is_regular(&deg));
  EXPECT_EQ(deg, 3);
  EXPECT_TRUE(p.is_connected());
  // girth 5: no triangles and no 4-cycles
  for (int u = 0; u < 10; ++u)
    for (int v = u + 1; v < 10; ++v) {
      const auto common = std::popcount(p.neighbors(u) & p.neighbors(v));
      EXPECT_EQ(common, p.has_edge(u, v) ? 0 : 1);
    }
}

TEST(Petersen, LaplacianSpectrum) {
  const auto eig = sym_eig(laplacian(petersen()).cast<double>());
  const std::vector<double> expected = {5, 5, 5, 5, 2, 2, 2, 2, 2, 0};
  ASSERT_EQ(eig.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(eig[i], expected[i], 1e-9);
}
