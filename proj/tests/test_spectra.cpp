#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "optdesign/errors.hpp"
#include "optdesign/spectra.hpp"
#include "optdesign/spectrum.hpp"

using namespace optdesign;

namespace {

std::vector<double> eigen_reference(const RealMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.rbegin(), out.rend());
  return out;
}

RealMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = normal(rng);
  return m;
}

// Laplace expansion along the first row; fine for the small sizes used here.
std::int64_t cofactor_determinant(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  std::int64_t det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    det += (c % 2 == 0 ? 1 : -1) * m(0, c) * cofactor_determinant(minor);
  }
  return det;
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

TEST(SymEig, MatchesEigen) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 24;
    const auto m = random_symmetric(rng, n);
    const auto ours = sym_eig(m);
    const auto ref = eigen_reference(m);
    ASSERT_EQ(ours.size(), n);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(ours[i], ref[i], 1e-9 * std::max(1.0, std::abs(ref[i])));
  }
}

TEST(SymEig, SortedNonincreasing) {
  std::mt19937_64 rng(22);
  const auto eig = sym_eig(random_symmetric(rng, 15));
  EXPECT_TRUE(std::is_sorted(eig.rbegin(), eig.rend()));
}

TEST(SymEig, DiagonalAndEmpty) {
  RealMatrix d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 3;
  d(2, 2) = 2;
  EXPECT_EQ(sym_eig(d), (std::vector<double>{3, 2, 1}));
  EXPECT_TRUE(sym_eig(RealMatrix(0, 0)).empty());
}

TEST(SymEig, RejectsBadInput) {
  EXPECT_THROW(sym_eig(RealMatrix(2, 3)), std::invalid_argument);
  RealMatrix m(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(sym_eig(m), std::invalid_argument);
}

TEST(Spectrum, Clustering) {
  const std::vector<double> values = {5.0, 5.0 + 1e-12, 2.0, 2.0, 2.0 - 1e-10, 1.0};
  const auto s = Spectrum::from_values(values);
  ASSERT_EQ(s.distinct_count(), 3);
  EXPECT_EQ(s.clusters[0].multiplicity, 2);
  EXPECT_EQ(s.clusters[1].multiplicity, 3);
  EXPECT_EQ(s.clusters[2].multiplicity, 1);
  EXPECT_NEAR(s.clusters[1].value, 2.0, 1e-9);
  EXPECT_DOUBLE_EQ(s.largest(), 5.0 + 1e-12);
  EXPECT_DOUBLE_EQ(s.smallest(), 1.0);
}

TEST(Spectrum, SeparatesBeyondTolerance) {
  const auto s = Spectrum::from_values({1.0, 1.0 - 1e-3});
  EXPECT_EQ(s.distinct_count(), 2);
}

TEST(Bareiss, MatchesCofactorExpansion) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
    ASSERT_EQ(static_cast<std::int64_t>(bareiss_determinant(m)), cofactor_determinant(m));
  }
}

TEST(Bareiss, NeedsPivoting) {
  IntMatrix m(3, 3);
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(2, 2) = 5;
  EXPECT_EQ(static_cast<std::int64_t>(bareiss_determinant(m)), -5);
  EXPECT_EQ(static_cast<std::int64_t>(bareiss_determinant(IntMatrix(0, 0))), 1);
}

TEST(Bareiss, OverflowIsReported) {
  IntMatrix m = IntMatrix::identity(40);
  for (std::size_t i = 0; i < 40; ++i) m(i, i) = 1LL << 40;
  EXPECT_THROW(bareiss_determinant(m), std::overflow_error);
}

TEST(SpanningTrees, KnownFamilies) {
  EXPECT_EQ(spanning_tree_count(petersen()), 2000);
  EXPECT_EQ(spanning_tree_count(complete_graph(5)), 125);  // n^(n-2)
  EXPECT_EQ(spanning_tree_count(complete_graph(8)), 262144);
  EXPECT_EQ(spanning_tree_count(cycle_graph(7)), 7);
  EXPECT_EQ(spanning_tree_count(path_graph(6)), 1);
  EXPECT_EQ(spanning_tree_count(Graph(1)), 1);
  Graph two(2);
  EXPECT_EQ(spanning_tree_count(two), 0);
}

TEST(SpanningTrees, ProductOfNonzeroEigenvaluesIsNTimesCount) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 10, 0.35);
    if (!g.is_connected()) continue;
    const auto eig = sym_eig(laplacian(g).cast<double>());
    double prod = 1.0;
    for (std::size_t i = 0; i + 1 < eig.size(); ++i) prod *= eig[i];
    const double exact = 10.0 * static_cast<double>(spanning_tree_count(g));
    EXPECT_NEAR(prod / exact, 1.0, 1e-6);
  }
}

TEST(IntegerCertificate, PetersenEigenvalues) {
  const auto p = petersen();
  EXPECT_TRUE(integer_eigenvalue_certificate(p, 0));
  EXPECT_TRUE(integer_eigenvalue_certificate(p, 2));
  EXPECT_TRUE(integer_eigenvalue_certificate(p, 5));
  EXPECT_FALSE(integer_eigenvalue_certificate(p, 1));
  EXPECT_FALSE(integer_eigenvalue_certificate(p, 3));
  EXPECT_FALSE(integer_eigenvalue_certificate(p, 4));
}

TEST(NonzeroSpectrum, RejectsDisconnected) {
  RealMatrix m(3, 3);  // zero matrix: rank 0
  EXPECT_THROW(nonzero_spectrum(m), DomainError);
}
