#include "optdesign/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "optdesign/errors.hpp"

namespace optdesign {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kConvergence = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kNullThreshold = 1e-8;

double off_diagonal_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("exact determinant overflowed 128 bits");
  return out;
}

__int128 checked_sub(__int128 a, __int128 b) {
  __int128 out = 0;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("exact determinant overflowed 128 bits");
  return out;
}

}  // namespace

std::vector<double> sym_eig(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  const std::size_t n = m.rows();
  double frob = 0.0;
  for (double x : m.data()) frob += x * x;
  frob = std::sqrt(frob);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTolerance * std::max(1.0, frob))
        throw std::invalid_argument("sym_eig: matrix is not symmetric");

  RealMatrix a = m;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kConvergence * frob) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

Spectrum nonzero_spectrum(const RealMatrix& c, double cluster_tol) {
  auto eig = sym_eig(c);
  if (eig.empty()) throw DomainError("empty information matrix");
  double trace = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i) trace += c(i, i);
  const double threshold = kNullThreshold * std::max(trace, 0.0);
  const auto small = std::count_if(eig.begin(), eig.end(), [&](double x) { return std::abs(x) <= threshold; });
  if (small > 1) throw DomainError("information matrix has rank below v-1 (design not connected)");
  const auto drop = std::min_element(eig.begin(), eig.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (std::abs(*drop) > threshold) throw DomainError("information matrix has no null direction");
  eig.erase(drop);
  if (std::any_of(eig.begin(), eig.end(), [](double x) { return x <= 0.0; }))
    throw DomainError("information matrix is not positive semidefinite");
  return Spectrum::from_values(std::move(eig), cluster_tol);
}

Spectrum nonzero_spectrum(const InfoMatrix& c, double cluster_tol) { return nonzero_spectrum(c.to_real(), cluster_tol); }

__int128 bareiss_determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<__int128> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };

  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && at(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = checked_sub(checked_mul(at(i, j), at(k, k)), checked_mul(at(i, k), at(k, j))) / prev;
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return n == 0 ? 1 : sign * at(n - 1, n - 1);
}

std::int64_t spanning_tree_count(const Graph& g) {
  const int n = g.order();
  if (n <= 1) return 1;
  const auto lap = laplacian(g);
  IntMatrix minor(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n - 1));
  for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(n); ++i)
    for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(n); ++j) minor(i, j) = lap(i, j);
  return static_cast<std::int64_t>(bareiss_determinant(std::move(minor)));
}

bool integer_eigenvalue_certificate(const Graph& g, std::int64_t s) {
  auto lap = laplacian(g);
  for (std::size_t i = 0; i < lap.rows(); ++i) lap(i, i) -= s;
  return bareiss_determinant(std::move(lap)) == 0;
}

}  // namespace optdesign
