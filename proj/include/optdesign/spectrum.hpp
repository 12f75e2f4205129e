#pragma once

#include <span>
#include <vector>

namespace optdesign {

inline constexpr double kDefaultClusterTolerance = 1e-6;

/// One distinct eigenvalue and how often it occurs.
struct Cluster {
  double value = 0.0;
  int multiplicity = 0;
};

/// Nonzero eigenvalues of an information matrix, sorted nonincreasing,
/// together with their multiplicity clustering.
struct Spectrum {
  std::vector<double> values;
  std::vector<Cluster> clusters;

  std::size_t size() const { return values.size(); }
  int distinct_count() const { return static_cast<int>(clusters.size()); }
  double largest() const { return values.front(); }
  double smallest() const { return values.back(); }

  /// Sorts values nonincreasing and clusters them at relative tolerance tol.
  static Spectrum from_values(std::vector<double> values, double tol = kDefaultClusterTolerance);
};

/// Groups a nonincreasing sequence into maximal runs whose spread stays within
/// tol times the magnitude of the run's leading value. Each cluster reports
/// the mean of its members.
std::vector<Cluster> cluster_multiplicities(std::span<const double> values, double tol = kDefaultClusterTolerance);

}  // namespace optdesign
