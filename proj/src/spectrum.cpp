#include "optdesign/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace optdesign {

std::vector<Cluster> cluster_multiplicities(std::span<const double> values, double tol) {
  std::vector<Cluster> clusters;
  std::size_t start = 0;
  while (start < values.size()) {
    const double lead = values[start];
    double sum = lead;
    std::size_t end = start + 1;
    while (end < values.size() && lead - values[end] <= tol * std::abs(lead)) sum += values[end++];
    clusters.push_back({sum / static_cast<double>(end - start), static_cast<int>(end - start)});
    start = end;
  }
  return clusters;
}

Spectrum Spectrum::from_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  s.clusters = cluster_multiplicities(values, tol);
  s.values = std::move(values);
  return s;
}

}  // namespace optdesign
