#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "looptree/error.hpp"

namespace looptree {

// Finite metric measure space with a dense symmetric distance matrix.
class FiniteMMSpace {
 public:
  FiniteMMSpace(int64_t n, std::vector<double> dist_row_major, std::vector<double> weights);

  int64_t size() const { return n_; }
  double dist(int64_t i, int64_t j) const { return dist_[static_cast<size_t>(i * n_ + j)]; }
  double weight(int64_t i) const { return weights_[static_cast<size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }

  // d(x,x)=0, symmetry, nonnegativity exactly; triangle inequality spot
  // checked on sampled triples; weights sum to 1 within 1e-12
  void validate(int64_t triangle_samples = 2000) const;

  // points coded by an interval: point i carries mass 1/n and the metric of
  // the oracle
  static FiniteMMSpace from_coded_interval(int64_t n,
                                           const std::function<double(int64_t, int64_t)>& oracle);

  void save(const std::string& path) const;          // binary row-major with header
  static FiniteMMSpace load(const std::string& path);

 private:
  int64_t n_;
  std::vector<double> dist_;
  std::vector<double> weights_;
};

enum class GhpStrategy {
  IndexAligned,     // both spaces coded by [0,1]; couple through the shared parameter
  GreedyTransport,  // quantile coupling along mean-distance order
};

// Upper bound on the Gromov-Hausdorff-Prokhorov distance from an explicit
// correspondence and coupling: returns eps = max(dis(R)/2, mass outside R)
// where the constructed couplings put zero mass outside R.
double ghp_upper(const FiniteMMSpace& a, const FiniteMMSpace& b,
                 GhpStrategy strategy = GhpStrategy::IndexAligned);

// Quotient of grid points at pseudo-distance zero (tolerance 1e-12), masses
// summed; throws NotPseudoMetric when the oracle violates symmetry,
// nonnegativity or the triangle inequality on the grid.
FiniteMMSpace quotient_from_pseudodistance(int64_t n,
                                           const std::function<double(int64_t, int64_t)>& oracle);

// Tree pseudo-distance of a grid function. Linear mode: g_s + g_t - 2 min
// over [s,t]. Circular mode (the map bound): the minimum may also be taken
// over the complementary arc.
enum class TreeDistanceMode { Linear, Circular };
double d_g_pseudodistance(const std::vector<double>& g, int64_t s, int64_t t,
                          TreeDistanceMode mode = TreeDistanceMode::Linear);

struct KsResult {
  double statistic;
  double p_value;  // asymptotic two-sample p-estimate
};
KsResult ks_distance(std::vector<double> sample1, std::vector<double> sample2);

}  // namespace looptree
