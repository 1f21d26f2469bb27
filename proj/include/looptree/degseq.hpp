#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "looptree/error.hpp"
#include "looptree/rng.hpp"

namespace looptree {

// Prescribed degree data: root cycle half-boundary length rho and the
// non-increasing list of cycle lengths (offspring numbers of the forest).
// The combinatorial identity sum(parts) + rho == len(parts) must hold; a
// parts list given without any explicit zero entries is treated as the list
// of nonzero parts and is padded with the implied zeros at construction.
class DegreeSequence {
 public:
  DegreeSequence(int64_t rho, std::vector<int64_t> parts);

  int64_t rho() const { return rho_; }
  const std::vector<int64_t>& parts() const { return parts_; }

  // f_n(k): number of parts equal to k. O(1).
  int64_t count(int64_t k) const;
  // f_n,1: largest part (0 if parts empty). O(1).
  int64_t max_part() const { return parts_.empty() ? 0 : parts_.front(); }

  struct Stats {
    int64_t n;        // sum of parts = edges of the forest
    int64_t edges;    // E_n = n + rho = edges of looptree and map
    int64_t inner;    // F_n = number of positive parts = inner faces of the map
    int64_t leaves;   // f_n(0) = vertices of the looptree
    int64_t sigma2;   // sum_k k(k-1) f_n(k)
  };

  void validate() const;
  Stats stats() const;

  // sigma_n^{2,delta}: the sum restricted to k <= delta * sigma_n. The
  // comparison gets 1e-9 of slack toward inclusion so boundary ties resolve
  // deterministically.
  int64_t sigma2_truncated(double delta) const;

  // distinct (k, f_n(k)) pairs, k descending
  std::vector<std::pair<int64_t, int64_t>> count_pairs() const;

  static DegreeSequence quadrangulation(int64_t num_faces, int64_t rho = 1);
  static DegreeSequence load(std::istream& in);
  static DegreeSequence load_file(const std::string& path);
  void save(std::ostream& out) const;

 private:
  int64_t rho_;
  std::vector<int64_t> parts_;
  std::unordered_map<int64_t, int64_t> counts_;
};

// Continuum parameters: theta0^2 + sum theta_i^2 = 1, plus the boundary
// length rho, the loop-distance parameter a and the label variance Sigma2,
// which the artifact takes as explicit inputs.
struct ThetaParams {
  double theta0 = 1.0;
  std::vector<double> thetas;  // non-increasing, nonnegative
  double rho = 0.0;
  double a = 0.0;
  double Sigma2 = 1.0;

  void validate() const;
  double dropped_l2_mass(size_t jmax) const;
};

// Builds a valid degree sequence whose large parts approximate theta_i *
// sigma_n and whose sigma^2 matches target_sigma2 within 5% relative error.
// Residual mass is filled with parts of size 2 (parts <= 1 contribute
// nothing to sigma^2).
DegreeSequence discretize_theta(const ThetaParams& params, int64_t target_sigma2, uint64_t seed);

}  // namespace looptree
