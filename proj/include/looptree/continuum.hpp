#pragma once

#include <cstdint>
#include <vector>

#include "looptree/degseq.hpp"
#include "looptree/rng.hpp"

namespace looptree {

// Discretized exchangeable-increment path on [0,1]:
//   Y_t = rho (1-t) + theta0 b_t + sum_i theta_i (1{U_i <= t} - t)
// with b a Brownian bridge sampled on a uniform grid (linear interpolation
// in between) and exact jump positions. A Vervaat transform is stored as a
// rotation offset, so the same representation covers bridges and
// first-passage excursions.
class CadlagPath {
 public:
  struct Jump {
    double time;   // on the Y time scale
    double size;
  };

  CadlagPath(double rho, double theta0, std::vector<double> bridge, std::vector<Jump> jumps,
             double dropped_l2);

  int64_t grid_size() const { return static_cast<int64_t>(bridge_.size()) - 1; }
  double rho() const { return rho_; }
  double shift() const { return shift_; }
  double dropped_l2_mass() const { return dropped_l2_; }

  // X value and left limit at any time in [0,1]
  double eval(double t) const;
  double eval_left(double t) const;

  // jumps of X, sorted by time: includes the time-0 jump of size X_0 when
  // the path was rotated to start at a positive level
  const std::vector<Jump>& jumps() const { return xjumps_; }

  // infimum of X over [a, b] (piecewise-linear exact)
  double inf_between(double a, double b) const;

  CadlagPath rotated(double r) const;  // Vervaat shift by r

 private:
  double y_eval(double t, bool left) const;

  double rho_;
  double theta0_;
  std::vector<double> bridge_;        // standard bridge at k/G, scaled by theta0 at eval
  std::vector<Jump> yjumps_;          // sorted by time on the Y scale
  std::vector<Jump> xjumps_;          // sorted by time on the X scale
  double shift_ = 0.0;
  double shift_offset_ = 0.0;         // Y_{shift-}
  double dropped_l2_ = 0.0;
};

CadlagPath sample_ei_bridge(const ThetaParams& params, int64_t grid_size, int64_t jmax, Rng& rng);

// First-passage bridge / excursion version: rotation at the first passage
// time of level U + inf Y with U uniform on [0, rho); at rho = 0 the
// rotation happens at the (a.s. unique) infimum, ties broken at the
// earliest breakpoint.
CadlagPath vervaat_continuum(const CadlagPath& bridge, Rng& rng);

// Distance and label machinery for one fixed path; precomputes the
// continuous part C on the grid.
class ContinuumLoopMetric {
 public:
  explicit ContinuumLoopMetric(const CadlagPath& path);

  const CadlagPath& path() const { return path_; }
  const std::vector<double>& c_grid() const { return c_grid_; }

  struct JumpAncestor {
    size_t jump_index;
    double r;       // R^t_{t_i}
  };
  std::vector<JumpAncestor> jump_ancestors(double t) const;

  // d^0 + a * d_C
  double d0(double s, double t) const;
  double dc(double s, double t) const;
  double distance(double a, double s, double t) const { return d0(s, t) + a * dc(s, t); }

  // C^delta_t = X_{t-} - sum of R over ancestors with jump size > delta
  double continuous_part(double t, double delta) const;
  double continuous_part_exact(double t) const { return continuous_part(t, 0.0); }

 private:
  double c_at_grid(int64_t k) const { return c_grid_[static_cast<size_t>(k)]; }
  const CadlagPath& path_;
  std::vector<double> c_grid_;
};

// Gaussian labels: Z^a_t = sqrt(a) Z^C_t + sum over jump ancestors of
// sqrt(jump) b_i(R / jump). The snake part is sampled exactly on the grid
// tree of C by sequential conditioning along the contour; the per-jump
// bridges are sampled lazily and jointly at all queried positions.
std::vector<double> snake_labels(const ContinuumLoopMetric& metric, double a,
                                 const std::vector<double>& times, Rng& rng);

// One full snake sample over the grid (the Z^C process alone), exposed for
// covariance checks.
std::vector<double> snake_on_grid(const std::vector<double>& c_grid, Rng& rng);

}  // namespace looptree
