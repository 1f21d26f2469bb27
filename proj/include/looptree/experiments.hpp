#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "looptree/continuum.hpp"
#include "looptree/labels.hpp"
#include "looptree/mapbij.hpp"
#include "looptree/mmspace.hpp"

namespace looptree {

// Runs fn(replica, rng) for replica = 0..count-1 on a small worker pool.
// Per-replica streams are derived from (seed, replica), so the output is
// independent of the scheduling.
void run_replicas(int64_t count, int64_t threads, uint64_t seed,
                  const std::function<void(int64_t, Rng&)>& fn);

// Model families for the experiment batteries.
struct ExperimentSpec {
  enum class Family { Quadrangulation, Theta };
  Family family = Family::Quadrangulation;
  ThetaParams theta;              // used by the Theta family
  std::vector<int64_t> sizes;     // strictly increasing ladder of n = sum(parts)
  int64_t replicas = 200;
  int64_t threads = 1;
  uint64_t seed = 1;
  double delta = 0.1;             // spinal statistic cutoff
  std::string out_dir;            // empty = no files

  void validate() const;
  DegreeSequence sequence_for(int64_t n) const;
};

// one replica worth of rescaled statistics at a given size
struct InvarianceSample {
  double label_at_uniform;    // (Var(xi) sigma_n)^{-1/2} Z at a uniform corner
  double pair_distance;       // sigma_n^{-1} looptree distance of two uniform corners
  double radius;              // (2 sigma_n)^{-1/2} (max Z - min Z + 1)
  double root_distance;       // (2 sigma_n)^{-1/2} (1 - min Z)
  double spinal;              // |C^{n,delta}_U - (sigma^{2,delta}/2n) H_U| / sqrt(sigma^{2,delta})
};

// Full-looptree statistics; cost O(E_n) per replica.
InvarianceSample invariance_replica(const DegreeSequence& seq, double delta, Rng& rng);

// Cheap variant computing only the label at one uniform time (bridges
// sampled lazily on the ancestral line).
double label_at_uniform_time(const DegreeSequence& seq, Rng& rng);

// Continuum counterpart of the label statistic: Z^{Sigma^2/3} at a uniform
// time, driven by the EI path of the given parameters.
double continuum_label_at_uniform_time(const ThetaParams& params, int64_t grid, int64_t jmax,
                                       double a_label, Rng& rng);

struct InvarianceReport {
  struct SizeRow {
    int64_t n = 0;
    double sigma = 0;
    double median_spinal = 0;
    double median_radius = 0;
    std::vector<InvarianceSample> samples;
  };
  std::vector<SizeRow> rows;
  struct KsRow {
    std::string what;
    double statistic = 0;
    double p_value = 0;
  };
  std::vector<KsRow> ks;
};

InvarianceReport run_invariance(const ExperimentSpec& spec);

// Rescaled looptree as a metric measure space: grid_points corners at
// positions round(k E_n / grid_points), distances sigma_n^{-1} d_LT.
FiniteMMSpace looptree_space(const LukaPath& path, int64_t grid_points);

// Two quadrangulation-family paths of sizes n and factor*n coupled through
// a shared jump-placement driver, so that their rescaled paths approximate
// the same realization; used by the GHP sanity battery.
std::pair<LukaPath, LukaPath> coupled_quadrangulation_paths(int64_t num_faces, int64_t factor,
                                                            uint64_t seed);

// sup over aligned grid positions of the difference of the two profiles
// d(corner 0, corner t); a coupled-realization discrepancy proxy in distance
// units.
double profile_sup_discrepancy(const FiniteMMSpace& a, const FiniteMMSpace& b);

}  // namespace looptree
