#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "looptree/loopforge.hpp"

namespace looptree {

// Step distribution for label increments. The geometric law
// P(xi = i) = 2^{-i-2}, i >= -1, is the one tied to the map bijection: its
// conditioned bridges are uniform on the good-labelling bridge set.
struct BridgeLaw {
  enum class Family { CentredGeometric, CentredUniform };
  Family family = Family::CentredGeometric;
  int64_t uniform_halfwidth = 1;  // m for the centred uniform law on {-m..m}

  double variance() const;
  int64_t draw(Rng& rng) const;  // one unconditioned step

  static BridgeLaw geometric() { return {Family::CentredGeometric, 1}; }
  static BridgeLaw centred_uniform(int64_t m) { return {Family::CentredUniform, m}; }
};

// Exact conditional sample of (xi_1..xi_ell) given xi_1+...+xi_ell = 0.
// Geometric: uniform composition of ell into ell nonnegative parts
// (stars and bars), minus one per entry, followed by a uniform cyclic
// shift. Other laws: rejection with a capped retry count.
std::vector<int64_t> sample_bridge_conditioned(const BridgeLaw& law, int64_t ell, Rng& rng);

struct BridgeVariance {
  double value;
  double std_error;  // 0 when the value is exact
  bool exact;
};

// Var(Xi^k_j) where Xi^k_j = xi_1+...+xi_j under the zero-sum conditioning.
// Closed form for the geometric law, Monte Carlo otherwise.
BridgeVariance bridge_variance(const BridgeLaw& law, int64_t k, int64_t j,
                               int64_t mc_samples = 100000, uint64_t mc_seed = 1);

// One bridge vector per cycle, aligned with Looptree::cycles.
struct Labelling {
  std::vector<std::vector<int64_t>> bridges;

  bool is_good() const;  // every increment >= -1
};

// Independent conditioned bridges for every cycle; per-cycle RNG streams
// derived from (seed, cycle id) so the result is independent of evaluation
// order.
Labelling sample_labelling(const Looptree& lt, const BridgeLaw& law, uint64_t seed);

// Uniform good labelling (geometric bridges).
inline Labelling good_labelling_uniform(const Looptree& lt, uint64_t seed) {
  return sample_labelling(lt, BridgeLaw::geometric(), seed);
}

// Corner label process, Z_0 = Z_E = 0; Z_j is the label of the vertex
// incident to corner j. Computed by accumulating edge increments along the
// contour.
std::vector<int64_t> label_process(const Looptree& lt, const Labelling& lab);

// Label of the single corner floor(t) evaluated straight from the path:
// ancestor cycles get lazily sampled bridges (stream = (seed, jump time)).
// This avoids materializing a full labelling for one-point statistics.
int64_t label_at_time(const LukaPath& path, int64_t j, const BridgeLaw& law, uint64_t seed);

void export_labels_csv(std::ostream& out, const Looptree& lt, const std::vector<int64_t>& z);

}  // namespace looptree
