#include "looptree/labels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

namespace looptree {

double BridgeLaw::variance() const {
  switch (family) {
    case Family::CentredGeometric:
      return 2.0;
    case Family::CentredUniform: {
      double m = static_cast<double>(uniform_halfwidth);
      return m * (m + 1.0) / 3.0;
    }
  }
  return 0.0;
}

int64_t BridgeLaw::draw(Rng& rng) const {
  switch (family) {
    case Family::CentredGeometric: {
      // P(xi = i) = 2^{-i-2} for i >= -1
      int64_t i = -1;
      while (rng.next_u64() & 1ull) ++i;
      return i;
    }
    case Family::CentredUniform:
      return static_cast<int64_t>(rng.below(2 * static_cast<uint64_t>(uniform_halfwidth) + 1)) -
             uniform_halfwidth;
  }
  return 0;
}

std::vector<int64_t> sample_bridge_conditioned(const BridgeLaw& law, int64_t ell, Rng& rng) {
  if (ell < 1) throw Error(ErrorKind::BadInput, "bridge length must be >= 1");
  if (law.family == BridgeLaw::Family::CentredGeometric) {
    // choose ell-1 bar positions among 2*ell-1 slots, sequentially
    std::vector<int64_t> x(static_cast<size_t>(ell));
    int64_t bars_left = ell - 1;
    int64_t slots_left = 2 * ell - 1;
    int64_t gap = 0;  // stars since last bar
    size_t part = 0;
    while (slots_left > 0) {
      bool is_bar = rng.below(static_cast<uint64_t>(slots_left)) < static_cast<uint64_t>(bars_left);
      if (is_bar) {
        x[part++] = gap - 1;
        gap = 0;
        --bars_left;
      } else {
        ++gap;
      }
      --slots_left;
    }
    x[part] = gap - 1;
    // uniform cyclic shift (the bridge set is shift invariant)
    int64_t shift = static_cast<int64_t>(rng.below(static_cast<uint64_t>(ell)));
    std::rotate(x.begin(), x.begin() + shift, x.end());
    return x;
  }

  // rejection fallback: P(sum = 0) decays like c / sqrt(ell)
  constexpr int64_t kMaxRetries = 1000000;
  std::vector<int64_t> x(static_cast<size_t>(ell));
  for (int64_t attempt = 0; attempt < kMaxRetries; ++attempt) {
    int64_t sum = 0;
    for (auto& v : x) {
      v = law.draw(rng);
      sum += v;
    }
    if (sum == 0) return x;
  }
  throw Error(ErrorKind::UnsupportedLaw, "rejection sampler exhausted 1e6 retries");
}

BridgeVariance bridge_variance(const BridgeLaw& law, int64_t k, int64_t j, int64_t mc_samples,
                               uint64_t mc_seed) {
  if (j < 0 || j > k || k < 1) throw Error(ErrorKind::BadInput, "need 0 <= j <= k, k >= 1");
  if (j == 0 || j == k || k == 1) return {0.0, 0.0, true};
  if (law.family == BridgeLaw::Family::CentredGeometric) {
    double kk = static_cast<double>(k), jj = static_cast<double>(j);
    double var1 = 2.0 * (kk - 1.0) / (kk + 1.0);
    return {jj * (kk - jj) / (kk - 1.0) * var1, 0.0, true};
  }
  Rng rng(mc_seed);
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int64_t s = 0; s < mc_samples; ++s) {
    auto bridge = sample_bridge_conditioned(law, k, rng);
    double partial = 0.0;
    for (int64_t i = 0; i < j; ++i) partial += static_cast<double>(bridge[static_cast<size_t>(i)]);
    sum += partial;
    sum2 += partial * partial;
    sum4 += partial * partial * partial * partial;
  }
  double n = static_cast<double>(mc_samples);
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  double mu4 = sum4 / n;  // bridges are centred, so this approximates the 4th moment
  double se = std::sqrt(std::max(0.0, mu4 - var * var) / n);
  return {var, se, false};
}

bool Labelling::is_good() const {
  for (const auto& b : bridges)
    for (int64_t v : b)
      if (v < -1) return false;
  return true;
}

Labelling sample_labelling(const Looptree& lt, const BridgeLaw& law, uint64_t seed) {
  Labelling lab;
  lab.bridges.resize(lt.cycles.size());
  for (size_t c = 0; c < lt.cycles.size(); ++c) {
    Rng rng = Rng::stream(seed, c);
    lab.bridges[c] = sample_bridge_conditioned(law, lt.cycles[c].length, rng);
  }
  return lab;
}

std::vector<int64_t> label_process(const Looptree& lt, const Labelling& lab) {
  const int64_t e = lt.num_edges();
  if (lab.bridges.size() != lt.cycles.size())
    throw Error(ErrorKind::LengthMismatch, "one bridge vector per cycle required");
  for (size_t c = 0; c < lt.cycles.size(); ++c)
    if (static_cast<int64_t>(lab.bridges[c].size()) != lt.cycles[c].length)
      throw Error(ErrorKind::LengthMismatch,
                  "bridge length mismatch on cycle " + std::to_string(c));

  // increment carried by contour edge i = bridge entry at its position
  // within its cycle
  std::vector<int64_t> inc(static_cast<size_t>(e));
  for (size_t c = 0; c < lt.cycles.size(); ++c) {
    int64_t edge = lt.cycles[c].first_edge;
    for (int64_t pos = 0; pos < lt.cycles[c].length; ++pos) {
      inc[static_cast<size_t>(edge)] = lab.bridges[c][static_cast<size_t>(pos)];
      edge = lt.next_in_cycle[static_cast<size_t>(edge)];
    }
  }
  std::vector<int64_t> z(static_cast<size_t>(e) + 1, 0);
  for (int64_t j = 0; j < e; ++j) z[static_cast<size_t>(j + 1)] = z[static_cast<size_t>(j)] + inc[static_cast<size_t>(j)];
  assert(z.back() == 0);
  return z;
}

int64_t label_at_time(const LukaPath& path, int64_t j, const BridgeLaw& law, uint64_t seed) {
  if (j < 0 || j > path.length()) throw Error(ErrorKind::OutOfRange, "time out of range");
  if (j == 0) return 0;
  auto chain = ancestors(path, j);
  int64_t xj = path.value(j);
  int64_t z = 0;
  for (const auto& a : chain) {
    // position on the ancestor cycle from the path infimum over [time, j];
    // the value at j itself participates, which closes the cycle exactly
    // when corner j sits at the cycle base
    int64_t xleft = path.left_limit(a.time);
    int64_t r = std::min(a.r + xleft, xj) - xleft;
    int64_t k = a.jump - r;
    if (k <= 0 || k >= a.jump) continue;  // endpoint partial sums vanish
    Rng rng = Rng::stream(seed, static_cast<uint64_t>(a.time));
    auto bridge = sample_bridge_conditioned(law, a.jump, rng);
    int64_t partial = 0;
    for (int64_t i = 0; i < k; ++i) partial += bridge[static_cast<size_t>(i)];
    z += partial;
  }
  return z;
}

void export_labels_csv(std::ostream& out, const Looptree& lt, const std::vector<int64_t>& z) {
  out << "corner,vertex,Z\n";
  for (size_t j = 0; j < z.size(); ++j)
    out << j << "," << lt.corner_vertex(static_cast<int64_t>(j)) << "," << z[j] << "\n";
}

}  // namespace looptree
