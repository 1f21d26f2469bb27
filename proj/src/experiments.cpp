#include "looptree/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace looptree {

void run_replicas(int64_t count, int64_t threads, uint64_t seed,
                  const std::function<void(int64_t, Rng&)>& fn) {
  threads = std::max<int64_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (int64_t r = 0; r < count; ++r) {
      Rng rng = Rng::stream(seed, static_cast<uint64_t>(r));
      fn(r, rng);
    }
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int64_t t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (;;) {
        int64_t r = next.fetch_add(1);
        if (r >= count) return;
        Rng rng = Rng::stream(seed, static_cast<uint64_t>(r));
        fn(r, rng);
      }
    });
  for (auto& th : pool) th.join();
}

void ExperimentSpec::validate() const {
  if (sizes.empty()) throw Error(ErrorKind::BadInput, "empty size ladder");
  for (size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw Error(ErrorKind::BadInput, "size ladder must increase strictly");
  if (replicas < 1) throw Error(ErrorKind::BadInput, "replicas must be >= 1");
  if (family == Family::Theta) theta.validate();
}

DegreeSequence ExperimentSpec::sequence_for(int64_t n) const {
  if (family == Family::Quadrangulation) {
    if (n % 2 != 0) throw Error(ErrorKind::BadInput, "quadrangulation family needs even n");
    return DegreeSequence::quadrangulation(n / 2);
  }
  // theta family: target sigma_n^2 chosen so that n edges arise; for a theta
  // sequence the relation n ~ sigma^2/2 * (share of twos) is implicit, so we
  // target sigma2 directly by n
  return discretize_theta(theta, n, seed);
}

InvarianceSample invariance_replica(const DegreeSequence& seq, double delta, Rng& rng) {
  auto st = seq.stats();
  double sigma = std::sqrt(static_cast<double>(st.sigma2));
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  auto z = label_process(lt, good_labelling_uniform(lt, rng.next_u64()));

  const int64_t e = path.length();
  int64_t u = static_cast<int64_t>(rng.below(static_cast<uint64_t>(e))) + 1;  // uniform corner
  int64_t u2 = static_cast<int64_t>(rng.below(static_cast<uint64_t>(e))) + 1;

  InvarianceSample out{};
  double var_xi = BridgeLaw::geometric().variance();
  out.label_at_uniform = static_cast<double>(z[static_cast<size_t>(u)]) / std::sqrt(var_xi * sigma);
  out.pair_distance = static_cast<double>(looptree_distance_formula(path, u, u2)) / sigma;

  int64_t zmin = *std::min_element(z.begin(), z.end());
  int64_t zmax = *std::max_element(z.begin(), z.end());
  out.radius = static_cast<double>(zmax - zmin + 1) / std::sqrt(2.0 * sigma);
  out.root_distance = static_cast<double>(1 - zmin) / std::sqrt(2.0 * sigma);

  // spinal statistic at the same uniform time, root jump excluded
  double sigma2_delta = static_cast<double>(seq.sigma2_truncated(delta));
  AncestorSweep sweep(path);
  while (sweep.current() < u) sweep.advance();
  double c_delta = sweep.sum_r_small(delta * sigma, /*include_root=*/false);
  double height = static_cast<double>(sweep.height());
  double scaled = sigma2_delta / (2.0 * static_cast<double>(st.n)) * height;
  out.spinal = std::abs(c_delta - scaled) / std::sqrt(sigma2_delta);
  return out;
}

double label_at_uniform_time(const DegreeSequence& seq, Rng& rng) {
  auto st = seq.stats();
  double sigma = std::sqrt(static_cast<double>(st.sigma2));
  auto path = sample_excursion(seq, rng);
  int64_t u = static_cast<int64_t>(rng.below(static_cast<uint64_t>(path.length()))) + 1;
  int64_t z = label_at_time(path, u, BridgeLaw::geometric(), rng.next_u64());
  return static_cast<double>(z) / std::sqrt(BridgeLaw::geometric().variance() * sigma);
}

double continuum_label_at_uniform_time(const ThetaParams& params, int64_t grid, int64_t jmax,
                                       double a_label, Rng& rng) {
  auto bridge = sample_ei_bridge(params, grid, jmax, rng);
  auto x = vervaat_continuum(bridge, rng);
  ContinuumLoopMetric metric(x);
  double u = rng.next_double();
  return snake_labels(metric, a_label, {u}, rng)[0];
}

InvarianceReport run_invariance(const ExperimentSpec& spec) {
  spec.validate();
  InvarianceReport report;
  for (int64_t n : spec.sizes) {
    InvarianceReport::SizeRow row;
    row.n = n;
    auto seq = spec.sequence_for(n);
    row.sigma = std::sqrt(static_cast<double>(seq.stats().sigma2));
    row.samples.resize(static_cast<size_t>(spec.replicas));
    run_replicas(spec.replicas, spec.threads, spec.seed ^ static_cast<uint64_t>(n),
                 [&](int64_t r, Rng& rng) {
                   row.samples[static_cast<size_t>(r)] = invariance_replica(seq, spec.delta, rng);
                 });
    std::vector<double> spinal, radius;
    for (const auto& s : row.samples) {
      spinal.push_back(s.spinal);
      radius.push_back(s.radius);
    }
    std::sort(spinal.begin(), spinal.end());
    std::sort(radius.begin(), radius.end());
    row.median_spinal = spinal[spinal.size() / 2];
    row.median_radius = radius[radius.size() / 2];
    report.rows.push_back(std::move(row));
  }
  // KS between consecutive ladder sizes for each statistic
  auto collect = [](const InvarianceReport::SizeRow& row, auto proj) {
    std::vector<double> v;
    v.reserve(row.samples.size());
    for (const auto& s : row.samples) v.push_back(proj(s));
    return v;
  };
  for (size_t i = 0; i + 1 < report.rows.size(); ++i) {
    auto& a = report.rows[i];
    auto& b = report.rows[i + 1];
    auto add = [&](const std::string& what, auto proj) {
      auto ks = ks_distance(collect(a, proj), collect(b, proj));
      report.ks.push_back({what + " " + std::to_string(a.n) + " vs " + std::to_string(b.n),
                           ks.statistic, ks.p_value});
    };
    add("label", [](const InvarianceSample& s) { return s.label_at_uniform; });
    add("pair_distance", [](const InvarianceSample& s) { return s.pair_distance; });
    add("radius", [](const InvarianceSample& s) { return s.radius; });
  }
  return report;
}

FiniteMMSpace looptree_space(const LukaPath& path, int64_t grid_points) {
  const int64_t e = path.length();
  double sigma = 0;
  {
    // sigma^2 from the jump multiset (the parts of the degree data)
    int64_t s2 = 0;
    for (int64_t j : path.jumps()) s2 += j * (j - 1);
    sigma = std::sqrt(static_cast<double>(std::max<int64_t>(s2, 1)));
  }
  CornerDistanceOracle oracle(path);
  std::vector<int64_t> corners(static_cast<size_t>(grid_points));
  for (int64_t k = 0; k < grid_points; ++k)
    corners[static_cast<size_t>(k)] =
        std::min<int64_t>(e, (k * e) / std::max<int64_t>(1, grid_points - 1));
  return FiniteMMSpace::from_coded_interval(grid_points, [&](int64_t i, int64_t j) {
    return static_cast<double>(oracle.distance(corners[static_cast<size_t>(i)],
                                               corners[static_cast<size_t>(j)])) /
           sigma;
  });
}

std::pair<LukaPath, LukaPath> coupled_quadrangulation_paths(int64_t num_faces, int64_t factor,
                                                            uint64_t seed) {
  // shared driver: N uniforms; the large path reuses each of them `factor`
  // times with a small deterministic jitter, so both empirical jump
  // placements follow the same bridge realization
  Rng rng(seed);
  std::vector<double> base(static_cast<size_t>(num_faces));
  for (auto& u : base) u = rng.next_double();

  auto build = [](const std::vector<double>& positions, int64_t n_faces) {
    int64_t e = 2 * n_faces + 1;
    std::vector<int64_t> slot(positions.size());
    for (size_t i = 0; i < positions.size(); ++i)
      slot[i] = std::min<int64_t>(e - 1, static_cast<int64_t>(positions[i] * static_cast<double>(e)));
    std::sort(slot.begin(), slot.end());
    std::vector<int64_t> jumps(static_cast<size_t>(e), 0);
    // resolve collisions by pushing to the next free slot
    std::vector<int8_t> used(static_cast<size_t>(e), 0);
    for (int64_t s : slot) {
      int64_t at = s;
      while (at < e && used[static_cast<size_t>(at)]) ++at;
      if (at == e) {
        at = 0;
        while (used[static_cast<size_t>(at)]) ++at;
      }
      used[static_cast<size_t>(at)] = 1;
      jumps[static_cast<size_t>(at)] = 2;
    }
    return LukaPath(1, std::move(jumps));
  };

  std::vector<double> big;
  big.reserve(static_cast<size_t>(num_faces * factor));
  for (int64_t rep = 0; rep < factor; ++rep)
    for (double u : base)
      big.push_back(u + 1e-7 * static_cast<double>(rep + 1));

  LukaPath small_bridge = build(base, num_faces);
  LukaPath big_bridge = build(big, num_faces * factor);

  // rotate both at the first passage level from one shared uniform
  Rng rot(seed ^ 0x5bd1e995u);
  double u = rot.next_double();
  auto rotate_at = [&](const LukaPath& bridge) {
    int64_t e = bridge.length();
    int64_t inf = bridge.value(0);
    for (int64_t i = 0; i < e; ++i) inf = std::min(inf, bridge.value(i));
    inf -= 1;
    double level = u * static_cast<double>(bridge.start()) + static_cast<double>(inf);
    int64_t r = 0;
    while (r < e && static_cast<double>(bridge.value(r) - 1) > level) ++r;
    std::vector<int64_t> rotated(static_cast<size_t>(e));
    for (int64_t i = 0; i < e; ++i)
      rotated[static_cast<size_t>(i)] = bridge.jumps()[static_cast<size_t>((i + r) % e)];
    int64_t start = bridge.start() + (r == 0 ? 0 : bridge.jumps()[static_cast<size_t>(r - 1)]);
    LukaPath out(start, std::move(rotated));
    if (!out.is_excursion()) throw Error(ErrorKind::NotExcursion, "coupled rotation failed");
    return out;
  };
  return {rotate_at(small_bridge), rotate_at(big_bridge)};
}

double profile_sup_discrepancy(const FiniteMMSpace& a, const FiniteMMSpace& b) {
  int64_t n = std::min(a.size(), b.size());
  double sup = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    int64_t ia = (k * (a.size() - 1)) / std::max<int64_t>(1, n - 1);
    int64_t ib = (k * (b.size() - 1)) / std::max<int64_t>(1, n - 1);
    sup = std::max(sup, std::abs(a.dist(0, ia) - b.dist(0, ib)));
  }
  return sup;
}

}  // namespace looptree
