#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "looptree/experiments.hpp"
#include "test_support.hpp"

using namespace looptree;

TEST_CASE("replica pool is deterministic and schedule independent") {
  auto run = [](int64_t threads) {
    std::vector<double> out(64, 0.0);
    run_replicas(64, threads, 99, [&](int64_t r, Rng& rng) {
      double acc = 0;
      for (int i = 0; i < 100; ++i) acc += rng.next_double();
      out[static_cast<size_t>(r)] = acc;
    });
    return out;
  };
  auto serial = run(1);
  auto parallel = run(4);
  CHECK(serial == parallel);
}

TEST_CASE("invariance replica produces finite, sane statistics") {
  DegreeSequence seq = DegreeSequence::quadrangulation(200);
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    auto s = invariance_replica(seq, 0.1, rng);
    CHECK(std::isfinite(s.label_at_uniform));
    CHECK(s.pair_distance >= 0.0);
    CHECK(s.radius > 0.0);
    CHECK(s.root_distance > 0.0);
    CHECK(s.radius >= s.root_distance - 1e-12);
    CHECK(s.spinal >= 0.0);
  }
}

TEST_CASE("label_at_uniform_time matches the full-replica statistic in law") {
  DegreeSequence seq = DegreeSequence::quadrangulation(150);
  const int64_t n = 4000;
  std::vector<double> fast(n), full(n);
  run_replicas(n, 2, 11, [&](int64_t r, Rng& rng) {
    fast[static_cast<size_t>(r)] = label_at_uniform_time(seq, rng);
  });
  run_replicas(n, 2, 12, [&](int64_t r, Rng& rng) {
    full[static_cast<size_t>(r)] = invariance_replica(seq, 0.1, rng).label_at_uniform;
  });
  auto ks = ks_distance(fast, full);
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("experiment spec validation and quadrangulation sequences") {
  ExperimentSpec spec;
  spec.sizes = {100, 1000};
  CHECK_NOTHROW(spec.validate());
  auto seq = spec.sequence_for(100);
  CHECK(seq.stats().n == 100);
  CHECK(seq.max_part() == 2);

  ExperimentSpec bad;
  bad.sizes = {100, 100};
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(spec.sequence_for(101), Error);
}

TEST_CASE("small invariance ladder runs and reports ks rows") {
  ExperimentSpec spec;
  spec.sizes = {200, 400};
  spec.replicas = 120;
  spec.threads = 2;
  spec.seed = 31;
  auto report = run_invariance(spec);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].samples.size() == 120);
  CHECK(report.ks.size() == 3);
  for (const auto& row : report.ks) {
    CHECK(row.statistic >= 0.0);
    CHECK(row.p_value >= 0.0);
  }
}

TEST_CASE("looptree space is a valid rescaled metric space") {
  Rng rng(7);
  DegreeSequence seq = DegreeSequence::quadrangulation(300);
  auto path = sample_excursion(seq, rng);
  auto space = looptree_space(path, 64);
  space.validate();
  CHECK(space.size() == 64);
  CHECK(space.dist(0, 63) >= 0.0);
}

TEST_CASE("coupled quadrangulation paths share their realization") {
  auto [small_path, big_path] = coupled_quadrangulation_paths(400, 16, 77);
  CHECK(small_path.is_excursion());
  CHECK(big_path.is_excursion());
  CHECK(small_path.length() == 801);
  CHECK(big_path.length() == 16 * 400 * 2 + 1);
  // rescaled paths stay close in sup norm over the shared parameter
  double sigma_small = std::sqrt(2.0 * 400.0), sigma_big = std::sqrt(2.0 * 6400.0);
  double sup = 0;
  for (int64_t k = 0; k <= 100; ++k) {
    double t = static_cast<double>(k) / 100.0;
    double a = static_cast<double>(small_path.value(
                   std::min<int64_t>(800, static_cast<int64_t>(t * 801.0)))) / sigma_small;
    double b = static_cast<double>(big_path.value(
                   std::min<int64_t>(12800, static_cast<int64_t>(t * 12801.0)))) / sigma_big;
    sup = std::max(sup, std::abs(a - b));
  }
  double diameter = 0;
  for (int64_t k = 0; k <= 800; ++k)
    diameter = std::max(diameter, static_cast<double>(small_path.value(k)) / sigma_small);
  CHECK(sup < 0.35 * std::max(1.0, diameter));
}
