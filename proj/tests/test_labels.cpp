#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "looptree/labels.hpp"
#include "test_support.hpp"

using namespace looptree;

TEST_CASE("conditioned bridge basics") {
  Rng rng(1);
  auto law = BridgeLaw::geometric();
  CHECK(sample_bridge_conditioned(law, 1, rng) == std::vector<int64_t>{0});
  for (int64_t ell : {2, 3, 5, 17}) {
    for (int rep = 0; rep < 50; ++rep) {
      auto bridge = sample_bridge_conditioned(law, ell, rng);
      REQUIRE(static_cast<int64_t>(bridge.size()) == ell);
      int64_t sum = 0;
      for (int64_t v : bridge) {
        CHECK(v >= -1);
        sum += v;
      }
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("geometric bridges are uniform on the bridge set") {
  Rng rng(2);
  // ell = 2: three outcomes, each 1/3
  {
    std::map<std::vector<int64_t>, int64_t> counts;
    const int64_t n = 100000;
    for (int64_t i = 0; i < n; ++i) counts[sample_bridge_conditioned(BridgeLaw::geometric(), 2, rng)]++;
    REQUIRE(counts.size() == 3);
    double p = 1.0 / 3.0, sd = std::sqrt(p * (1 - p) * n);
    for (const auto& [b, c] : counts) CHECK(std::abs(static_cast<double>(c) - p * n) < 3 * sd);
  }
  // ell = 3: 10 outcomes, chi-square
  {
    auto all = test_support::enumerate_bridge_set(3);
    REQUIRE(all.size() == 10);
    std::map<std::vector<int64_t>, int64_t> counts;
    for (const auto& b : all) counts[b] = 0;
    const int64_t n = 100000;
    for (int64_t i = 0; i < n; ++i) {
      auto b = sample_bridge_conditioned(BridgeLaw::geometric(), 3, rng);
      auto it = counts.find(b);
      REQUIRE(it != counts.end());
      it->second++;
    }
    std::vector<int64_t> c;
    for (const auto& [b, v] : counts) c.push_back(v);
    CHECK(test_support::chi_square_uniform_pvalue(c, n) > 0.001);
  }
  // ell = 4: enumerate and compare against rejection sampling counts
  {
    auto all = test_support::enumerate_bridge_set(4);
    REQUIRE(all.size() == 35);  // C(7,3)
    std::map<std::vector<int64_t>, int64_t> exact_counts, rejection_counts;
    for (const auto& b : all) exact_counts[b] = rejection_counts[b] = 0;
    const int64_t n = 70000;
    for (int64_t i = 0; i < n; ++i)
      exact_counts[sample_bridge_conditioned(BridgeLaw::geometric(), 4, rng)]++;
    // rejection oracle with raw geometric draws
    auto law = BridgeLaw::geometric();
    for (int64_t i = 0; i < n;) {
      std::vector<int64_t> x(4);
      int64_t sum = 0;
      for (auto& v : x) {
        v = law.draw(rng);
        sum += v;
      }
      if (sum == 0) {
        rejection_counts[x]++;
        ++i;
      }
    }
    std::vector<int64_t> ce, cr;
    for (const auto& [b, v] : exact_counts) ce.push_back(v);
    for (const auto& [b, v] : rejection_counts) cr.push_back(v);
    CHECK(test_support::chi_square_uniform_pvalue(ce, n) > 0.001);
    CHECK(test_support::chi_square_uniform_pvalue(cr, n) > 0.001);
  }
}

TEST_CASE("exchangeability: cyclic shift invariance for ell = 3") {
  Rng rng(3);
  // count per cyclic class and position: the law of (x_1) must match the
  // law of (x_2) by shift invariance
  const int64_t n = 60000;
  std::map<int64_t, int64_t> first, second;
  for (int64_t i = 0; i < n; ++i) {
    auto b = sample_bridge_conditioned(BridgeLaw::geometric(), 3, rng);
    first[b[0]]++;
    second[b[1]]++;
  }
  for (const auto& [v, c] : first) {
    double expect = static_cast<double>(second[v]);
    CHECK(std::abs(static_cast<double>(c) - expect) < 4 * std::sqrt(static_cast<double>(c + expect)));
  }
}

TEST_CASE("centred uniform law via rejection") {
  Rng rng(4);
  auto law = BridgeLaw::centred_uniform(2);
  CHECK(law.variance() == doctest::Approx(2.0));
  for (int rep = 0; rep < 100; ++rep) {
    auto b = sample_bridge_conditioned(law, 5, rng);
    int64_t sum = 0;
    for (int64_t v : b) {
      CHECK(v >= -2);
      CHECK(v <= 2);
      sum += v;
    }
    CHECK(sum == 0);
  }
}

TEST_CASE("bridge variance closed form") {
  auto law = BridgeLaw::geometric();
  CHECK(bridge_variance(law, 2, 1).value == doctest::Approx(2.0 / 3.0));
  CHECK(bridge_variance(law, 5, 2).value == doctest::Approx(2.0));
  CHECK(bridge_variance(law, 7, 7).value == doctest::Approx(0.0));
  CHECK(bridge_variance(law, 1, 1).value == doctest::Approx(0.0));

  // Monte Carlo agreement for the geometric values at k = 5
  Rng rng(5);
  const int64_t n = 200000;
  for (int64_t j : {1, 2, 3}) {
    double sum2 = 0;
    for (int64_t i = 0; i < n; ++i) {
      auto b = sample_bridge_conditioned(law, 5, rng);
      double s = 0;
      for (int64_t t = 0; t < j; ++t) s += static_cast<double>(b[static_cast<size_t>(t)]);
      sum2 += s * s;
    }
    double mc = sum2 / static_cast<double>(n);
    double exact = bridge_variance(law, 5, j).value;
    CHECK(std::abs(mc - exact) < 4 * exact / std::sqrt(static_cast<double>(n)) * 3);
  }

  // Monte Carlo path for the uniform law reports a standard error
  auto bv = bridge_variance(BridgeLaw::centred_uniform(1), 4, 2, 20000, 9);
  CHECK(bv.exact == false);
  CHECK(bv.std_error > 0.0);
  CHECK(bv.value > 0.0);
}

TEST_CASE("label process basics") {
  auto lt = looptree_from_forest(forest_from_path(LukaPath(2, {0, 0})));
  Labelling lab;
  lab.bridges = {{1, -1}};
  CHECK(label_process(lt, lab) == std::vector<int64_t>{0, 1, 0});

  Labelling zero;
  zero.bridges = {{0, 0}};
  CHECK(label_process(lt, zero) == std::vector<int64_t>{0, 0, 0});

  Labelling wrong;
  wrong.bridges = {{1, -1, 0}};
  CHECK_THROWS_AS(label_process(lt, wrong), Error);
}

TEST_CASE("label process agrees with the path formula and graph propagation") {
  Rng rng(6);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<int64_t> parts;
    int64_t count = 1 + static_cast<int64_t>(rng.below(15));
    for (int64_t i = 0; i < count; ++i) parts.push_back(static_cast<int64_t>(rng.below(5)));
    std::sort(parts.begin(), parts.end(), std::greater<int64_t>());
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    DegreeSequence seq(1 + static_cast<int64_t>(rng.below(3)), parts);
    auto path = sample_excursion(seq, rng);
    auto lt = looptree_from_forest(forest_from_path(path));
    auto lab = good_labelling_uniform(lt, rng.next_u64());
    auto z = label_process(lt, lab);
    REQUIRE(z.front() == 0);
    REQUIRE(z.back() == 0);

    // oracle 1: the double-sum formula over the path
    std::vector<std::vector<int64_t>> bridge_at_time(static_cast<size_t>(path.length()) + 1);
    for (size_t c = 0; c < lt.cycles.size(); ++c) {
      int64_t open_time = lt.cycles[c].first_edge == 0 ? 0 : lt.cycles[c].first_edge;
      bridge_at_time[static_cast<size_t>(open_time)] = lab.bridges[c];
    }
    for (int64_t j = 0; j <= path.length(); ++j) {
      int64_t zj = 0;
      for (int64_t i = 0; i < j; ++i) {
        int64_t ell = path.jump_at(i);
        if (ell == 0) continue;
        // infimum of the real path over [i, j]
        int64_t inf = path.value(j);
        for (int64_t t = i; t <= j - 1; ++t) inf = std::min(inf, path.value(t) - 1);
        int64_t k = ell - (inf - path.left_limit(i));
        if (k <= 0 || k >= ell) continue;
        const auto& bridge = bridge_at_time[static_cast<size_t>(i)];
        REQUIRE(!bridge.empty());
        for (int64_t t = 0; t < k; ++t) zj += bridge[static_cast<size_t>(t)];
      }
      REQUIRE(z[static_cast<size_t>(j)] == zj);
    }

    // oracle 2: propagate labels through the looptree graph along a BFS
    // spanning route, independent of the contour route
    std::vector<std::vector<std::pair<int32_t, int64_t>>> adj(static_cast<size_t>(lt.num_vertices));
    for (size_t c = 0; c < lt.cycles.size(); ++c) {
      auto edges = lt.cycle_edges(static_cast<int32_t>(c));
      for (size_t p = 0; p < edges.size(); ++p) {
        int64_t e = edges[p];
        int64_t inc = lab.bridges[c][p];
        adj[static_cast<size_t>(lt.edge_src[static_cast<size_t>(e)])].push_back(
            {lt.edge_dst[static_cast<size_t>(e)], inc});
        adj[static_cast<size_t>(lt.edge_dst[static_cast<size_t>(e)])].push_back(
            {lt.edge_src[static_cast<size_t>(e)], -inc});
      }
    }
    std::vector<int64_t> vlabel(static_cast<size_t>(lt.num_vertices), INT64_MIN);
    std::vector<int32_t> queue{lt.corner_vertex(0)};
    vlabel[static_cast<size_t>(queue[0])] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi)
      for (auto [w, inc] : adj[static_cast<size_t>(queue[qi])]) {
        int64_t want = vlabel[static_cast<size_t>(queue[qi])] + inc;
        if (vlabel[static_cast<size_t>(w)] == INT64_MIN) {
          vlabel[static_cast<size_t>(w)] = want;
          queue.push_back(w);
        } else {
          REQUIRE(vlabel[static_cast<size_t>(w)] == want);  // consistency across routes
        }
      }
    for (int64_t j = 0; j <= path.length(); ++j)
      REQUIRE(z[static_cast<size_t>(j)] == vlabel[static_cast<size_t>(lt.corner_vertex(j))]);
  }
}

TEST_CASE("good labelling invariants") {
  Rng rng(7);
  // all 1-cycles: labels identically zero
  {
    LukaPath p(1, {1, 1, 1, 0});
    auto lt = looptree_from_forest(forest_from_path(p));
    auto lab = good_labelling_uniform(lt, 3);
    auto z = label_process(lt, lab);
    for (int64_t v : z) CHECK(v == 0);
  }
  for (int rep = 0; rep < 60; ++rep) {
    DegreeSequence seq = DegreeSequence::quadrangulation(10 + static_cast<int64_t>(rng.below(30)));
    auto path = sample_excursion(seq, rng);
    auto lt = looptree_from_forest(forest_from_path(path));
    auto lab = good_labelling_uniform(lt, rng.next_u64());
    CHECK(lab.is_good());
    auto z = label_process(lt, lab);
    int64_t zmin = *std::min_element(z.begin(), z.end());
    int64_t zmax = *std::max_element(z.begin(), z.end());
    CHECK(zmin <= 0);
    CHECK(zmax >= 0);
    for (size_t j = 0; j + 1 < z.size(); ++j) CHECK(z[j + 1] - z[j] >= -1);
  }
}

TEST_CASE("labelling determinism per (seed, cycle)") {
  Rng rng(8);
  DegreeSequence seq(2, {3, 2, 2, 0, 0, 0, 0, 0, 0});
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  auto a = sample_labelling(lt, BridgeLaw::geometric(), 12345);
  auto b = sample_labelling(lt, BridgeLaw::geometric(), 12345);
  CHECK(a.bridges == b.bridges);
  auto c = sample_labelling(lt, BridgeLaw::geometric(), 54321);
  CHECK(a.bridges != c.bridges);
}

TEST_CASE("label mean is zero (Monte Carlo)") {
  Rng rng(9);
  DegreeSequence seq = DegreeSequence::quadrangulation(25);
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  const int64_t n = 20000;
  std::vector<double> sums(static_cast<size_t>(path.length()) + 1, 0.0);
  std::vector<double> sq(static_cast<size_t>(path.length()) + 1, 0.0);
  for (int64_t i = 0; i < n; ++i) {
    auto z = label_process(lt, good_labelling_uniform(lt, 1000 + static_cast<uint64_t>(i)));
    for (size_t j = 0; j < z.size(); ++j) {
      sums[j] += static_cast<double>(z[j]);
      sq[j] += static_cast<double>(z[j]) * static_cast<double>(z[j]);
    }
  }
  for (size_t j = 0; j < sums.size(); ++j) {
    double mean = sums[j] / static_cast<double>(n);
    double var = sq[j] / static_cast<double>(n) - mean * mean;
    double se = std::sqrt(std::max(var, 1e-12) / static_cast<double>(n));
    CHECK(std::abs(mean) <= 3.5 * se + 1e-9);
  }
}

TEST_CASE("label_at_time matches the distribution of the full process") {
  Rng rng(10);
  DegreeSequence seq = DegreeSequence::quadrangulation(40);
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  const int64_t j = path.length() / 2;
  const int64_t n = 30000;
  double mean_full = 0, var_full = 0, mean_single = 0, var_single = 0;
  for (int64_t i = 0; i < n; ++i) {
    auto z = label_process(lt, good_labelling_uniform(lt, 5000 + static_cast<uint64_t>(i)));
    double a = static_cast<double>(z[static_cast<size_t>(j)]);
    mean_full += a;
    var_full += a * a;
    double b = static_cast<double>(
        label_at_time(path, j, BridgeLaw::geometric(), 900000 + static_cast<uint64_t>(i)));
    mean_single += b;
    var_single += b * b;
  }
  mean_full /= n; var_full = var_full / n - mean_full * mean_full;
  mean_single /= n; var_single = var_single / n - mean_single * mean_single;
  // same mean (0) and same variance within Monte Carlo error
  CHECK(std::abs(mean_full - mean_single) < 4 * std::sqrt((var_full + var_single) / n));
  CHECK(std::abs(var_full - var_single) < 4 * (var_full + var_single) * std::sqrt(2.0 / n));
}
