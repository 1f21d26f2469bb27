#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "looptree/lukapath.hpp"
#include "test_support.hpp"

using namespace looptree;

TEST_CASE("bridge sampling: conservation and jump multiset") {
  Rng rng(1);
  DegreeSequence seq(2, {3, 2, 2, 1, 0, 0, 0, 0, 0, 0});
  seq.validate();
  for (int rep = 0; rep < 50; ++rep) {
    auto path = sample_bridge(seq, rng);
    CHECK(path.start() == 2);
    CHECK(path.value(path.length()) == 0);
    std::multiset<int64_t> jumps(path.jumps().begin(), path.jumps().end());
    std::multiset<int64_t> parts(seq.parts().begin(), seq.parts().end());
    CHECK(jumps == parts);
  }
}

TEST_CASE("pure-slope bridge: no jumps, straight descent") {
  Rng rng(2);
  DegreeSequence seq(2, {});
  auto path = sample_bridge(seq, rng);
  CHECK(path.value(0) == 2);
  CHECK(path.value(1) == 1);
  CHECK(path.value(2) == 0);
  auto exc = vervaat_discrete(path, rng);
  CHECK(exc.values() == path.values());  // already a first-passage path
}

TEST_CASE("bridge placements are uniform: 3 arrangements of [2,0,0]") {
  Rng rng(3);
  DegreeSequence seq(1, {2, 0, 0});
  std::map<std::vector<int64_t>, int64_t> counts;
  const int64_t n = 30000;
  for (int64_t rep = 0; rep < n; ++rep) counts[sample_bridge(seq, rng).jumps()]++;
  REQUIRE(counts.size() == 3);
  // each frequency within 3 sigma of 1/3
  double p = 1.0 / 3.0, sd = std::sqrt(p * (1 - p) * n);
  for (const auto& [jumps, c] : counts)
    CHECK(std::abs(static_cast<double>(c) - p * n) < 3 * sd);
}

TEST_CASE("vervaat output is uniform over first-passage paths (E_n <= 8)") {
  DegreeSequence seq(2, {3, 1, 0, 0, 0, 0});
  seq.validate();
  // brute-force enumeration of the valid paths with this jump multiset
  std::map<std::vector<int64_t>, int64_t> valid;
  {
    std::vector<int64_t> jumps(seq.parts());
    std::sort(jumps.begin(), jumps.end());
    do {
      LukaPath p(seq.rho(), jumps);
      if (p.is_excursion()) valid[jumps] = 0;
    } while (std::next_permutation(jumps.begin(), jumps.end()));
  }
  REQUIRE(!valid.empty());
  Rng rng(5);
  const int64_t n = 100000;
  for (int64_t rep = 0; rep < n; ++rep) {
    auto x = sample_excursion(seq, rng);
    auto it = valid.find(x.jumps());
    REQUIRE(it != valid.end());
    it->second++;
  }
  std::vector<int64_t> counts;
  for (const auto& [k, c] : valid) counts.push_back(c);
  CHECK(test_support::chi_square_uniform_pvalue(counts, n) > 0.001);
}

TEST_CASE("vervaat requires a bridge") {
  Rng rng(6);
  LukaPath not_bridge(2, {2, 0});  // ends at 2+2-2 = 2
  CHECK_THROWS_AS(vervaat_discrete(not_bridge, rng), Error);
}

TEST_CASE("vervaat always yields the excursion invariant") {
  Rng rng(7);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<int64_t> parts;
    int64_t count = 1 + static_cast<int64_t>(rng.below(20));
    for (int64_t i = 0; i < count; ++i) parts.push_back(static_cast<int64_t>(rng.below(5)));
    std::sort(parts.begin(), parts.end(), std::greater<int64_t>());
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    DegreeSequence seq(1 + static_cast<int64_t>(rng.below(5)), parts);
    seq.validate();
    CHECK(sample_excursion(seq, rng).is_excursion());
  }
}

TEST_CASE("ancestors match the quadratic oracle exhaustively (E_n <= 8)") {
  for (int64_t e = 1; e <= 8; ++e) {
    auto paths = test_support::enumerate_excursions(e);
    // exhaustive up to E=6; thin out the larger sets for speed
    size_t stride = e <= 6 ? 1 : 7;
    for (size_t pi = 0; pi < paths.size(); pi += stride) {
      const auto& path = paths[pi];
      for (int64_t j = 0; j <= e; ++j) {
        auto got = ancestors(path, j);
        auto want = test_support::brute_ancestors(path, j);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].time == want[i].time);
          CHECK(got[i].jump == want[i].jump);
          CHECK(got[i].r == want[i].r);
        }
      }
    }
  }
}

TEST_CASE("ancestors: hand-checked cases") {
  // rho=1, parts=[1,0]: X = (1,1,0); both time 0 and time 1 are ancestors
  // of 2 with R = 0
  LukaPath p(1, {1, 0});
  auto a = ancestors(p, 2);
  REQUIRE(a.size() == 2);
  CHECK(a[0].time == 0);
  CHECK(a[0].jump == 1);
  CHECK(a[0].r == 0);
  CHECK(a[1].time == 1);
  CHECK(a[1].jump == 1);
  CHECK(a[1].r == 0);

  CHECK(ancestors(p, 0).empty());

  // single jump k at time 1: ancestors(m) for 2 <= m <= k+1 contain time 1
  // with R = inf - X_{1-}
  const int64_t k = 4;
  LukaPath q(1, {k, 0, 0, 0, 0});
  for (int64_t mcorner = 2; mcorner <= k + 1; ++mcorner) {
    auto anc = ancestors(q, mcorner);
    REQUIRE(anc.size() == 2);  // root jump and the k-jump
    CHECK(anc[1].time == 1);
    CHECK(anc[1].jump == k);
    int64_t inf = std::numeric_limits<int64_t>::max();
    for (int64_t t = 1; t <= mcorner - 1; ++t) inf = std::min(inf, q.value(t));
    CHECK(anc[1].r == inf - 1 - q.left_limit(1));
  }

  CHECK_THROWS_AS(ancestors(p, 5), Error);
}

TEST_CASE("invariant: R values and jumps satisfy 0 <= R < jump") {
  Rng rng(8);
  DegreeSequence seq(2, {4, 3, 2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  seq.validate();
  for (int rep = 0; rep < 20; ++rep) {
    auto path = sample_excursion(seq, rng);
    for (int64_t j = 1; j <= path.length(); ++j) {
      for (const auto& a : ancestors(path, j)) {
        CHECK(a.r >= 0);
        CHECK(a.r < a.jump);
      }
    }
  }
}

TEST_CASE("conservation: sum of R over ancestors equals X_{j-}") {
  Rng rng(9);
  DegreeSequence seq(1, {3, 3, 2, 1, 1, 0, 0, 0, 0, 0, 0});
  seq.validate();
  for (int rep = 0; rep < 20; ++rep) {
    auto path = sample_excursion(seq, rng);
    for (int64_t j = 1; j <= path.length(); ++j) {
      int64_t total = 0;
      for (const auto& a : ancestors(path, j)) total += a.r;
      CHECK(total == path.left_limit(j));
    }
  }
}

TEST_CASE("continuous_part_delta") {
  // single jump k: t = 2, delta >= k gives R^2_1 + R^2_0
  LukaPath q(1, {4, 0, 0, 0, 0});
  auto anc = ancestors(q, 2);
  double full = 0;
  for (const auto& a : anc) full += static_cast<double>(a.r);
  CHECK(continuous_part_delta(q, 2, 100.0) == full);
  CHECK(continuous_part_delta(q, 2, 100.0) == static_cast<double>(q.left_limit(2)));
  CHECK(continuous_part_delta(q, 2, 0.5) == 0.0);
  CHECK(continuous_part_delta(q, 0, 1.0) == 0.0);

  // delta below the smallest positive jump gives 0
  Rng rng(10);
  DegreeSequence seq(2, {3, 2});
  auto path = sample_excursion(seq, rng);
  for (int64_t t = 0; t <= path.length(); ++t) CHECK(continuous_part_delta(path, t, 0.9) == 0.0);
}

TEST_CASE("height process") {
  // pure slope: H = 0 everywhere
  LukaPath flat(3, {0, 0, 0});
  auto h = height_process(flat);
  for (int64_t j = 1; j < 3; ++j) CHECK(h[static_cast<size_t>(j)] == 0);

  // single jump k at time 1: H_j = 1 for j in {2..k+1}
  LukaPath q(1, {3, 0, 0, 0});
  auto hq = height_process(q);
  CHECK(hq[1] == 0);
  for (int64_t j = 2; j <= 4; ++j) CHECK(hq[static_cast<size_t>(j)] == 1);

  // chain of unary cycles: H_j = j - 1
  LukaPath chain(1, {1, 1, 1, 1, 0});
  auto hc = height_process(chain);
  for (int64_t j = 1; j <= 5; ++j) CHECK(hc[static_cast<size_t>(j)] == j - 1);

  // against the brute-force ancestor scan
  Rng rng(11);
  DegreeSequence seq(1, {2, 2, 1, 0, 0, 0});
  for (int rep = 0; rep < 30; ++rep) {
    auto path = sample_excursion(seq, rng);
    auto hp = height_process(path);
    for (int64_t j = 1; j <= path.length(); ++j) {
      auto brute = test_support::brute_ancestors(path, j);
      int64_t nonroot = 0;
      for (const auto& a : brute)
        if (a.time > 0) ++nonroot;
      CHECK(hp[static_cast<size_t>(j)] == nonroot);
    }
  }
}

TEST_CASE("csv export carries metadata and rows") {
  LukaPath p(1, {2, 0, 0});
  std::stringstream ss;
  p.export_csv(ss, 99, 1);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "# rho=1 E_n=3 seed=99");
  std::getline(ss, line);
  CHECK(line == "i,jump,X");
  std::getline(ss, line);
  CHECK(line == "0,1,1");
}
