#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "looptree/mapbij.hpp"
#include "test_support.hpp"

using namespace looptree;

namespace {

// every structural invariant the bijection must transport (Table 1 counts,
// Euler formula, distance identity)
void check_instance(const LukaPath& path, const Looptree& lt, const std::vector<int64_t>& z,
                    const BipartiteMap& m) {
  const int64_t e = path.length();
  // looptree counts
  std::multiset<int64_t> cycle_lengths;
  for (const auto& c : lt.cycles) cycle_lengths.insert(c.length);
  std::multiset<int64_t> expected{path.start()};
  for (int64_t j : path.jumps())
    if (j > 0) expected.insert(j);
  REQUIRE(cycle_lengths == expected);
  int64_t inner = static_cast<int64_t>(expected.size()) - 1;
  REQUIRE(lt.num_vertices == e - inner);

  // map counts: f_n(0)+1 vertices, E_n edges, F_n+1 faces; face degrees are
  // twice the cycle lengths
  REQUIRE(m.num_vertices() == lt.num_vertices + 1);
  REQUIRE(m.num_edges() == e);
  auto faces = m.faces();
  REQUIRE(faces.count() == static_cast<int64_t>(lt.cycles.size()));
  std::multiset<int64_t> half_degrees;
  for (int64_t d : faces.degree) {
    REQUIRE(d % 2 == 0);
    half_degrees.insert(d / 2);
  }
  REQUIRE(half_degrees == expected);
  // Euler
  REQUIRE(m.num_vertices() - m.num_edges() + faces.count() == 2);

  // distance identity at every corner
  auto dist = bfs_distances(m, m.vstar());
  int64_t zmin = *std::min_element(z.begin(), z.end());
  for (int64_t j = 0; j <= e; ++j) {
    int32_t v = lt.corner_vertex(j);
    REQUIRE(dist[static_cast<size_t>(v)] == z[static_cast<size_t>(j)] - zmin + 1);
  }
}

}  // namespace

TEST_CASE("smallest instances by hand") {
  // single loop: rho=1, no parts; the map is a single edge to v*
  LukaPath loop(1, {0});
  auto lt = looptree_from_forest(forest_from_path(loop));
  Labelling lab;
  lab.bridges = {{0}};
  auto z = label_process(lt, lab);
  REQUIRE(z == std::vector<int64_t>{0, 0});
  auto m = map_from_labelled_looptree(lt, z);
  REQUIRE(m.num_edges() == 1);
  REQUIRE(m.num_vertices() == 2);
  auto faces = m.faces();
  REQUIRE(faces.count() == 1);
  REQUIRE(faces.degree[0] == 2);

  // single 2-cycle with bridge (1,-1): quadrangle boundary picture
  LukaPath two(2, {0, 0});
  auto lt2 = looptree_from_forest(forest_from_path(two));
  Labelling lab2;
  lab2.bridges = {{1, -1}};
  auto z2 = label_process(lt2, lab2);
  REQUIRE(z2 == std::vector<int64_t>{0, 1, 0});
  auto m2 = map_from_labelled_looptree(lt2, z2);
  auto faces2 = m2.faces();
  REQUIRE(faces2.count() == 1);
  REQUIRE(faces2.degree[0] == 4);
  check_instance(two, lt2, z2, m2);
}

TEST_CASE("exhaustive bijection round trip, E <= 6") {
  int64_t instances = 0;
  for (int64_t e = 1; e <= 6; ++e) {
    for (const auto& path : test_support::enumerate_excursions(e)) {
      auto lt = looptree_from_forest(forest_from_path(path));
      REQUIRE(luka_of_looptree(lt).values() == path.values());

      // all good labellings = product of bridge sets over cycles
      std::vector<std::vector<std::vector<int64_t>>> choices;
      for (const auto& c : lt.cycles) choices.push_back(test_support::enumerate_bridge_set(c.length));
      std::vector<size_t> odo(choices.size(), 0);
      for (;;) {
        Labelling lab;
        lab.bridges.resize(choices.size());
        for (size_t c = 0; c < choices.size(); ++c) lab.bridges[c] = choices[c][odo[c]];
        auto z = label_process(lt, lab);
        auto m = map_from_labelled_looptree(lt, z);
        check_instance(path, lt, z, m);

        auto back = looptree_from_pointed_map(m);
        REQUIRE(luka_of_looptree(back.lt).values() == path.values());
        REQUIRE(back.z == z);
        REQUIRE(back.lt.rho == path.start());
        ++instances;

        // odometer
        size_t c = 0;
        while (c < odo.size() && ++odo[c] == choices[c].size()) odo[c++] = 0;
        if (c == odo.size()) break;
      }
    }
  }
  CHECK(instances > 1000);  // sanity that the enumeration is nontrivial
  MESSAGE("exhaustive labelled instances: ", instances);
}

TEST_CASE("random larger instances round trip") {
  Rng rng(2024);
  for (int rep = 0; rep < 30; ++rep) {
    // random degree sequence: a few mid-size parts plus twos
    std::vector<int64_t> parts;
    int64_t big = 2 + static_cast<int64_t>(rng.below(4));
    for (int64_t i = 0; i < big; ++i) parts.push_back(2 + static_cast<int64_t>(rng.below(9)));
    for (int64_t i = 0; i < 40; ++i) parts.push_back(1 + static_cast<int64_t>(rng.below(2)));
    std::sort(parts.begin(), parts.end(), std::greater<int64_t>());
    DegreeSequence seq(1 + static_cast<int64_t>(rng.below(3)), parts);
    seq.validate();

    auto path = sample_excursion(seq, rng);
    auto lt = looptree_from_forest(forest_from_path(path));
    auto lab = good_labelling_uniform(lt, rng.next_u64());
    auto z = label_process(lt, lab);
    auto m = map_from_labelled_looptree(lt, lab);
    check_instance(path, lt, z, m);
    auto back = looptree_from_pointed_map(m);
    REQUIRE(luka_of_looptree(back.lt).values() == path.values());
    REQUIRE(back.z == z);
  }
}

TEST_CASE("root orientation is recovered (2-to-1 correspondence)") {
  Rng rng(7);
  DegreeSequence seq = DegreeSequence::quadrangulation(12);
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  auto z = label_process(lt, good_labelling_uniform(lt, 99));
  auto m = map_from_labelled_looptree(lt, z);
  // flip the root: the inverse must reorient and recover the same object
  BipartiteMap flipped(
      [&] {
        std::vector<int32_t> next(static_cast<size_t>(m.num_half_edges()));
        for (int64_t h = 0; h < m.num_half_edges(); ++h) next[static_cast<size_t>(h)] = m.next(static_cast<int32_t>(h));
        return next;
      }(),
      [&] {
        std::vector<int32_t> origin(static_cast<size_t>(m.num_half_edges()));
        for (int64_t h = 0; h < m.num_half_edges(); ++h) origin[static_cast<size_t>(h)] = m.origin(static_cast<int32_t>(h));
        return origin;
      }(),
      BipartiteMap::twin(m.root()), m.vstar(), m.num_vertices());
  auto back = looptree_from_pointed_map(flipped);
  REQUIRE(luka_of_looptree(back.lt).values() == path.values());
  REQUIRE(back.z == z);
}

TEST_CASE("map save/load round trip validates") {
  Rng rng(3);
  DegreeSequence seq = DegreeSequence::quadrangulation(6);
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  auto m = map_from_labelled_looptree(lt, label_process(lt, good_labelling_uniform(lt, 1)));
  std::stringstream ss;
  m.save(ss);
  auto m2 = BipartiteMap::load(ss);
  REQUIRE(m2.num_edges() == m.num_edges());
  auto f1 = m.faces();
  auto f2 = m2.faces();
  std::multiset<int64_t> d1(f1.degree.begin(), f1.degree.end()), d2(f2.degree.begin(), f2.degree.end());
  REQUIRE(d1 == d2);
}

TEST_CASE("profile stats identities") {
  Rng rng(11);
  DegreeSequence seq = DegreeSequence::quadrangulation(40);
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  auto z = label_process(lt, good_labelling_uniform(lt, 5));
  auto m = map_from_labelled_looptree(lt, z);
  auto ps = profile_stats(m);
  int64_t zmin = *std::min_element(z.begin(), z.end());
  int64_t zmax = *std::max_element(z.begin(), z.end());
  CHECK(ps.radius == zmax - zmin + 1);
  CHECK(ps.root_distance == 1 - zmin);
  CHECK(ps.root_edge_distance == -zmin);
  int64_t mass = 0;
  for (int64_t c : ps.histogram) mass += c;
  CHECK(mass == m.num_vertices() - 1);
}

TEST_CASE("cactus bound holds on random instances") {
  Rng rng(13);
  DegreeSequence seq = DegreeSequence::quadrangulation(60);
  auto path = sample_excursion(seq, rng);
  auto lt = looptree_from_forest(forest_from_path(path));
  auto z = label_process(lt, good_labelling_uniform(lt, 17));
  auto m = map_from_labelled_looptree(lt, z);
  auto report = cactus_bound_check(m, lt, z, 20, 50, rng);
  CHECK(report.pairs_checked == 1000);
  CHECK(report.violations == 0);
}

TEST_CASE("bad labelling is rejected") {
  LukaPath two(2, {0, 0});
  auto lt = looptree_from_forest(forest_from_path(two));
  Labelling bad;
  bad.bridges = {{2, -2}};
  CHECK_THROWS_AS(map_from_labelled_looptree(lt, bad), Error);
}
