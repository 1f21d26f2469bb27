#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "looptree/labels.hpp"
#include "looptree/loopforge.hpp"

namespace looptree {

// Rooted plane map as a half-edge structure: twin(h) = h ^ 1 and next_(h)
// is the next half-edge around the origin of h. Faces are the orbits of
// h -> next(twin(h)).
class BipartiteMap {
 public:
  BipartiteMap(std::vector<int32_t> next, std::vector<int32_t> origin, int32_t root, int32_t vstar,
               int32_t num_vertices);

  static int32_t twin(int32_t h) { return h ^ 1; }
  int32_t next(int32_t h) const { return next_[static_cast<size_t>(h)]; }
  int32_t origin(int32_t h) const { return origin_[static_cast<size_t>(h)]; }
  int32_t root() const { return root_; }
  int32_t vstar() const { return vstar_; }
  int64_t num_half_edges() const { return static_cast<int64_t>(next_.size()); }
  int64_t num_edges() const { return num_half_edges() / 2; }
  int32_t num_vertices() const { return num_vertices_; }

  // permutation structure, origin consistency, connectivity
  void validate() const;

  // faces as orbits of next(twin(.)); face_of[h] = face id, face degree =
  // orbit length / ... each orbit element is one edge-side
  struct Faces {
    std::vector<int32_t> face_of;       // per half-edge
    std::vector<int64_t> degree;        // per face
    int64_t count() const { return static_cast<int64_t>(degree.size()); }
  };
  Faces faces() const;

  void save(std::ostream& out) const;
  static BipartiteMap load(std::istream& in);

 private:
  std::vector<int32_t> next_;
  std::vector<int32_t> origin_;
  int32_t root_;
  int32_t vstar_;
  int32_t num_vertices_;
};

// Labelled looptree -> pointed negative bipartite map. Corner labels are
// shifted so the minimum is 1; every corner links to the next corner with a
// smaller label (to the extra vertex v* for label-1 corners). The map
// vertex ids coincide with the looptree vertex ids, v* being appended.
BipartiteMap map_from_labelled_looptree(const Looptree& lt, const Labelling& lab);
BipartiteMap map_from_labelled_looptree(const Looptree& lt, const std::vector<int64_t>& z);

// Inverse direction: labels = distances to v*, corners marked when the next
// corner clockwise in the face has a smaller label, marked corners joined
// per face into the cycles of the looptree. Returns the looptree with its
// good labelling as the corner label process.
struct LabelledLooptree {
  Looptree lt;
  std::vector<int64_t> z;
};
LabelledLooptree looptree_from_pointed_map(const BipartiteMap& m);

// Recover per-cycle bridge vectors from a corner label process.
Labelling labelling_from_z(const Looptree& lt, const std::vector<int64_t>& z);

std::vector<int64_t> bfs_distances(const BipartiteMap& m, int32_t source);

struct ProfileStats {
  int64_t radius = 0;                   // max distance from v*
  int64_t max_eccentricity_from_vstar = 0;
  std::vector<int64_t> histogram;       // histogram[d] = #vertices at distance d
  int64_t root_distance = 0;            // d(v*, origin of the root edge)
  int64_t root_edge_distance = 0;       // min over the two root-edge endpoints
};
ProfileStats profile_stats(const BipartiteMap& m);

struct CactusReport {
  int64_t pairs_checked = 0;
  int64_t violations = 0;
  int64_t max_gap = 0;  // max of D_Z(i,j) + 2 - d(v_i, v_j), for information
};
// Checks d_M(v_i, v_j) <= D_Z(i, j) + 2 over sampled corner pairs, where
// D_Z uses the cyclic tree distance of the label process.
CactusReport cactus_bound_check(const BipartiteMap& m, const Looptree& lt,
                                const std::vector<int64_t>& z, int64_t num_sources,
                                int64_t pairs_per_source, Rng& rng);

}  // namespace looptree
