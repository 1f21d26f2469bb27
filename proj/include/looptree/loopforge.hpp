#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "looptree/lukapath.hpp"

namespace looptree {

// Ordered plane forest with rho trees, viewed as a single tree through an
// extra root vertex (id 0) whose children are the tree roots. Vertex ids
// are depth-first preorder indices, so vertex i is the i'th DFS visit.
struct PlaneForest {
  std::vector<int32_t> parent;       // parent[0] = -1
  std::vector<int32_t> child_start;  // CSR offsets into child_flat
  std::vector<int32_t> child_flat;   // children in left-to-right order
  int64_t rho = 0;                   // number of trees = outdegree of vertex 0

  int64_t num_vertices() const { return static_cast<int64_t>(parent.size()); }
  int64_t num_edges() const { return num_vertices() - 1; }  // E_n
  int32_t degree(int32_t v) const { return child_start[v + 1] - child_start[v]; }
  int32_t child(int32_t v, int32_t j) const { return child_flat[child_start[v] + j]; }
};

// Looptree stored as contour-indexed oriented edges (outer face to the
// left). Corner i sits between e_{i-1} and e_i and is incident to the
// origin of e_i; c_0 is fixed as the root corner and c_E = c_0.
struct Looptree {
  std::vector<int32_t> edge_src;       // looptree vertex ids
  std::vector<int32_t> edge_dst;
  std::vector<int32_t> edge_cycle;     // cycle id, 0 = root cycle
  std::vector<int32_t> next_in_cycle;  // contour index of the cyclically next edge of the cycle
  struct Cycle {
    int32_t length;
    int32_t first_edge;  // smallest contour index on the cycle
  };
  std::vector<Cycle> cycles;
  int32_t num_vertices = 0;
  int64_t rho = 0;

  int64_t num_edges() const { return static_cast<int64_t>(edge_src.size()); }
  int32_t corner_vertex(int64_t i) const {
    return edge_src[static_cast<size_t>(i % num_edges())];
  }
  // ell(e_i): cycle length if e_i opens its cycle, else 0
  int64_t ell(int64_t i) const {
    const auto& c = cycles[static_cast<size_t>(edge_cycle[static_cast<size_t>(i)])];
    return c.first_edge == i ? c.length : 0;
  }
  std::vector<int64_t> cycle_edges(int32_t cycle_id) const;

  void export_edges_csv(std::ostream& out) const;
  void export_embedding(std::ostream& out) const;  // contour sequence of vertex ids
};

// Combinatorial tree with edge lengths: reduced subtree spanned by sampled
// vertices, with degree-2 chains collapsed.
struct ReducedTree {
  std::vector<int32_t> parent;        // node 0 = root, parent[0] = -1
  std::vector<int64_t> edge_length;   // length of edge to parent, edge_length[0] = 0
  std::vector<int8_t> is_sample;      // leaf markers for the q sampled vertices
  int64_t total_length() const;
  int64_t leaf_count() const;
};

// Unique forest whose depth-first walk is the given first-passage excursion.
PlaneForest forest_from_path(const LukaPath& path);

// Contracted looptree: each internal vertex merged with its right-most
// offspring; looptree vertices are the leaves of the forest.
Looptree looptree_from_forest(const PlaneForest& forest);

// Non-contracted variant (cycle lengths = offspring + 1, vertices = all
// forest vertices).
Looptree ck_variant(const PlaneForest& forest);

// Inverse of the path -> forest -> looptree pipeline.
LukaPath luka_of_looptree(const Looptree& lt);

// Lambda(j) = number of vertices fully visited by corner j (= null jumps up
// to j); lambda = its right inverse listing the closing times.
struct VertexCounting {
  std::vector<int64_t> Lambda;        // size E+1, Lambda[E] = f_n(0)
  std::vector<int64_t> lambda;        // size f_n(0): time of the m'th closing
  std::vector<int32_t> closed_vertex; // vertex closed at lambda[m]
};
VertexCounting vertex_counting(const Looptree& lt);

// Graph distance in the looptree multigraph (ground truth for the path
// formula).
int64_t looptree_distance_bfs(const Looptree& lt, int32_t from, int32_t to);
std::vector<int64_t> looptree_bfs_all(const Looptree& lt, int32_t from);

// Distance between the vertices at corners s and t evaluated from the path:
//   d(s,t) = delta_{s^t}(R^s, R^t) + sum over strict ancestors above the
//   last common ancestor of min(R, jump - R)
// equal to the graph distance for integer corner times.
int64_t looptree_distance_formula(const LukaPath& path, int64_t s, int64_t t);

// Precomputed ancestor chains for all corners; O(E * depth) memory, meant
// for moderate sizes and repeated pair queries.
class CornerDistanceOracle {
 public:
  explicit CornerDistanceOracle(const LukaPath& path);
  int64_t distance(int64_t s, int64_t t) const;

 private:
  struct Link {
    int64_t time;
    int64_t jump;
    int64_t r;
  };
  std::vector<std::vector<Link>> chains_;
};

// Reduced subtree of q uniform vertices. When sample_leaves is true the
// sample is uniform over the forest leaves (= looptree vertices), otherwise
// uniform over all non-root forest vertices.
ReducedTree reduced_tree(const PlaneForest& forest, int64_t q, bool sample_leaves, Rng& rng);

}  // namespace looptree
