#include "looptree/loopforge.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>

namespace looptree {

std::vector<int64_t> Looptree::cycle_edges(int32_t cycle_id) const {
  const auto& c = cycles[static_cast<size_t>(cycle_id)];
  std::vector<int64_t> out;
  out.reserve(static_cast<size_t>(c.length));
  int64_t e = c.first_edge;
  do {
    out.push_back(e);
    e = next_in_cycle[static_cast<size_t>(e)];
  } while (e != c.first_edge);
  return out;
}

void Looptree::export_edges_csv(std::ostream& out) const {
  out << "src_vertex,dst_vertex,cycle_id\n";
  for (size_t i = 0; i < edge_src.size(); ++i)
    out << edge_src[i] << "," << edge_dst[i] << "," << edge_cycle[i] << "\n";
}

void Looptree::export_embedding(std::ostream& out) const {
  out << "corner,vertex\n";
  for (int64_t i = 0; i <= num_edges(); ++i) out << i << "," << corner_vertex(i) << "\n";
}

int64_t ReducedTree::total_length() const {
  return std::accumulate(edge_length.begin(), edge_length.end(), int64_t{0});
}

int64_t ReducedTree::leaf_count() const {
  std::vector<int8_t> has_child(parent.size(), 0);
  for (size_t i = 1; i < parent.size(); ++i) has_child[static_cast<size_t>(parent[i])] = 1;
  int64_t leaves = 0;
  for (size_t i = 1; i < parent.size(); ++i)
    if (!has_child[i]) ++leaves;
  return leaves;
}

PlaneForest forest_from_path(const LukaPath& path) {
  if (!path.is_excursion())
    throw Error(ErrorKind::NotExcursion, "forest_from_path requires a first-passage excursion");
  const int64_t e = path.length();
  PlaneForest f;
  f.rho = path.start();
  int64_t v_count = e + 1;
  f.parent.assign(static_cast<size_t>(v_count), -1);
  std::vector<int32_t> degree(static_cast<size_t>(v_count));
  for (int64_t v = 0; v < v_count; ++v)
    degree[static_cast<size_t>(v)] = static_cast<int32_t>(path.jump_at(v));

  // vertices in preorder; pending[v] = children still to attach
  std::vector<int32_t> stack;
  std::vector<int32_t> pending(static_cast<size_t>(v_count));
  stack.push_back(0);
  pending[0] = degree[0];
  for (int32_t v = 1; v < v_count; ++v) {
    while (!stack.empty() && pending[static_cast<size_t>(stack.back())] == 0) stack.pop_back();
    if (stack.empty()) throw Error(ErrorKind::NotExcursion, "jump sequence is not a depth-first walk");
    int32_t u = stack.back();
    f.parent[static_cast<size_t>(v)] = u;
    pending[static_cast<size_t>(u)]--;
    pending[static_cast<size_t>(v)] = degree[static_cast<size_t>(v)];
    stack.push_back(v);
  }

  // CSR children; preorder parent assignment emits each parent's children in order
  f.child_start.assign(static_cast<size_t>(v_count) + 1, 0);
  for (int64_t v = 1; v < v_count; ++v) f.child_start[static_cast<size_t>(f.parent[static_cast<size_t>(v)]) + 1]++;
  for (size_t i = 1; i < f.child_start.size(); ++i) f.child_start[i] += f.child_start[i - 1];
  f.child_flat.resize(static_cast<size_t>(e));
  std::vector<int32_t> cursor(f.child_start.begin(), f.child_start.end() - 1);
  for (int32_t v = 1; v < v_count; ++v)
    f.child_flat[static_cast<size_t>(cursor[static_cast<size_t>(f.parent[static_cast<size_t>(v)])]++)] = v;
  return f;
}

namespace {

// rep(v): the leaf a vertex is merged into (follow right-most offspring)
std::vector<int32_t> rightmost_leaf_reps(const PlaneForest& f) {
  int64_t n = f.num_vertices();
  std::vector<int32_t> rep(static_cast<size_t>(n));
  // vertex ids are preorder, so children have larger ids; sweep backwards
  for (int64_t v = n - 1; v >= 0; --v) {
    int32_t deg = f.degree(static_cast<int32_t>(v));
    rep[static_cast<size_t>(v)] =
        deg == 0 ? static_cast<int32_t>(v)
                 : rep[static_cast<size_t>(f.child(static_cast<int32_t>(v), deg - 1))];
  }
  return rep;
}

}  // namespace

Looptree looptree_from_forest(const PlaneForest& f) {
  const int64_t e = f.num_edges();
  Looptree lt;
  lt.rho = f.rho;
  lt.edge_src.resize(static_cast<size_t>(e));
  lt.edge_dst.resize(static_cast<size_t>(e));
  lt.edge_cycle.resize(static_cast<size_t>(e));
  lt.next_in_cycle.resize(static_cast<size_t>(e));

  std::vector<int32_t> rep = rightmost_leaf_reps(f);

  // renumber looptree vertices = leaves in preorder
  std::vector<int32_t> leaf_id(static_cast<size_t>(f.num_vertices()), -1);
  int32_t leaves = 0;
  for (int64_t v = 0; v < f.num_vertices(); ++v)
    if (f.degree(static_cast<int32_t>(v)) == 0) leaf_id[static_cast<size_t>(v)] = leaves++;
  lt.num_vertices = leaves;

  // cycle ids: internal vertices in preorder (extra root = cycle 0)
  std::vector<int32_t> cycle_of(static_cast<size_t>(f.num_vertices()), -1);
  for (int64_t v = 0; v < f.num_vertices(); ++v)
    if (f.degree(static_cast<int32_t>(v)) > 0) {
      cycle_of[static_cast<size_t>(v)] = static_cast<int32_t>(lt.cycles.size());
      lt.cycles.push_back({f.degree(static_cast<int32_t>(v)), -1});
    }

  // The DFS first visit of vertex w (preorder id w) emits contour edge w-1:
  // the j'th edge of the parent cycle, from rep(previous sibling) (or the
  // cycle's base rep(u) when j = 1) to rep(w).
  for (int32_t w = 1; w <= e; ++w) {
    int32_t u = f.parent[static_cast<size_t>(w)];
    int64_t i = w - 1;  // contour index
    int32_t cyc = cycle_of[static_cast<size_t>(u)];
    lt.edge_cycle[static_cast<size_t>(i)] = cyc;
    int32_t base = f.child_start[u];
    bool first = (f.child_flat[static_cast<size_t>(base)] == w);
    int32_t src_tree;
    if (first) {
      src_tree = u;  // rep(u) = rep of right-most offspring chain
      lt.cycles[static_cast<size_t>(cyc)].first_edge = static_cast<int32_t>(i);
    } else {
      // previous sibling: children are contiguous in CSR order
      int32_t pos = base;
      while (f.child_flat[static_cast<size_t>(pos)] != w) ++pos;
      src_tree = f.child_flat[static_cast<size_t>(pos - 1)];
    }
    lt.edge_src[static_cast<size_t>(i)] = leaf_id[static_cast<size_t>(rep[static_cast<size_t>(src_tree)])];
    lt.edge_dst[static_cast<size_t>(i)] = leaf_id[static_cast<size_t>(rep[static_cast<size_t>(w)])];
  }

  // link edges within each cycle; per cycle the contour indices increase
  std::vector<int32_t> last_edge(lt.cycles.size(), -1);
  for (int64_t i = 0; i < e; ++i) {
    int32_t cyc = lt.edge_cycle[static_cast<size_t>(i)];
    if (last_edge[static_cast<size_t>(cyc)] >= 0)
      lt.next_in_cycle[static_cast<size_t>(last_edge[static_cast<size_t>(cyc)])] = static_cast<int32_t>(i);
    last_edge[static_cast<size_t>(cyc)] = static_cast<int32_t>(i);
  }
  for (size_t c = 0; c < lt.cycles.size(); ++c)
    lt.next_in_cycle[static_cast<size_t>(last_edge[c])] = lt.cycles[c].first_edge;
  return lt;
}

Looptree ck_variant(const PlaneForest& f) {
  const int64_t nv = f.num_vertices();
  Looptree lt;
  lt.rho = f.rho;
  lt.num_vertices = static_cast<int32_t>(nv);

  std::vector<int32_t> cycle_of(static_cast<size_t>(nv), -1);
  for (int64_t v = 0; v < nv; ++v)
    if (f.degree(static_cast<int32_t>(v)) > 0) {
      cycle_of[static_cast<size_t>(v)] = static_cast<int32_t>(lt.cycles.size());
      lt.cycles.push_back({f.degree(static_cast<int32_t>(v)) + 1, -1});
    }

  // contour by explicit DFS: entering child w of u draws the next edge of
  // u's cycle; leaving u (after its last child) draws the closing edge back
  // to u.
  struct Frame {
    int32_t v;
    int32_t next_child;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0});
  auto emit = [&lt](int32_t src, int32_t dst, int32_t cyc) {
    lt.edge_src.push_back(src);
    lt.edge_dst.push_back(dst);
    lt.edge_cycle.push_back(cyc);
    if (lt.cycles[static_cast<size_t>(cyc)].first_edge < 0)
      lt.cycles[static_cast<size_t>(cyc)].first_edge = static_cast<int32_t>(lt.edge_src.size()) - 1;
  };
  while (!stack.empty()) {
    Frame& fr = stack.back();
    int32_t deg = f.degree(fr.v);
    if (fr.next_child < deg) {
      int32_t w = f.child(fr.v, fr.next_child);
      int32_t src = fr.next_child == 0 ? fr.v : f.child(fr.v, fr.next_child - 1);
      emit(src, w, cycle_of[static_cast<size_t>(fr.v)]);
      fr.next_child++;
      stack.push_back({w, 0});
    } else {
      int32_t v = fr.v;
      stack.pop_back();
      if (deg > 0) emit(f.child(v, deg - 1), v, cycle_of[static_cast<size_t>(v)]);  // closing edge
    }
  }

  const int64_t e = lt.num_edges();
  lt.next_in_cycle.assign(static_cast<size_t>(e), -1);
  std::vector<int32_t> last_edge(lt.cycles.size(), -1);
  for (int64_t i = 0; i < e; ++i) {
    int32_t cyc = lt.edge_cycle[static_cast<size_t>(i)];
    if (last_edge[static_cast<size_t>(cyc)] >= 0)
      lt.next_in_cycle[static_cast<size_t>(last_edge[static_cast<size_t>(cyc)])] = static_cast<int32_t>(i);
    last_edge[static_cast<size_t>(cyc)] = static_cast<int32_t>(i);
  }
  for (size_t c = 0; c < lt.cycles.size(); ++c)
    lt.next_in_cycle[static_cast<size_t>(last_edge[c])] = lt.cycles[c].first_edge;
  return lt;
}

LukaPath luka_of_looptree(const Looptree& lt) {
  const int64_t e = lt.num_edges();
  std::vector<int64_t> jumps(static_cast<size_t>(e), 0);
  for (int64_t i = 1; i < e; ++i) jumps[static_cast<size_t>(i - 1)] = lt.ell(i);
  // Delta X_E = ell(e_E) = 0 by periodic convention
  return LukaPath(lt.ell(0), std::move(jumps));
}

VertexCounting vertex_counting(const Looptree& lt) {
  LukaPath path = luka_of_looptree(lt);
  const int64_t e = path.length();
  VertexCounting vc;
  vc.Lambda.assign(static_cast<size_t>(e) + 1, 0);
  for (int64_t j = 1; j <= e; ++j) {
    vc.Lambda[static_cast<size_t>(j)] =
        vc.Lambda[static_cast<size_t>(j - 1)] + (path.jump_at(j) == 0 ? 1 : 0);
    if (path.jump_at(j) == 0) {
      vc.lambda.push_back(j);
      vc.closed_vertex.push_back(lt.corner_vertex(j));
    }
  }
  return vc;
}

std::vector<int64_t> looptree_bfs_all(const Looptree& lt, int32_t from) {
  std::vector<std::vector<int32_t>> adj(static_cast<size_t>(lt.num_vertices));
  for (size_t i = 0; i < lt.edge_src.size(); ++i) {
    adj[static_cast<size_t>(lt.edge_src[i])].push_back(lt.edge_dst[i]);
    adj[static_cast<size_t>(lt.edge_dst[i])].push_back(lt.edge_src[i]);
  }
  std::vector<int64_t> dist(static_cast<size_t>(lt.num_vertices), -1);
  std::deque<int32_t> queue;
  dist[static_cast<size_t>(from)] = 0;
  queue.push_back(from);
  while (!queue.empty()) {
    int32_t v = queue.front();
    queue.pop_front();
    for (int32_t w : adj[static_cast<size_t>(v)])
      if (dist[static_cast<size_t>(w)] < 0) {
        dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

int64_t looptree_distance_bfs(const Looptree& lt, int32_t from, int32_t to) {
  return looptree_bfs_all(lt, from)[static_cast<size_t>(to)];
}

namespace {

inline int64_t cycle_metric(int64_t len, int64_t a, int64_t b) {
  int64_t d = std::abs(a - b);
  return len == 0 ? 0 : std::min(d, len - d);
}

int64_t distance_from_chains(const std::vector<AncestorRef>& ca, const std::vector<AncestorRef>& cb) {
  // common prefix = common ancestors; the last one is the lca
  size_t p = 0;
  while (p < ca.size() && p < cb.size() && ca[p].time == cb[p].time) ++p;
  int64_t d = 0;
  if (p > 0) d += cycle_metric(ca[p - 1].jump, ca[p - 1].r, cb[p - 1].r);
  for (size_t i = p; i < ca.size(); ++i) d += cycle_metric(ca[i].jump, 0, ca[i].r);
  for (size_t i = p; i < cb.size(); ++i) d += cycle_metric(cb[i].jump, 0, cb[i].r);
  return d;
}

}  // namespace

int64_t looptree_distance_formula(const LukaPath& path, int64_t s, int64_t t) {
  if (s < 0 || t < 0 || s > path.length() || t > path.length())
    throw Error(ErrorKind::OutOfRange, "corner index out of range");
  if (s == t) return 0;
  // the chain of s is a snapshot of the sweep; continue the same sweep to t
  if (s > t) std::swap(s, t);
  std::vector<AncestorRef> ca, cb;
  AncestorSweep sweep(path);
  while (sweep.current() < s) sweep.advance();
  if (s > 0)
    sweep.collect(ca);
  else
    ca.clear();
  while (sweep.current() < t) sweep.advance();
  sweep.collect(cb);
  // s itself may be an ancestor of t; it is then the lca and contributes
  // delta_s(0, R^t_s), which distance_from_chains handles since the s-side
  // chain ends exactly at the common prefix.
  return distance_from_chains(ca, cb);
}

CornerDistanceOracle::CornerDistanceOracle(const LukaPath& path) {
  const int64_t e = path.length();
  chains_.resize(static_cast<size_t>(e) + 1);
  AncestorSweep sweep(path);
  std::vector<AncestorRef> refs;
  for (int64_t j = 1; j <= e; ++j) {
    sweep.collect(refs);
    auto& chain = chains_[static_cast<size_t>(j)];
    chain.resize(refs.size());
    for (size_t i = 0; i < refs.size(); ++i) chain[i] = {refs[i].time, refs[i].jump, refs[i].r};
    if (j < e) sweep.advance();
  }
}

int64_t CornerDistanceOracle::distance(int64_t s, int64_t t) const {
  if (s < 0 || t < 0 || s >= static_cast<int64_t>(chains_.size()) ||
      t >= static_cast<int64_t>(chains_.size()))
    throw Error(ErrorKind::OutOfRange, "corner index out of range");
  if (s == t) return 0;
  const auto& ca = chains_[static_cast<size_t>(s)];
  const auto& cb = chains_[static_cast<size_t>(t)];
  size_t p = 0;
  while (p < ca.size() && p < cb.size() && ca[p].time == cb[p].time) ++p;
  int64_t d = 0;
  if (p > 0) d += cycle_metric(ca[p - 1].jump, ca[p - 1].r, cb[p - 1].r);
  for (size_t i = p; i < ca.size(); ++i) d += cycle_metric(ca[i].jump, 0, ca[i].r);
  for (size_t i = p; i < cb.size(); ++i) d += cycle_metric(cb[i].jump, 0, cb[i].r);
  return d;
}

ReducedTree reduced_tree(const PlaneForest& forest, int64_t q, bool sample_leaves, Rng& rng) {
  if (q < 1) throw Error(ErrorKind::BadInput, "q must be >= 1");
  const int64_t nv = forest.num_vertices();
  std::vector<int32_t> pool;
  for (int64_t v = 1; v < nv; ++v)
    if (!sample_leaves || forest.degree(static_cast<int32_t>(v)) == 0)
      pool.push_back(static_cast<int32_t>(v));
  if (pool.empty()) throw Error(ErrorKind::BadInput, "forest has no candidate vertices");

  std::vector<int32_t> samples(static_cast<size_t>(q));
  for (auto& s : samples) s = pool[static_cast<size_t>(rng.below(pool.size()))];

  // mark kept vertices (samples + their ancestors) and count kept children
  std::vector<int8_t> kept(static_cast<size_t>(nv), 0);
  std::vector<int8_t> sampled(static_cast<size_t>(nv), 0);
  for (int32_t s : samples) {
    sampled[static_cast<size_t>(s)] = 1;
    for (int32_t v = s; v >= 0 && !kept[static_cast<size_t>(v)]; v = forest.parent[static_cast<size_t>(v)])
      kept[static_cast<size_t>(v)] = 1;
  }
  std::vector<int32_t> kept_children(static_cast<size_t>(nv), 0);
  for (int64_t v = 1; v < nv; ++v)
    if (kept[static_cast<size_t>(v)]) kept_children[static_cast<size_t>(forest.parent[static_cast<size_t>(v)])]++;

  // nodes of the reduced tree: root, branchpoints, sampled vertices
  auto is_node = [&](int32_t v) {
    return v == 0 || sampled[static_cast<size_t>(v)] || kept_children[static_cast<size_t>(v)] >= 2;
  };
  ReducedTree rt;
  std::vector<int32_t> node_id(static_cast<size_t>(nv), -1);
  rt.parent.push_back(-1);
  rt.edge_length.push_back(0);
  rt.is_sample.push_back(0);
  node_id[0] = 0;
  for (int64_t v = 1; v < nv; ++v) {
    if (!kept[static_cast<size_t>(v)] || !is_node(static_cast<int32_t>(v))) continue;
    // walk up to the nearest node, counting the collapsed chain length
    int64_t len = 0;
    int32_t u = static_cast<int32_t>(v);
    do {
      u = forest.parent[static_cast<size_t>(u)];
      ++len;
    } while (!is_node(u));
    node_id[static_cast<size_t>(v)] = static_cast<int32_t>(rt.parent.size());
    rt.parent.push_back(node_id[static_cast<size_t>(u)]);
    rt.edge_length.push_back(len);
    rt.is_sample.push_back(sampled[static_cast<size_t>(v)]);
  }
  return rt;
}

}  // namespace looptree
