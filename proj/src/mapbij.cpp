#include "looptree/mapbij.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace looptree {

BipartiteMap::BipartiteMap(std::vector<int32_t> next, std::vector<int32_t> origin, int32_t root,
                           int32_t vstar, int32_t num_vertices)
    : next_(std::move(next)), origin_(std::move(origin)), root_(root), vstar_(vstar),
      num_vertices_(num_vertices) {}

void BipartiteMap::validate() const {
  const int64_t h_count = num_half_edges();
  if (h_count == 0 || (h_count & 1) != 0)
    throw Error(ErrorKind::BadInput, "half-edge count must be positive and even");
  if (static_cast<int64_t>(origin_.size()) != h_count)
    throw Error(ErrorKind::BadInput, "origin array size mismatch");
  std::vector<int32_t> seen(static_cast<size_t>(h_count), 0);
  for (int64_t h = 0; h < h_count; ++h) {
    int32_t n = next_[static_cast<size_t>(h)];
    if (n < 0 || n >= h_count) throw Error(ErrorKind::BadInput, "next out of range");
    seen[static_cast<size_t>(n)]++;
    if (origin_[static_cast<size_t>(n)] != origin_[static_cast<size_t>(h)])
      throw Error(ErrorKind::BadInput, "next must preserve the origin vertex");
  }
  for (int64_t h = 0; h < h_count; ++h)
    if (seen[static_cast<size_t>(h)] != 1) throw Error(ErrorKind::BadInput, "next is not a permutation");
  if (root_ < 0 || root_ >= h_count) throw Error(ErrorKind::BadInput, "root out of range");
  if (vstar_ < 0 || vstar_ >= num_vertices_) throw Error(ErrorKind::BadInput, "vstar out of range");
  // connectivity over vertices
  std::vector<int8_t> reached(static_cast<size_t>(num_vertices_), 0);
  std::deque<int32_t> queue{origin_[static_cast<size_t>(root_)]};
  reached[static_cast<size_t>(queue.front())] = 1;
  std::vector<std::vector<int32_t>> out(static_cast<size_t>(num_vertices_));
  for (int64_t h = 0; h < h_count; ++h)
    out[static_cast<size_t>(origin_[static_cast<size_t>(h)])].push_back(static_cast<int32_t>(h));
  while (!queue.empty()) {
    int32_t v = queue.front();
    queue.pop_front();
    for (int32_t h : out[static_cast<size_t>(v)]) {
      int32_t w = origin_[static_cast<size_t>(twin(h))];
      if (!reached[static_cast<size_t>(w)]) {
        reached[static_cast<size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  for (int32_t v = 0; v < num_vertices_; ++v)
    if (!reached[static_cast<size_t>(v)]) throw Error(ErrorKind::BadInput, "map is not connected");
}

BipartiteMap::Faces BipartiteMap::faces() const {
  Faces f;
  const int64_t h_count = num_half_edges();
  f.face_of.assign(static_cast<size_t>(h_count), -1);
  for (int64_t h = 0; h < h_count; ++h) {
    if (f.face_of[static_cast<size_t>(h)] >= 0) continue;
    int32_t id = static_cast<int32_t>(f.degree.size());
    int64_t deg = 0;
    int32_t cur = static_cast<int32_t>(h);
    do {
      f.face_of[static_cast<size_t>(cur)] = id;
      cur = next_[static_cast<size_t>(twin(cur))];
      ++deg;
    } while (cur != static_cast<int32_t>(h));
    f.degree.push_back(deg);
  }
  return f;
}

void BipartiteMap::save(std::ostream& out) const {
  out << "halfedges=" << num_half_edges() << " vertices=" << num_vertices_ << " root=" << root_
      << " vstar=" << vstar_ << "\n";
  out << "id,twin,next,origin\n";
  for (int64_t h = 0; h < num_half_edges(); ++h)
    out << h << "," << twin(static_cast<int32_t>(h)) << "," << next_[static_cast<size_t>(h)] << ","
        << origin_[static_cast<size_t>(h)] << "\n";
}

BipartiteMap BipartiteMap::load(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::BadInput, "empty map file");
  int64_t h_count = -1;
  int32_t vertices = -1, root = -1, vstar = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      std::string key = tok.substr(0, eq);
      int64_t value = std::stoll(tok.substr(eq + 1));
      if (key == "halfedges") h_count = value;
      else if (key == "vertices") vertices = static_cast<int32_t>(value);
      else if (key == "root") root = static_cast<int32_t>(value);
      else if (key == "vstar") vstar = static_cast<int32_t>(value);
    }
  }
  if (h_count <= 0 || vertices <= 0) throw Error(ErrorKind::BadInput, "bad map header");
  std::string schema;
  std::getline(in, schema);
  std::vector<int32_t> next(static_cast<size_t>(h_count), -1), origin(static_cast<size_t>(h_count), -1);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    int64_t id, tw, nx, org;
    if (!(ls >> id >> tw >> nx >> org)) throw Error(ErrorKind::BadInput, "bad map row");
    if (id < 0 || id >= h_count) throw Error(ErrorKind::BadInput, "half-edge id out of range");
    if (tw != (id ^ 1)) throw Error(ErrorKind::BadInput, "twin must be id^1 in this format");
    next[static_cast<size_t>(id)] = static_cast<int32_t>(nx);
    origin[static_cast<size_t>(id)] = static_cast<int32_t>(org);
  }
  BipartiteMap m(std::move(next), std::move(origin), root, vstar, vertices);
  m.validate();
  return m;
}

BipartiteMap map_from_labelled_looptree(const Looptree& lt, const Labelling& lab) {
  if (!lab.is_good())
    throw Error(ErrorKind::NotGoodLabelling, "labelling has an increment below -1");
  return map_from_labelled_looptree(lt, label_process(lt, lab));
}

BipartiteMap map_from_labelled_looptree(const Looptree& lt, const std::vector<int64_t>& z) {
  const int64_t n = lt.num_edges();
  if (static_cast<int64_t>(z.size()) != n + 1)
    throw Error(ErrorKind::LengthMismatch, "label process must have E+1 entries");
  for (int64_t j = 0; j < n; ++j)
    if (z[static_cast<size_t>(j + 1)] - z[static_cast<size_t>(j)] < -1)
      throw Error(ErrorKind::NotGoodLabelling, "label increment below -1 along the contour");

  int64_t zmin = *std::min_element(z.begin(), z.end());
  std::vector<int64_t> label(static_cast<size_t>(n));
  for (int64_t j = 0; j < n; ++j) label[static_cast<size_t>(j)] = z[static_cast<size_t>(j)] - zmin + 1;

  // successor scan: a corner with label L links to the next corner with
  // label L-1; the open ends form a stack because descents happen in unit
  // steps
  constexpr int32_t kVstar = -1;
  std::vector<int32_t> succ(static_cast<size_t>(n), kVstar);
  std::vector<std::vector<int32_t>> incoming(static_cast<size_t>(n));
  std::vector<int32_t> vstar_incoming;
  std::vector<int32_t> open;
  for (int64_t pass = 0; pass < 2; ++pass) {
    for (int64_t k = 0; k < n; ++k) {
      while (!open.empty() && label[static_cast<size_t>(open.back())] == label[static_cast<size_t>(k)] + 1) {
        succ[static_cast<size_t>(open.back())] = static_cast<int32_t>(k);
        incoming[static_cast<size_t>(k)].push_back(open.back());
        open.pop_back();
      }
      if (pass == 0) {
        if (label[static_cast<size_t>(k)] == 1)
          vstar_incoming.push_back(static_cast<int32_t>(k));
        else
          open.push_back(static_cast<int32_t>(k));
      } else if (open.empty()) {
        break;
      }
    }
  }
  assert(open.empty());

  // half-edges 2j (origin corner j) and 2j+1 (origin = successor's vertex
  // or v*)
  const int32_t vstar = lt.num_vertices;
  std::vector<int32_t> origin(static_cast<size_t>(2 * n));
  for (int64_t j = 0; j < n; ++j) {
    origin[static_cast<size_t>(2 * j)] = lt.corner_vertex(j);
    origin[static_cast<size_t>(2 * j + 1)] =
        succ[static_cast<size_t>(j)] == kVstar ? vstar : lt.corner_vertex(succ[static_cast<size_t>(j)]);
  }

  // Rotation from the chord diagram on the contour circle: the arcs form a
  // non-crossing chord system, so within a corner the arc ends are angularly
  // ordered by the cyclic position of their far endpoint. v* sits just past
  // the first label-1 corner m0. Around each looptree vertex the corner fans
  // follow the contour order of its corners.
  int64_t m0 = vstar_incoming.empty() ? 0 : vstar_incoming.front();
  std::vector<std::vector<int32_t>> corners_of(static_cast<size_t>(vstar));
  for (int64_t j = 0; j < n; ++j)
    corners_of[static_cast<size_t>(lt.corner_vertex(j))].push_back(static_cast<int32_t>(j));

  std::vector<std::vector<int32_t>> around(static_cast<size_t>(vstar) + 1);
  std::vector<std::pair<int64_t, int32_t>> ends;
  for (int32_t v = 0; v < vstar; ++v) {
    auto& list = around[static_cast<size_t>(v)];
    for (int32_t k : corners_of[static_cast<size_t>(v)]) {
      ends.clear();
      int32_t s = succ[static_cast<size_t>(k)];
      if (s != kVstar)
        ends.push_back({2 * ((static_cast<int64_t>(s) - k + n) % n), static_cast<int32_t>(2 * k)});
      else
        ends.push_back({2 * ((m0 - k + n) % n) + 1, static_cast<int32_t>(2 * k)});
      for (int32_t i : incoming[static_cast<size_t>(k)])
        ends.push_back({2 * ((static_cast<int64_t>(i) - k + n) % n), 2 * i + 1});
      std::sort(ends.begin(), ends.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      for (const auto& [key, h] : ends) list.push_back(h);
    }
  }
  for (auto it = vstar_incoming.rbegin(); it != vstar_incoming.rend(); ++it)
    around[static_cast<size_t>(vstar)].push_back(2 * (*it) + 1);

  std::vector<int32_t> next(static_cast<size_t>(2 * n));
  for (const auto& list : around) {
    for (size_t p = 0; p < list.size(); ++p)
      next[static_cast<size_t>(list[p])] = list[(p + 1) % list.size()];
  }

  return BipartiteMap(std::move(next), std::move(origin), /*root=*/0, vstar,
                      static_cast<int32_t>(vstar) + 1);
}

std::vector<int64_t> bfs_distances(const BipartiteMap& m, int32_t source) {
  std::vector<std::vector<int32_t>> adj(static_cast<size_t>(m.num_vertices()));
  for (int64_t h = 0; h < m.num_half_edges(); h += 2) {
    int32_t a = m.origin(static_cast<int32_t>(h));
    int32_t b = m.origin(BipartiteMap::twin(static_cast<int32_t>(h)));
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  std::vector<int64_t> dist(static_cast<size_t>(m.num_vertices()), -1);
  std::deque<int32_t> queue{source};
  dist[static_cast<size_t>(source)] = 0;
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

LabelledLooptree looptree_from_pointed_map(const BipartiteMap& m) {
  m.validate();
  std::vector<int64_t> d = bfs_distances(m, m.vstar());
  for (int64_t h = 0; h < m.num_half_edges(); h += 2) {
    int64_t da = d[static_cast<size_t>(m.origin(static_cast<int32_t>(h)))];
    int64_t db = d[static_cast<size_t>(m.origin(BipartiteMap::twin(static_cast<int32_t>(h))))];
    if (std::abs(da - db) != 1)
      throw Error(ErrorKind::NotBipartite, "an edge joins vertices at equal distance to v*");
  }

  // negative root: tip closer to v* than the origin
  int32_t root = m.root();
  if (d[static_cast<size_t>(m.origin(root))] < d[static_cast<size_t>(m.origin(BipartiteMap::twin(root)))])
    root = BipartiteMap::twin(root);

  // mark corner h when the next corner clockwise around its face has a
  // smaller label; with this code's rotation convention the clockwise face
  // step is twin(prev(h))
  auto faces = m.faces();
  const int64_t h_count = m.num_half_edges();
  std::vector<int32_t> prev_rot(static_cast<size_t>(h_count));
  for (int32_t h = 0; h < h_count; ++h) prev_rot[static_cast<size_t>(m.next(h))] = h;
  auto face_next = [&prev_rot](int32_t h) {
    return BipartiteMap::twin(prev_rot[static_cast<size_t>(h)]);
  };
  std::vector<int8_t> marked(static_cast<size_t>(h_count), 0);
  for (int32_t h = 0; h < h_count; ++h)
    if (d[static_cast<size_t>(m.origin(face_next(h)))] < d[static_cast<size_t>(m.origin(h))])
      marked[static_cast<size_t>(h)] = 1;

  // the looptree root: first marked corner of the root vertex along the face
  // to the right of the root edge
  int32_t root_corner = -1;
  {
    int32_t h = face_next(BipartiteMap::twin(root));
    for (int64_t steps = 0; steps <= h_count; ++steps) {
      if (m.origin(h) == m.origin(root) && marked[static_cast<size_t>(h)]) {
        root_corner = h;
        break;
      }
      h = face_next(h);
    }
  }
  if (root_corner < 0)
    throw Error(ErrorKind::NotBipartite, "no marked corner of the root vertex on the right face");

  // within each face, link each marked corner to the next marked corner
  std::vector<int32_t> next_marked(static_cast<size_t>(h_count), -1);
  for (int32_t h = 0; h < h_count; ++h) {
    if (!marked[static_cast<size_t>(h)]) continue;
    int32_t cur = face_next(h);
    while (!marked[static_cast<size_t>(cur)]) cur = face_next(cur);
    next_marked[static_cast<size_t>(h)] = cur;
  }

  // looptree half-edges: 2p = outgoing end at marked corner p (edge p ->
  // next_marked[p]), 2p+1 = its arriving end. Rank marked corners first.
  std::vector<int32_t> mark_rank(static_cast<size_t>(h_count), -1);
  std::vector<int32_t> marks;
  for (int32_t h = 0; h < h_count; ++h)
    if (marked[static_cast<size_t>(h)]) {
      mark_rank[static_cast<size_t>(h)] = static_cast<int32_t>(marks.size());
      marks.push_back(h);
    }
  const int64_t lt_edges = static_cast<int64_t>(marks.size());
  if (2 * lt_edges != h_count)
    throw Error(ErrorKind::NotBipartite, "marked corners must be half of all corners");

  // rotation of the looptree: follow each map vertex rotation, and inside a
  // marked corner place the outgoing end then the arriving end
  std::vector<int32_t> prev_marked(static_cast<size_t>(h_count), -1);
  for (int32_t q : marks) prev_marked[static_cast<size_t>(next_marked[static_cast<size_t>(q)])] = q;
  std::vector<int32_t> lt_next(static_cast<size_t>(2 * lt_edges));
  {
    std::vector<int8_t> visited(static_cast<size_t>(h_count), 0);
    for (int32_t h0 = 0; h0 < h_count; ++h0) {
      if (visited[static_cast<size_t>(h0)] || m.origin(h0) == m.vstar()) continue;
      std::vector<int32_t> ends;
      int32_t h = h0;
      do {
        visited[static_cast<size_t>(h)] = 1;
        if (marked[static_cast<size_t>(h)]) {
          // the outgoing end starts the edge of h; the arriving end comes
          // from the marked corner q with next_marked[q] = h
          int32_t q = prev_marked[static_cast<size_t>(h)];
          ends.push_back(2 * mark_rank[static_cast<size_t>(h)]);
          ends.push_back(2 * mark_rank[static_cast<size_t>(q)] + 1);
        }
        h = m.next(h);
      } while (h != h0);
      for (size_t i = 0; i < ends.size(); ++i)
        lt_next[static_cast<size_t>(ends[i])] = ends[(i + 1) % ends.size()];
    }
  }

  // contour: walk the outer face of the looptree starting from the root
  // corner's outgoing end, one step being next(twin(.)) in the looptree
  int32_t lt_root_end = 2 * mark_rank[static_cast<size_t>(root_corner)];
  std::vector<int32_t> contour;  // looptree half-edges, alternating parity arbitrary
  {
    int32_t cur = lt_root_end;
    std::vector<int8_t> seen_edge(static_cast<size_t>(lt_edges), 0);
    do {
      int32_t edge = cur / 2;
      if (seen_edge[static_cast<size_t>(edge)])
        throw Error(ErrorKind::NotBipartite, "outer-face walk revisits an edge");
      seen_edge[static_cast<size_t>(edge)] = 1;
      contour.push_back(cur);
      cur = lt_next[static_cast<size_t>(BipartiteMap::twin(cur))];
    } while (cur != lt_root_end && static_cast<int64_t>(contour.size()) <= lt_edges);
    if (static_cast<int64_t>(contour.size()) != lt_edges || cur != lt_root_end)
      throw Error(ErrorKind::NotBipartite, "outer-face walk does not cover every edge once");
  }

  // assemble the Looptree: cycles = faces of the map, vertices renumbered by
  // first contour appearance; endpoints of the looptree edge at contour
  // position i: from the marked corners it joins
  LabelledLooptree out;
  Looptree& lt = out.lt;
  lt.edge_src.resize(static_cast<size_t>(lt_edges));
  lt.edge_dst.resize(static_cast<size_t>(lt_edges));
  lt.edge_cycle.resize(static_cast<size_t>(lt_edges));
  lt.next_in_cycle.assign(static_cast<size_t>(lt_edges), -1);

  std::vector<int32_t> vertex_id(static_cast<size_t>(m.num_vertices()), -1);
  std::vector<int32_t> face_cycle(faces.degree.size(), -1);
  int32_t v_count = 0;

  // per contour position: the outgoing end identifies (marked corner ->
  // next marked corner) within the face of that corner
  for (int64_t i = 0; i < lt_edges; ++i) {
    int32_t end = contour[static_cast<size_t>(i)];
    int32_t edge = end / 2;
    int32_t from_corner = marks[static_cast<size_t>(edge)];
    int32_t to_corner = next_marked[static_cast<size_t>(from_corner)];
    int32_t src_corner = (end & 1) == 0 ? from_corner : to_corner;
    int32_t dst_corner = (end & 1) == 0 ? to_corner : from_corner;
    int32_t sv = m.origin(src_corner);
    int32_t dv = m.origin(dst_corner);
    if (vertex_id[static_cast<size_t>(sv)] < 0) vertex_id[static_cast<size_t>(sv)] = v_count++;
    lt.edge_src[static_cast<size_t>(i)] = vertex_id[static_cast<size_t>(sv)];
    lt.edge_dst[static_cast<size_t>(i)] = -dv - 1;  // resolved below once all ids exist
    int32_t face = faces.face_of[static_cast<size_t>(from_corner)];
    if (face_cycle[static_cast<size_t>(face)] < 0) {
      face_cycle[static_cast<size_t>(face)] = static_cast<int32_t>(lt.cycles.size());
      lt.cycles.push_back({static_cast<int32_t>(faces.degree[static_cast<size_t>(face)] / 2), -1});
    }
    lt.edge_cycle[static_cast<size_t>(i)] = face_cycle[static_cast<size_t>(face)];
  }
  for (int64_t i = 0; i < lt_edges; ++i) {
    int32_t enc = lt.edge_dst[static_cast<size_t>(i)];
    int32_t dv = -enc - 1;
    if (vertex_id[static_cast<size_t>(dv)] < 0)
      throw Error(ErrorKind::NotBipartite, "contour missed a vertex");
    lt.edge_dst[static_cast<size_t>(i)] = vertex_id[static_cast<size_t>(dv)];
  }
  lt.num_vertices = v_count;

  // first_edge and next_in_cycle in contour order per cycle
  {
    std::vector<int32_t> last_edge(lt.cycles.size(), -1);
    for (auto& c : lt.cycles) c.first_edge = -1;
    for (int64_t i = 0; i < lt_edges; ++i) {
      int32_t cyc = lt.edge_cycle[static_cast<size_t>(i)];
      if (lt.cycles[static_cast<size_t>(cyc)].first_edge < 0)
        lt.cycles[static_cast<size_t>(cyc)].first_edge = static_cast<int32_t>(i);
      if (last_edge[static_cast<size_t>(cyc)] >= 0)
        lt.next_in_cycle[static_cast<size_t>(last_edge[static_cast<size_t>(cyc)])] = static_cast<int32_t>(i);
      last_edge[static_cast<size_t>(cyc)] = static_cast<int32_t>(i);
    }
    for (size_t c = 0; c < lt.cycles.size(); ++c)
      lt.next_in_cycle[static_cast<size_t>(last_edge[c])] = lt.cycles[c].first_edge;
    lt.rho = lt.cycles.empty() ? 0 : lt.cycles[static_cast<size_t>(lt.edge_cycle[0])].length;
  }

  // labels: distance to v* shifted so the root corner has label 0
  out.z.resize(static_cast<size_t>(lt_edges) + 1);
  int64_t droot = d[static_cast<size_t>(m.origin(root))];
  for (int64_t i = 0; i < lt_edges; ++i) {
    int32_t end = contour[static_cast<size_t>(i)];
    int32_t edge = end / 2;
    int32_t from_corner = marks[static_cast<size_t>(edge)];
    int32_t to_corner = next_marked[static_cast<size_t>(from_corner)];
    int32_t src_corner = (end & 1) == 0 ? from_corner : to_corner;
    out.z[static_cast<size_t>(i)] = d[static_cast<size_t>(m.origin(src_corner))] - droot;
  }
  out.z.back() = out.z.front();
  return out;
}

Labelling labelling_from_z(const Looptree& lt, const std::vector<int64_t>& z) {
  Labelling lab;
  lab.bridges.resize(lt.cycles.size());
  for (size_t c = 0; c < lt.cycles.size(); ++c) {
    auto edges = lt.cycle_edges(static_cast<int32_t>(c));
    auto& bridge = lab.bridges[c];
    bridge.resize(edges.size());
    for (size_t p = 0; p < edges.size(); ++p)
      bridge[p] = z[static_cast<size_t>(edges[p]) + 1] - z[static_cast<size_t>(edges[p])];
  }
  return lab;
}

ProfileStats profile_stats(const BipartiteMap& m) {
  ProfileStats ps;
  std::vector<int64_t> d = bfs_distances(m, m.vstar());
  int64_t dmax = 0;
  for (int64_t v : d) dmax = std::max(dmax, v);
  ps.radius = dmax;
  ps.max_eccentricity_from_vstar = dmax;
  ps.histogram.assign(static_cast<size_t>(dmax) + 1, 0);
  for (int64_t v : d) ps.histogram[static_cast<size_t>(v)]++;
  ps.histogram[0]--;  // exclude v* itself from the profile
  ps.root_distance = d[static_cast<size_t>(m.origin(m.root()))];
  ps.root_edge_distance = std::min(ps.root_distance,
                                   d[static_cast<size_t>(m.origin(BipartiteMap::twin(m.root())))]);
  return ps;
}

namespace {

// cyclic tree distance of the label sequence: Z_i + Z_j - 2 max(min over
// [i..j], min over the complementary arc), over integer corner indices
int64_t cyclic_label_distance(const std::vector<int64_t>& z, int64_t n, int64_t i, int64_t j) {
  if (i == j) return 0;
  if (i > j) std::swap(i, j);
  int64_t inside = std::numeric_limits<int64_t>::max();
  for (int64_t k = i; k <= j; ++k) inside = std::min(inside, z[static_cast<size_t>(k)]);
  int64_t outside = std::numeric_limits<int64_t>::max();
  for (int64_t k = j; k <= n; ++k) outside = std::min(outside, z[static_cast<size_t>(k)]);
  for (int64_t k = 0; k <= i; ++k) outside = std::min(outside, z[static_cast<size_t>(k)]);
  return z[static_cast<size_t>(i)] + z[static_cast<size_t>(j)] - 2 * std::max(inside, outside);
}

}  // namespace

CactusReport cactus_bound_check(const BipartiteMap& m, const Looptree& lt,
                                const std::vector<int64_t>& z, int64_t num_sources,
                                int64_t pairs_per_source, Rng& rng) {
  CactusReport report;
  const int64_t n = lt.num_edges();
  for (int64_t s = 0; s < num_sources; ++s) {
    int64_t ci = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
    std::vector<int64_t> dist = bfs_distances(m, lt.corner_vertex(ci));
    for (int64_t p = 0; p < pairs_per_source; ++p) {
      int64_t cj = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
      int64_t dm = dist[static_cast<size_t>(lt.corner_vertex(cj))];
      int64_t bound = cyclic_label_distance(z, n, ci, cj) + 2;
      report.pairs_checked++;
      if (dm > bound) report.violations++;
      report.max_gap = std::max(report.max_gap, bound - dm);
    }
  }
  return report;
}

}  // namespace looptree
