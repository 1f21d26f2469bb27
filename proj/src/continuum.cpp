#include "looptree/continuum.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>

#include "looptree/error.hpp"

namespace looptree {

CadlagPath::CadlagPath(double rho, double theta0, std::vector<double> bridge,
                       std::vector<Jump> jumps, double dropped_l2)
    : rho_(rho), theta0_(theta0), bridge_(std::move(bridge)), yjumps_(std::move(jumps)),
      dropped_l2_(dropped_l2) {
  if (bridge_.size() < 2) throw Error(ErrorKind::BadInput, "grid must have at least one interval");
  std::sort(yjumps_.begin(), yjumps_.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
  xjumps_ = yjumps_;
  if (rho_ > 0) xjumps_.insert(xjumps_.begin(), {0.0, rho_});
}

double CadlagPath::y_eval(double t, bool left) const {
  const int64_t g = grid_size();
  double pos = t * static_cast<double>(g);
  int64_t k = std::clamp<int64_t>(static_cast<int64_t>(std::floor(pos)), 0, g - 1);
  double frac = pos - static_cast<double>(k);
  double b = bridge_[static_cast<size_t>(k)] +
             frac * (bridge_[static_cast<size_t>(k + 1)] - bridge_[static_cast<size_t>(k)]);
  double value = rho_ * (1.0 - t) + theta0_ * b;
  for (const auto& j : yjumps_) {
    if (left ? j.time < t : j.time <= t) value += j.size;
    value -= j.size * t;
  }
  return value;
}

double CadlagPath::eval(double t) const {
  if (shift_ == 0.0) return y_eval(t, false);
  double tp = t + shift_;
  if (tp <= 1.0) return y_eval(tp, false) - shift_offset_ + rho_;
  return y_eval(tp - 1.0, false) - shift_offset_;
}

double CadlagPath::eval_left(double t) const {
  if (t <= 0.0) return 0.0;
  if (shift_ == 0.0) return y_eval(t, true);
  double tp = t + shift_;
  if (tp <= 1.0) return y_eval(tp, true) - shift_offset_ + rho_;
  return y_eval(tp - 1.0, true) - shift_offset_;
}

double CadlagPath::inf_between(double a, double b) const {
  if (a > b) std::swap(a, b);
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  // piecewise-linear between breakpoints (grid points and jump times): the
  // infimum over a piece is attained at an endpoint or a left limit
  double inf = std::min(eval(a), eval(b));
  const int64_t g = grid_size();
  int64_t k0 = static_cast<int64_t>(std::ceil(a * static_cast<double>(g)));
  int64_t k1 = static_cast<int64_t>(std::floor(b * static_cast<double>(g)));
  for (int64_t k = k0; k <= k1; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(g);
    if (t < a || t > b) continue;
    inf = std::min(inf, eval(t));
    if (t > a) inf = std::min(inf, eval_left(t));  // the left limit at a lies outside [a, b]
  }
  for (const auto& j : xjumps_) {
    if (j.time <= a || j.time > b) continue;
    inf = std::min(inf, eval_left(j.time));
  }
  return inf;
}

CadlagPath CadlagPath::rotated(double r) const {
  if (shift_ != 0.0) throw Error(ErrorKind::BadInput, "path is already rotated");
  CadlagPath out(*this);
  out.shift_ = r;
  out.shift_offset_ = r == 0.0 ? 0.0 : y_eval(r, true);
  out.xjumps_.clear();
  double x0_jump = rho_;  // (theta_r Y)_0 = Y_0 + Delta Y_r; Delta Y_r = 0 a.s.
  for (const auto& j : yjumps_) {
    double t = j.time - r;
    if (t < 0) t += 1.0;
    if (t == 0.0) {
      x0_jump += j.size;
      continue;
    }
    out.xjumps_.push_back({t, j.size});
  }
  if (x0_jump > 0) out.xjumps_.push_back({0.0, x0_jump});
  std::sort(out.xjumps_.begin(), out.xjumps_.end(),
            [](const Jump& a, const Jump& b) { return a.time < b.time; });
  return out;
}

CadlagPath sample_ei_bridge(const ThetaParams& params, int64_t grid_size, int64_t jmax, Rng& rng) {
  if (grid_size < 1) throw Error(ErrorKind::BadInput, "grid_size must be >= 1");
  std::vector<double> bridge(static_cast<size_t>(grid_size) + 1, 0.0);
  double step = 1.0 / static_cast<double>(grid_size);
  double w = 0.0;
  for (int64_t k = 1; k <= grid_size; ++k) {
    w += rng.normal() * std::sqrt(step);
    bridge[static_cast<size_t>(k)] = w;
  }
  double w1 = bridge.back();
  for (int64_t k = 0; k <= grid_size; ++k)
    bridge[static_cast<size_t>(k)] -= static_cast<double>(k) * step * w1;

  size_t kept = std::min<size_t>(params.thetas.size(), static_cast<size_t>(std::max<int64_t>(jmax, 0)));
  std::vector<CadlagPath::Jump> jumps;
  for (size_t i = 0; i < kept; ++i)
    if (params.thetas[i] > 0) jumps.push_back({rng.next_double(), params.thetas[i]});
  return CadlagPath(params.rho, params.theta0, std::move(bridge), std::move(jumps),
                    params.dropped_l2_mass(kept));
}

CadlagPath vervaat_continuum(const CadlagPath& bridge, Rng& rng) {
  const int64_t g = bridge.grid_size();
  const double step = 1.0 / static_cast<double>(g);

  std::vector<double> breaks;
  breaks.reserve(static_cast<size_t>(g) + bridge.jumps().size() + 2);
  for (int64_t k = 0; k <= g; ++k) breaks.push_back(static_cast<double>(k) * step);
  for (const auto& j : bridge.jumps()) breaks.push_back(j.time);
  std::sort(breaks.begin(), breaks.end());

  double inf = std::numeric_limits<double>::infinity();
  double arginf = 0.0;
  for (double t : breaks) {
    double v = (t == 0.0) ? bridge.eval(0.0) : bridge.eval_left(t);
    if (v < inf) {
      inf = v;
      arginf = t;
    }
    double ve = bridge.eval(t);
    if (ve < inf) {
      inf = ve;
      arginf = t;
    }
  }

  double r;
  if (bridge.rho() > 0) {
    double u = rng.next_double() * bridge.rho();
    double level = inf + u;
    // first passage of the left limit at the level, solved per linear piece
    r = 1.0;
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
      double a = breaks[p], b = breaks[p + 1];
      if (b <= a) continue;
      double va = bridge.eval(a), vb = bridge.eval_left(b);
      if (va <= level) {
        r = a;
        break;
      }
      if (vb > level) continue;
      r = a + (b - a) * (va - level) / (va - vb);
      break;
    }
  } else {
    r = arginf;
  }
  return bridge.rotated(r);
}

ContinuumLoopMetric::ContinuumLoopMetric(const CadlagPath& path) : path_(path) {
  const int64_t g = path.grid_size();
  const double step = 1.0 / static_cast<double>(g);
  // J_t at grid points: for each jump, sweep the running infimum rightward
  // and add R^t while the jump stays ancestral
  std::vector<double> jpart(static_cast<size_t>(g) + 1, 0.0);
  const auto& jumps = path.jumps();
  for (const auto& jump : jumps) {
    double xleft = path.eval_left(jump.time);
    double run = path.eval(jump.time);
    size_t next_jump = 0;
    while (next_jump < jumps.size() && jumps[next_jump].time <= jump.time) ++next_jump;
    int64_t k0 = static_cast<int64_t>(std::ceil(jump.time / step));
    for (int64_t k = k0; k <= g; ++k) {
      double t = static_cast<double>(k) * step;
      if (t <= jump.time) continue;
      while (next_jump < jumps.size() && jumps[next_jump].time <= t) {
        run = std::min(run, path_.eval_left(jumps[next_jump].time));
        ++next_jump;
      }
      run = std::min(run, std::min(path.eval_left(t), path.eval(t)));
      double rr = run - xleft;
      if (rr >= 0) jpart[static_cast<size_t>(k)] += rr;
    }
  }
  c_grid_.resize(static_cast<size_t>(g) + 1);
  c_grid_[0] = 0.0;
  for (int64_t k = 1; k <= g; ++k) {
    double t = static_cast<double>(k) * step;
    c_grid_[static_cast<size_t>(k)] =
        std::max(0.0, path.eval_left(t) - jpart[static_cast<size_t>(k)]);
  }
}

std::vector<ContinuumLoopMetric::JumpAncestor> ContinuumLoopMetric::jump_ancestors(double t) const {
  std::vector<JumpAncestor> out;
  const auto& jumps = path_.jumps();
  for (size_t i = 0; i < jumps.size(); ++i) {
    if (jumps[i].time >= t) break;
    double r = path_.inf_between(jumps[i].time, t) - path_.eval_left(jumps[i].time);
    if (r >= 0) out.push_back({i, r});
  }
  return out;
}

namespace {
inline double cycle_metric(double len, double a, double b) {
  double d = std::abs(a - b);
  return len <= 0 ? 0.0 : std::min(d, len - d);
}
}  // namespace

double ContinuumLoopMetric::d0(double s, double t) const {
  if (s == t) return 0.0;
  if (s > t) std::swap(s, t);
  auto anc_s = jump_ancestors(s);
  auto anc_t = jump_ancestors(t);
  // common ancestors form a prefix in jump order along the path
  size_t p = 0;
  while (p < anc_s.size() && p < anc_t.size() && anc_s[p].jump_index == anc_t[p].jump_index) ++p;
  double d = 0.0;
  const auto& jumps = path_.jumps();
  if (p > 0) {
    const auto& j = jumps[anc_s[p - 1].jump_index];
    d += cycle_metric(j.size, anc_s[p - 1].r, anc_t[p - 1].r);
  }
  for (size_t i = p; i < anc_s.size(); ++i)
    d += cycle_metric(jumps[anc_s[i].jump_index].size, 0.0, anc_s[i].r);
  for (size_t i = p; i < anc_t.size(); ++i)
    d += cycle_metric(jumps[anc_t[i].jump_index].size, 0.0, anc_t[i].r);
  return d;
}

double ContinuumLoopMetric::dc(double s, double t) const {
  if (s == t) return 0.0;
  if (s > t) std::swap(s, t);
  const int64_t g = path_.grid_size();
  auto c_at = [&](double u) {
    double pos = u * static_cast<double>(g);
    int64_t k = std::clamp<int64_t>(static_cast<int64_t>(std::floor(pos)), 0, g - 1);
    double frac = pos - static_cast<double>(k);
    return c_grid_[static_cast<size_t>(k)] +
           frac * (c_grid_[static_cast<size_t>(k + 1)] - c_grid_[static_cast<size_t>(k)]);
  };
  double cs = c_at(s), ct = c_at(t);
  double m = std::min(cs, ct);
  int64_t k0 = static_cast<int64_t>(std::ceil(s * static_cast<double>(g)));
  int64_t k1 = static_cast<int64_t>(std::floor(t * static_cast<double>(g)));
  for (int64_t k = k0; k <= k1; ++k) m = std::min(m, c_grid_[static_cast<size_t>(k)]);
  return cs + ct - 2.0 * m;
}

double ContinuumLoopMetric::continuous_part(double t, double delta) const {
  if (t <= 0.0) return 0.0;
  double value = path_.eval_left(t);
  const auto& jumps = path_.jumps();
  for (const auto& a : jump_ancestors(t))
    if (jumps[a.jump_index].size > delta) value -= a.r;
  return std::max(0.0, value);
}

std::vector<double> snake_on_grid(const std::vector<double>& c_grid, Rng& rng) {
  const size_t n = c_grid.size();
  std::vector<double> z(n, 0.0);
  if (n == 0) return z;
  struct SpinePoint {
    double h, v;
  };
  std::vector<SpinePoint> spine{{0.0, 0.0}};
  z[0] = c_grid[0] > 0 ? rng.normal() * std::sqrt(c_grid[0]) : 0.0;
  double head_h = c_grid[0], head_v = z[0];
  for (size_t k = 0; k + 1 < n; ++k) {
    double m = std::min(head_h, c_grid[k + 1]);
    // spine value at height m: a bridge between the highest fixed point
    // below m and the lowest constraint above m
    double up_h = head_h, up_v = head_v;
    while (!spine.empty() && spine.back().h > m) {
      up_h = spine.back().h;
      up_v = spine.back().v;
      spine.pop_back();
    }
    double lo_h = spine.empty() ? 0.0 : spine.back().h;
    double lo_v = spine.empty() ? 0.0 : spine.back().v;
    double v;
    if (m >= up_h) {
      v = up_v;
    } else if (m <= lo_h) {
      v = lo_v;
    } else {
      double span = up_h - lo_h;
      double mean = lo_v + (up_v - lo_v) * (m - lo_h) / span;
      double var = (m - lo_h) * (up_h - m) / span;
      v = mean + rng.normal() * std::sqrt(std::max(0.0, var));
    }
    spine.push_back({m, v});
    double rise = c_grid[k + 1] - m;
    z[k + 1] = v + (rise > 0 ? rng.normal() * std::sqrt(rise) : 0.0);
    head_h = c_grid[k + 1];
    head_v = z[k + 1];
  }
  return z;
}

std::vector<double> snake_labels(const ContinuumLoopMetric& metric, double a,
                                 const std::vector<double>& times, Rng& rng) {
  const CadlagPath& path = metric.path();
  const int64_t g = path.grid_size();
  std::vector<double> zc = snake_on_grid(metric.c_grid(), rng);

  // lazy joint sampling of the per-jump standard bridges; endpoints pinned
  // to zero
  std::vector<std::map<double, double>> bridges(path.jumps().size());
  auto bridge_value = [&](size_t jump_index, double x) {
    auto& known = bridges[jump_index];
    if (x <= 0.0 || x >= 1.0) return 0.0;
    auto it = known.find(x);
    if (it != known.end()) return it->second;
    double lo_x = 0.0, lo_v = 0.0, hi_x = 1.0, hi_v = 0.0;
    auto up = known.upper_bound(x);
    if (up != known.end()) {
      hi_x = up->first;
      hi_v = up->second;
    }
    if (up != known.begin()) {
      auto down = std::prev(up);
      lo_x = down->first;
      lo_v = down->second;
    }
    double span = hi_x - lo_x;
    double mean = lo_v + (hi_v - lo_v) * (x - lo_x) / span;
    double var = (x - lo_x) * (hi_x - x) / span;
    double v = mean + rng.normal() * std::sqrt(std::max(0.0, var));
    known.emplace(x, v);
    return v;
  };

  std::vector<double> out;
  out.reserve(times.size());
  const auto& jumps = path.jumps();
  double sqrt_a = std::sqrt(std::max(0.0, a));
  for (double t : times) {
    int64_t k = std::clamp<int64_t>(std::llround(t * static_cast<double>(g)), 0, g);
    double z = sqrt_a * zc[static_cast<size_t>(k)];
    for (const auto& anc : metric.jump_ancestors(t)) {
      double size = jumps[anc.jump_index].size;
      if (size <= 0) continue;
      z += std::sqrt(size) * bridge_value(anc.jump_index, anc.r / size);
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace looptree
