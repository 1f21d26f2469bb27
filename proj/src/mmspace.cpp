#include "looptree/mmspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "looptree/rng.hpp"

namespace looptree {

FiniteMMSpace::FiniteMMSpace(int64_t n, std::vector<double> dist_row_major,
                             std::vector<double> weights)
    : n_(n), dist_(std::move(dist_row_major)), weights_(std::move(weights)) {
  if (n_ <= 0) throw Error(ErrorKind::Empty, "space must have at least one point");
  if (static_cast<int64_t>(dist_.size()) != n_ * n_)
    throw Error(ErrorKind::BadInput, "distance matrix size mismatch");
  if (static_cast<int64_t>(weights_.size()) != n_)
    throw Error(ErrorKind::BadInput, "weight vector size mismatch");
}

void FiniteMMSpace::validate(int64_t triangle_samples) const {
  double mass = 0.0;
  for (double w : weights_) {
    if (w < 0) throw Error(ErrorKind::BadInput, "negative weight");
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw Error(ErrorKind::BadInput, "weights sum to " + std::to_string(mass));
  for (int64_t i = 0; i < n_; ++i) {
    if (dist(i, i) != 0.0) throw Error(ErrorKind::NotPseudoMetric, "nonzero diagonal");
    for (int64_t j = i + 1; j < n_; ++j) {
      if (dist(i, j) < 0) throw Error(ErrorKind::NotPseudoMetric, "negative distance");
      if (dist(i, j) != dist(j, i)) throw Error(ErrorKind::NotPseudoMetric, "asymmetric distance");
    }
  }
  Rng rng(12345);
  for (int64_t s = 0; s < triangle_samples; ++s) {
    int64_t i = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n_)));
    int64_t j = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n_)));
    int64_t k = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n_)));
    if (dist(i, j) > dist(i, k) + dist(k, j) + 1e-9)
      throw Error(ErrorKind::NotPseudoMetric, "triangle inequality violated");
  }
}

FiniteMMSpace FiniteMMSpace::from_coded_interval(
    int64_t n, const std::function<double(int64_t, int64_t)>& oracle) {
  std::vector<double> dist(static_cast<size_t>(n * n), 0.0);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = i + 1; j < n; ++j) {
      double d = oracle(i, j);
      dist[static_cast<size_t>(i * n + j)] = d;
      dist[static_cast<size_t>(j * n + i)] = d;
    }
  std::vector<double> weights(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
  return FiniteMMSpace(n, std::move(dist), std::move(weights));
}

void FiniteMMSpace::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadInput, "cannot open " + path);
  const char magic[4] = {'M', 'M', 'S', 'P'};
  out.write(magic, 4);
  uint64_t n = static_cast<uint64_t>(n_);
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(dist_.data()),
            static_cast<std::streamsize>(dist_.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(weights_.data()),
            static_cast<std::streamsize>(weights_.size() * sizeof(double)));
}

FiniteMMSpace FiniteMMSpace::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "MMSP", 4) != 0)
    throw Error(ErrorKind::BadInput, "bad magic in " + path);
  uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || n == 0 || n > (1ull << 32)) throw Error(ErrorKind::BadInput, "bad size in " + path);
  std::vector<double> dist(n * n), weights(n);
  in.read(reinterpret_cast<char*>(dist.data()), static_cast<std::streamsize>(dist.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(weights.data()),
          static_cast<std::streamsize>(weights.size() * sizeof(double)));
  if (!in) throw Error(ErrorKind::BadInput, "truncated file " + path);
  return FiniteMMSpace(static_cast<int64_t>(n), std::move(dist), std::move(weights));
}

namespace {

constexpr int64_t kDenseLimit = 5000;

// pairs (i, j) such that [i/na,(i+1)/na) meets [j/nb,(j+1)/nb): the support
// of the coupling of the two uniform grid measures through a common t
std::vector<std::pair<int64_t, int64_t>> interval_pairs(int64_t na, int64_t nb) {
  std::vector<std::pair<int64_t, int64_t>> pairs;
  int64_t i = 0, j = 0;
  while (i < na && j < nb) {
    pairs.push_back({i, j});
    double end_a = static_cast<double>(i + 1) / static_cast<double>(na);
    double end_b = static_cast<double>(j + 1) / static_cast<double>(nb);
    if (end_a < end_b) ++i;
    else if (end_b < end_a) ++j;
    else {
      ++i;
      ++j;
    }
  }
  return pairs;
}

double distortion_of_pairs(const FiniteMMSpace& a, const FiniteMMSpace& b,
                           const std::vector<std::pair<int64_t, int64_t>>& pairs) {
  double dis = 0.0;
  for (size_t p = 0; p < pairs.size(); ++p)
    for (size_t q = p + 1; q < pairs.size(); ++q) {
      double da = a.dist(pairs[p].first, pairs[q].first);
      double db = b.dist(pairs[p].second, pairs[q].second);
      dis = std::max(dis, std::abs(da - db));
    }
  return dis;
}

}  // namespace

double ghp_upper(const FiniteMMSpace& a, const FiniteMMSpace& b, GhpStrategy strategy) {
  if (a.size() > kDenseLimit || b.size() > kDenseLimit)
    throw Error(ErrorKind::SizeLimit, "dense GHP bound limited to 5000 points");
  std::vector<std::pair<int64_t, int64_t>> pairs;
  if (strategy == GhpStrategy::IndexAligned) {
    pairs = interval_pairs(a.size(), b.size());
  } else {
    // quantile coupling along the mean-distance ordering of each space
    auto order_by_mean = [](const FiniteMMSpace& s) {
      std::vector<double> mean(static_cast<size_t>(s.size()), 0.0);
      for (int64_t i = 0; i < s.size(); ++i)
        for (int64_t j = 0; j < s.size(); ++j)
          mean[static_cast<size_t>(i)] += s.weight(j) * s.dist(i, j);
      std::vector<int64_t> order(static_cast<size_t>(s.size()));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&mean](int64_t x, int64_t y) {
        return mean[static_cast<size_t>(x)] < mean[static_cast<size_t>(y)];
      });
      return order;
    };
    auto oa = order_by_mean(a), ob = order_by_mean(b);
    size_t ia = 0, ib = 0;
    double ra = a.weight(oa[0]), rb = b.weight(ob[0]);
    for (;;) {
      pairs.push_back({oa[ia], ob[ib]});
      double step = std::min(ra, rb);
      ra -= step;
      rb -= step;
      if (ra <= 1e-15) {
        if (++ia >= oa.size()) break;
        ra = a.weight(oa[ia]);
      }
      if (rb <= 1e-15) {
        if (++ib >= ob.size()) break;
        rb = b.weight(ob[ib]);
      }
    }
  }
  // the couplings put zero mass outside the correspondence, so eps is driven
  // by the distortion
  double dis = distortion_of_pairs(a, b, pairs);
  return dis / 2.0;
}

FiniteMMSpace quotient_from_pseudodistance(
    int64_t n, const std::function<double(int64_t, int64_t)>& oracle) {
  if (n <= 0) throw Error(ErrorKind::Empty, "empty grid");
  constexpr double kTol = 1e-12;
  std::vector<double> d(static_cast<size_t>(n * n), 0.0);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) {
      double v = oracle(i, j);
      if (v < -kTol) throw Error(ErrorKind::NotPseudoMetric, "negative value");
      d[static_cast<size_t>(i * n + j)] = std::max(0.0, v);
    }
  for (int64_t i = 0; i < n; ++i) {
    if (d[static_cast<size_t>(i * n + i)] > kTol)
      throw Error(ErrorKind::NotPseudoMetric, "nonzero diagonal");
    for (int64_t j = 0; j < n; ++j)
      if (std::abs(d[static_cast<size_t>(i * n + j)] - d[static_cast<size_t>(j * n + i)]) > kTol)
        throw Error(ErrorKind::NotPseudoMetric, "asymmetric");
  }
  Rng rng(777);
  for (int64_t s = 0; s < std::min<int64_t>(4000, n * n); ++s) {
    int64_t i = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
    int64_t j = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
    int64_t k = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
    if (d[static_cast<size_t>(i * n + j)] >
        d[static_cast<size_t>(i * n + k)] + d[static_cast<size_t>(k * n + j)] + 1e-9)
      throw Error(ErrorKind::NotPseudoMetric, "triangle inequality violated");
  }

  // classes of points at distance <= tol
  std::vector<int64_t> rep;
  std::vector<int64_t> class_of(static_cast<size_t>(n), -1);
  for (int64_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < rep.size(); ++c)
      if (d[static_cast<size_t>(i * n + rep[c])] <= kTol) {
        class_of[static_cast<size_t>(i)] = static_cast<int64_t>(c);
        break;
      }
    if (class_of[static_cast<size_t>(i)] < 0) {
      class_of[static_cast<size_t>(i)] = static_cast<int64_t>(rep.size());
      rep.push_back(i);
    }
  }
  int64_t m = static_cast<int64_t>(rep.size());
  std::vector<double> qd(static_cast<size_t>(m * m), 0.0);
  for (int64_t x = 0; x < m; ++x)
    for (int64_t y = 0; y < m; ++y)
      qd[static_cast<size_t>(x * m + y)] =
          d[static_cast<size_t>(rep[static_cast<size_t>(x)] * n + rep[static_cast<size_t>(y)])];
  std::vector<double> w(static_cast<size_t>(m), 0.0);
  for (int64_t i = 0; i < n; ++i)
    w[static_cast<size_t>(class_of[static_cast<size_t>(i)])] += 1.0 / static_cast<double>(n);
  return FiniteMMSpace(m, std::move(qd), std::move(w));
}

double d_g_pseudodistance(const std::vector<double>& g, int64_t s, int64_t t,
                          TreeDistanceMode mode) {
  int64_t n = static_cast<int64_t>(g.size());
  if (s < 0 || t < 0 || s >= n || t >= n) throw Error(ErrorKind::OutOfRange, "grid index");
  if (s > t) std::swap(s, t);
  double inside = std::numeric_limits<double>::infinity();
  for (int64_t k = s; k <= t; ++k) inside = std::min(inside, g[static_cast<size_t>(k)]);
  double base = inside;
  if (mode == TreeDistanceMode::Circular) {
    double outside = std::numeric_limits<double>::infinity();
    for (int64_t k = 0; k <= s; ++k) outside = std::min(outside, g[static_cast<size_t>(k)]);
    for (int64_t k = t; k < n; ++k) outside = std::min(outside, g[static_cast<size_t>(k)]);
    base = std::max(inside, outside);
  }
  return g[static_cast<size_t>(s)] + g[static_cast<size_t>(t)] - 2.0 * base;
}

KsResult ks_distance(std::vector<double> sample1, std::vector<double> sample2) {
  if (sample1.empty() || sample2.empty()) throw Error(ErrorKind::Empty, "empty sample");
  std::sort(sample1.begin(), sample1.end());
  std::sort(sample2.begin(), sample2.end());
  const double n1 = static_cast<double>(sample1.size());
  const double n2 = static_cast<double>(sample2.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sample1.size() && j < sample2.size()) {
    double x1 = sample1[i], x2 = sample2[j];
    if (x1 <= x2) ++i;
    if (x2 <= x1) ++j;
    double f1 = static_cast<double>(i) / n1;
    double f2 = static_cast<double>(j) / n2;
    d = std::max(d, std::abs(f1 - f2));
  }
  double ne = std::sqrt(n1 * n2 / (n1 + n2));
  double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // asymptotic Kolmogorov tail; the alternating series only converges for
  // moderate lambda, below that the tail is 1 to double precision
  double p = 1.0;
  if (lambda >= 0.2) {
    p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
      double term = std::exp(-2.0 * lambda * lambda * static_cast<double>(k) * static_cast<double>(k));
      p += 2.0 * sign * term;
      if (term < 1e-14) break;
      sign = -sign;
    }
  }
  p = std::clamp(p, 0.0, 1.0);
  return {d, p};
}

}  // namespace looptree
