#include "looptree/degseq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace looptree {

DegreeSequence::DegreeSequence(int64_t rho, std::vector<int64_t> parts)
    : rho_(rho), parts_(std::move(parts)) {
  bool has_zero = std::any_of(parts_.begin(), parts_.end(), [](int64_t p) { return p == 0; });
  if (!has_zero) {
    // nonzero-parts form: append the zeros implied by sum + rho = len
    int64_t sum = std::accumulate(parts_.begin(), parts_.end(), int64_t{0});
    int64_t target_len = sum + rho_;
    if (target_len > static_cast<int64_t>(parts_.size())) {
      parts_.resize(static_cast<size_t>(target_len), 0);
    }
  }
  for (int64_t p : parts_) counts_[p]++;
}

int64_t DegreeSequence::count(int64_t k) const {
  auto it = counts_.find(k);
  return it == counts_.end() ? 0 : it->second;
}

void DegreeSequence::validate() const {
  if (rho_ <= 0) throw Error(ErrorKind::BadInput, "rho must be a positive integer");
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0)
      throw Error(ErrorKind::NegativePart,
                  "part " + std::to_string(i) + " is negative: " + std::to_string(parts_[i]));
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw Error(ErrorKind::NotSorted, "parts must be non-increasing (index " + std::to_string(i) + ")");
  }
  int64_t sum = std::accumulate(parts_.begin(), parts_.end(), int64_t{0});
  int64_t len = static_cast<int64_t>(parts_.size());
  if (sum + rho_ != len)
    throw Error(ErrorKind::SumMismatch, "sum(parts)+rho != len(parts): " + std::to_string(sum) +
                                            "+" + std::to_string(rho_) +
                                            " != " + std::to_string(len));
}

DegreeSequence::Stats DegreeSequence::stats() const {
  Stats s{};
  for (int64_t p : parts_) {
    s.n += p;
    if (p > 0) s.inner++;
    s.sigma2 += p * (p - 1);
  }
  s.edges = s.n + rho_;
  s.leaves = s.edges - s.inner;
  return s;
}

int64_t DegreeSequence::sigma2_truncated(double delta) const {
  Stats s = stats();
  if (s.sigma2 == 0) throw Error(ErrorKind::ZeroSigma, "sigma2 is zero, truncation undefined");
  double threshold = delta * std::sqrt(static_cast<double>(s.sigma2)) + 1e-9;
  int64_t out = 0;
  for (const auto& [k, c] : counts_) {
    if (k >= 2 && static_cast<double>(k) <= threshold) out += k * (k - 1) * c;
  }
  return out;
}

std::vector<std::pair<int64_t, int64_t>> DegreeSequence::count_pairs() const {
  std::vector<std::pair<int64_t, int64_t>> out(counts_.begin(), counts_.end());
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first > b.first; });
  return out;
}

DegreeSequence DegreeSequence::quadrangulation(int64_t num_faces, int64_t rho) {
  std::vector<int64_t> parts(static_cast<size_t>(num_faces), 2);
  return DegreeSequence(rho, std::move(parts));
}

DegreeSequence DegreeSequence::load(std::istream& in) {
  std::string line;
  int64_t rho = -1;
  std::vector<int64_t> parts;
  bool count_format = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok.rfind("rho=", 0) == 0) {
      rho = std::stoll(tok.substr(4));
      count_format = true;
      continue;
    }
    if (count_format) {
      int64_t k = std::stoll(tok);
      int64_t c;
      if (!(ls >> c)) throw Error(ErrorKind::BadInput, "expected '<k> <count>' line");
      if (c < 0) throw Error(ErrorKind::BadInput, "negative count");
      for (int64_t i = 0; i < c; ++i) parts.push_back(k);
    } else {
      // raw whitespace-separated part list, rho defaults to 1
      parts.push_back(std::stoll(tok));
      int64_t v;
      while (ls >> v) parts.push_back(v);
    }
  }
  if (!count_format) rho = 1;
  if (rho <= 0) throw Error(ErrorKind::BadInput, "degree file must set rho=<positive int>");
  std::sort(parts.begin(), parts.end(), std::greater<int64_t>());
  DegreeSequence seq(rho, std::move(parts));
  seq.validate();
  return seq;
}

DegreeSequence DegreeSequence::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open degree file: " + path);
  return load(in);
}

void DegreeSequence::save(std::ostream& out) const {
  out << "rho=" << rho_ << "\n";
  for (const auto& [k, c] : count_pairs()) out << k << " " << c << "\n";
}

void ThetaParams::validate() const {
  if (theta0 < 0) throw Error(ErrorKind::BadInput, "theta0 must be nonnegative");
  if (rho < 0) throw Error(ErrorKind::BadInput, "rho must be nonnegative");
  if (a < 0) throw Error(ErrorKind::BadInput, "a must be nonnegative");
  if (Sigma2 < 0) throw Error(ErrorKind::BadInput, "Sigma2 must be nonnegative");
  double mass = theta0 * theta0;
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i] < 0) throw Error(ErrorKind::BadInput, "theta_i must be nonnegative");
    if (i > 0 && thetas[i] > thetas[i - 1])
      throw Error(ErrorKind::NotSorted, "thetas must be non-increasing");
    mass += thetas[i] * thetas[i];
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw Error(ErrorKind::BadInput,
                "theta0^2 + sum theta_i^2 = " + std::to_string(mass) + ", expected 1");
}

double ThetaParams::dropped_l2_mass(size_t jmax) const {
  double mass = 0.0;
  for (size_t i = jmax; i < thetas.size(); ++i) mass += thetas[i] * thetas[i];
  return mass;
}

DegreeSequence discretize_theta(const ThetaParams& params, int64_t target_sigma2, uint64_t seed) {
  (void)seed;  // construction is deterministic; the seed is kept in the
               // signature so callers can later swap in randomized rounding
  params.validate();
  if (target_sigma2 <= 0) throw Error(ErrorKind::BadInput, "target_sigma2 must be positive");
  double sigma = std::sqrt(static_cast<double>(target_sigma2));

  std::vector<int64_t> parts;
  int64_t sigma2_big = 0;
  for (double th : params.thetas) {
    int64_t p = std::llround(th * sigma);
    if (p >= 3) {
      parts.push_back(p);
      sigma2_big += p * (p - 1);
    }
  }
  if (sigma2_big > target_sigma2 + target_sigma2 / 20)
    throw Error(ErrorKind::Infeasible, "macroscopic parts alone overshoot target sigma2 by more than 5%");

  int64_t twos = std::max<int64_t>(0, (target_sigma2 - sigma2_big + 1) / 2);
  for (int64_t i = 0; i < twos; ++i) parts.push_back(2);
  std::sort(parts.begin(), parts.end(), std::greater<int64_t>());

  int64_t rho_n = std::max<int64_t>(1, std::llround(params.rho * sigma));
  DegreeSequence seq(rho_n, std::move(parts));  // zeros filled implicitly
  seq.validate();
  auto st = seq.stats();
  double rel = std::abs(static_cast<double>(st.sigma2 - target_sigma2)) /
               static_cast<double>(target_sigma2);
  if (rel > 0.05)
    throw Error(ErrorKind::Infeasible,
                "achieved sigma2 " + std::to_string(st.sigma2) + " misses target by >5%");
  return seq;
}

}  // namespace looptree
