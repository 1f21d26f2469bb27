#include "looptree/lukapath.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

namespace looptree {

LukaPath::LukaPath(int64_t start, std::vector<int64_t> jumps)
    : start_(start), jumps_(std::move(jumps)) {
  if (start_ < 0) throw Error(ErrorKind::BadInput, "path start must be nonnegative");
  values_.resize(jumps_.size() + 1);
  int64_t v = start_;
  values_[0] = v;
  for (size_t i = 0; i < jumps_.size(); ++i) {
    if (jumps_[i] < 0) throw Error(ErrorKind::BadInput, "negative jump");
    v += jumps_[i] - 1;
    values_[i + 1] = v;
  }
}

bool LukaPath::is_excursion() const {
  if (values_.back() != 0) return false;
  for (size_t i = 0; i + 1 < values_.size(); ++i)
    if (values_[i] <= 0) return false;
  return true;
}

void LukaPath::export_csv(std::ostream& out, uint64_t seed, int64_t rho) const {
  out << "# rho=" << rho << " E_n=" << length() << " seed=" << seed << "\n";
  out << "i,jump,X\n";
  out << 0 << "," << start_ << "," << values_[0] << "\n";
  for (size_t i = 0; i < jumps_.size(); ++i)
    out << (i + 1) << "," << jumps_[i] << "," << values_[i + 1] << "\n";
}

LukaPath sample_bridge(const DegreeSequence& seq, Rng& rng) {
  std::vector<int64_t> jumps = seq.parts();
  rng.shuffle(jumps);
  return LukaPath(seq.rho(), std::move(jumps));
}

LukaPath vervaat_discrete(const LukaPath& bridge, Rng& rng) {
  const int64_t e = bridge.length();
  if (!bridge.is_bridge())
    throw Error(ErrorKind::NotABridge, "vervaat input must end at 0");
  if (e == 0) return bridge;

  // infimum of the path over [0, E] is min_i X_i - 1 over i < E
  int64_t inf = bridge.value(0);
  for (int64_t i = 0; i < e; ++i) inf = std::min(inf, bridge.value(i));
  inf -= 1;

  double u = rng.next_double() * static_cast<double>(bridge.start());
  double level = u + static_cast<double>(inf);

  // first passage: the left limit sweeps [X_i - 1, X_i) on (i, i+1]
  int64_t r = 0;
  while (r < e && static_cast<double>(bridge.value(r) - 1) > level) ++r;
  if (r < e && static_cast<double>(bridge.value(r) - 1) == level) ++r;  // passage exactly at r+1

  const auto& jumps = bridge.jumps();
  std::vector<int64_t> rotated(jumps.size());
  for (int64_t i = 0; i < e; ++i) rotated[i] = jumps[static_cast<size_t>((i + r) % e)];
  int64_t start = bridge.start() + (r == 0 ? 0 : jumps[static_cast<size_t>(r - 1)]);
  LukaPath out(start, std::move(rotated));
  assert(out.is_excursion());
  return out;
}

LukaPath sample_excursion(const DegreeSequence& seq, Rng& rng) {
  return vervaat_discrete(sample_bridge(seq, rng), rng);
}

AncestorSweep::AncestorSweep(const LukaPath& path) : path_(path), j_(1) {
  has_root_ = path.jump_at(0) > 0;
  if (has_root_) stack_.push_back({0, 0, path.jump_at(0), path.value(0)});
}

void AncestorSweep::advance() {
  // entries currently describe ancestors of j_; append X_{j_} and move on
  if (j_ >= path_.length()) throw Error(ErrorKind::OutOfRange, "sweep past end of path");
  int64_t x = path_.value(j_);
  while (!stack_.empty() && stack_.back().xleft >= x) stack_.pop_back();
  if (!stack_.empty()) stack_.back().seg_min = std::min(stack_.back().seg_min, x);
  int64_t jump = path_.jump_at(j_);
  if (jump >= 1) stack_.push_back({j_, path_.left_limit(j_), jump, x});
  ++j_;
}

void AncestorSweep::collect(std::vector<AncestorRef>& out) const {
  out.clear();
  out.resize(stack_.size());
  int64_t suffix = std::numeric_limits<int64_t>::max();
  for (size_t p = stack_.size(); p-- > 0;) {
    suffix = std::min(suffix, stack_[p].seg_min);
    out[p] = {stack_[p].idx, stack_[p].jump, suffix - 1 - stack_[p].xleft};
  }
}

double AncestorSweep::sum_r_small(double delta_abs, bool include_root) const {
  double total = 0.0;
  int64_t suffix = std::numeric_limits<int64_t>::max();
  for (size_t p = stack_.size(); p-- > 0;) {
    suffix = std::min(suffix, stack_[p].seg_min);
    if (stack_[p].idx == 0 && !include_root) continue;
    if (static_cast<double>(stack_[p].jump) <= delta_abs)
      total += static_cast<double>(suffix - 1 - stack_[p].xleft);
  }
  return total;
}

std::vector<AncestorRef> ancestors(const LukaPath& path, int64_t j) {
  if (j < 0 || j > path.length()) throw Error(ErrorKind::OutOfRange, "ancestors: time out of range");
  std::vector<AncestorRef> out;
  if (j == 0) return out;
  AncestorSweep sweep(path);
  while (sweep.current() < j) sweep.advance();
  sweep.collect(out);
  return out;
}

double continuous_part_delta(const LukaPath& path, int64_t t, double delta_abs) {
  if (t < 0 || t > path.length())
    throw Error(ErrorKind::OutOfRange, "continuous_part_delta: time out of range");
  if (t == 0) return 0.0;
  AncestorSweep sweep(path);
  while (sweep.current() < t) sweep.advance();
  return sweep.sum_r_small(delta_abs, /*include_root=*/true);
}

std::vector<int64_t> height_process(const LukaPath& path) {
  std::vector<int64_t> h(static_cast<size_t>(path.length()) + 1, 0);
  AncestorSweep sweep(path);
  for (int64_t j = 1; j <= path.length(); ++j) {
    h[static_cast<size_t>(j)] = sweep.height();
    if (j < path.length()) sweep.advance();
  }
  return h;
}

}  // namespace looptree
