#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "looptree/degseq.hpp"
#include "looptree/error.hpp"
#include "looptree/rng.hpp"

namespace looptree {

// Integer-jump path with unit downward slope between integer times:
// X_0 = start, and at each integer time i in {1..E} the path jumps by
// jumps[i-1] >= 0. value(t) = start + sum_{i<=floor(t)} jump_i - t.
// The paths of interest are bridges (value(E) = 0) and first-passage
// excursions (additionally value(t) > 0 on [0, E)).
class LukaPath {
 public:
  LukaPath(int64_t start, std::vector<int64_t> jumps);

  int64_t start() const { return start_; }
  int64_t length() const { return static_cast<int64_t>(jumps_.size()); }  // E_n
  const std::vector<int64_t>& jumps() const { return jumps_; }

  // X_i at integer times, i in [0, E]
  int64_t value(int64_t i) const { return values_[static_cast<size_t>(i)]; }
  const std::vector<int64_t>& values() const { return values_; }

  // left limit X_{i-}; the path is 0 before time 0
  int64_t left_limit(int64_t i) const { return i == 0 ? 0 : values_[static_cast<size_t>(i - 1)] - 1; }
  // jump at integer time i, with the time-0 jump being the start value
  int64_t jump_at(int64_t i) const { return i == 0 ? start_ : jumps_[static_cast<size_t>(i - 1)]; }

  bool is_bridge() const { return values_.back() == 0; }
  bool is_excursion() const;

  void export_csv(std::ostream& out, uint64_t seed, int64_t rho) const;

 private:
  int64_t start_;
  std::vector<int64_t> jumps_;
  std::vector<int64_t> values_;
};

// Bridge version: start rho, jump multiset = parts multiset, uniformly
// permuted (Fisher-Yates).
LukaPath sample_bridge(const DegreeSequence& seq, Rng& rng);

// Discrete Vervaat transform: cyclic rotation at the integer part of the
// first passage time of level U + inf, U uniform on [0, rho). Returns a
// first-passage excursion with the same start and jump multiset.
LukaPath vervaat_discrete(const LukaPath& bridge, Rng& rng);

// Convenience: sample_bridge followed by vervaat_discrete.
LukaPath sample_excursion(const DegreeSequence& seq, Rng& rng);

struct AncestorRef {
  int64_t time;   // i with i "ancestor of" j; time 0 is the root-cycle jump
  int64_t jump;   // Delta X_i (= start at time 0)
  int64_t r;      // R^j_i = inf_{[i,j]} X - X_{i-}
};

// Monotone-stack sweep over the ancestor relation
//   i < j ancestor of j  iff  X_{i-} <= inf_{[i,j]} X,
// amortized O(E) over a full sweep. After construction the state describes
// ancestors of j = 1; advance() moves j forward by one.
class AncestorSweep {
 public:
  explicit AncestorSweep(const LukaPath& path);

  int64_t current() const { return j_; }  // entries describe ancestors of this time
  void advance();

  // number of strict ancestors, excluding the time-0 root jump
  int64_t height() const { return static_cast<int64_t>(stack_.size()) - (has_root_ ? 1 : 0); }

  // ancestors in increasing time order, with R values; O(depth)
  void collect(std::vector<AncestorRef>& out) const;

  // sum of R^j_i over ancestors with jump <= delta_abs; include_root controls
  // whether the time-0 jump participates
  double sum_r_small(double delta_abs, bool include_root) const;

 private:
  struct Entry {
    int64_t idx;
    int64_t xleft;    // X_{idx-}
    int64_t jump;     // Delta X_idx
    int64_t seg_min;  // min of X over [idx, next entry idx - 1], extended lazily
  };
  const LukaPath& path_;
  std::vector<Entry> stack_;
  int64_t j_;
  bool has_root_;
};

// Exact ancestor list of time j (time 0 included when it is one), O(j).
std::vector<AncestorRef> ancestors(const LukaPath& path, int64_t j);

// C^delta at integer time t: sum of R^t_r over ancestors r (time 0 included)
// with jump <= delta_abs. The discrete path is pure jump, so this is the
// whole delta-truncated continuous-part approximation.
double continuous_part_delta(const LukaPath& path, int64_t t, double delta_abs);

// H_j = number of strict forest ancestors of corner j; the time-0 root jump
// is not counted (it is the extra root of the augmented forest).
std::vector<int64_t> height_process(const LukaPath& path);

}  // namespace looptree
