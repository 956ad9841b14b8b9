#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlmorse/segment.hpp"
#include "dlmorse/threshold_delay.hpp"

namespace dlmorse {

/// Feedback sign of the cyclic system.
enum class Feedback : int { Negative = -1, Positive = 1 };

Feedback feedback_from_int(int delta);
inline int to_int(Feedback f) noexcept { return static_cast<int>(f); }

/// V+ forces even values (positive feedback), V- odd ones (negative feedback).
enum class ParityBranch { Plus, Minus };

inline ParityBranch branch_for(Feedback f) noexcept {
  return f == Feedback::Positive ? ParityBranch::Plus : ParityBranch::Minus;
}
std::string to_string(ParityBranch b);

struct LyapunovValue {
  int sc = 0;
  int value = 0;
  ParityBranch branch = ParityBranch::Minus;
  double a = 0.0;
};

/// Parity adjustment shared by the continuous and discrete Lyapunov functions.
int apply_parity(int sc, ParityBranch branch) noexcept;

/// Relative zero tolerance 1e-9 * max(1, ||phi||).
double zero_tolerance(const Segment& phi) noexcept;

/// Incremental alternation counter; values with |v| <= zeta carry no sign.
class SignCounter {
 public:
  explicit SignCounter(double zeta) : zeta_(zeta) {}

  void push(double v) noexcept {
    if (!(std::abs(v) > zeta_)) return;
    const int s = v > 0 ? 1 : -1;
    if (last_ != 0 && s != last_) ++count_;
    last_ = s;
  }

  int count() const noexcept { return count_; }
  bool saw_sign() const noexcept { return last_ != 0; }

 private:
  double zeta_;
  int last_ = 0;
  int count_ = 0;
};

/// Strict sign alternations of phi on [a, 0] u {1..N}. The window sequence
/// is phi(a), the Hermite extrema inside each cell, and the grid nodes, so
/// the count is the exact count of the interpolant and is monotone in a.
/// zeta < 0 selects zero_tolerance(phi).
int count_sign_changes(const Segment& phi, double a, double zeta = -1.0);

/// (V+, V-) at window start a. Throws Indeterminate when no sample in the
/// window carries a sign, UndefinedOnOrigin for the origin itself.
std::pair<int, int> v_signed(const Segment& phi, double a);

/// V(phi) with a = -tau(phi) and the branch picked by the feedback sign.
LyapunovValue lyapunov_value(const Segment& phi, const DelayKernel& kernel, Feedback delta);

struct RegularitySet {
  enum class Kind { S0, Sa, SStar, SN, Si };
  Kind kind;
  std::size_t index = 0;  // i for S^i

  std::string name() const;
  friend bool operator==(const RegularitySet&, const RegularitySet&) = default;
};

struct RegularityVerdict {
  bool in_R = true;
  std::vector<RegularitySet> failed_sets;
  /// Smallest absolute quantity whose sign decided any membership. A C1
  /// perturbation below margin/2 cannot move any of these across zero.
  double margin = 0.0;
};

/// Membership of phi in R_a. `endpoint_lipschitz` bounds how far a moves
/// per unit sup-perturbation (use delay_lipschitz_bound when a = -tau(phi));
/// zero treats a as fixed.
RegularityVerdict regularity_membership(const Segment& phi, double a, Feedback delta,
                                        double endpoint_lipschitz = 0.0);

/// Membership of phi in R, i.e. in R_a with a = -tau(phi).
RegularityVerdict regularity_at_delay(const Segment& phi, const DelayKernel& kernel, Feedback delta);

}  // namespace dlmorse
