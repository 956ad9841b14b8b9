#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlmorse/segment.hpp"

namespace dlmorse {

/// Named preset and parameters a kernel was built from; empty name for
/// kernels built from an arbitrary callable.
struct KernelDescription {
  std::string name;
  std::map<std::string, double> params;
};

/// The rate function alpha of the threshold condition
///   integral_{-tau}^{0} alpha(phi(s)) ds = 1
/// with bounds alpha1 = 1/r <= alpha <= alpha2 and an optional plateau
/// alpha = alpha0 on |x| < eps.
class DelayKernel {
 public:
  using Profile = std::function<double(double)>;

  /// alpha0 on the plateau, then a linear ramp in |x| clamped to [1/r, alpha2].
  static DelayKernel plateau_ramp(double r, double alpha0, double alpha2, double eps, double slope);
  /// alpha = alpha0 everywhere; requires alpha0 >= 1/r.
  static DelayKernel constant(double r, double alpha0);
  /// Arbitrary profile. A non-positive lipschitz means "estimate by a grid scan".
  static DelayKernel custom(Profile alpha, double r, double alpha2,
                            std::optional<double> alpha0 = std::nullopt, double eps = 0.0,
                            double lipschitz = -1.0);

  double operator()(double x) const { return alpha_(x); }

  double r() const noexcept { return r_; }
  double alpha1() const noexcept { return 1.0 / r_; }
  double alpha2() const noexcept { return alpha2_; }
  std::optional<double> alpha0() const noexcept { return alpha0_; }
  double eps_plateau() const noexcept { return eps_; }
  double lipschitz() const noexcept { return lipschitz_; }
  const KernelDescription& description() const noexcept { return description_; }

  /// tau(0) = 1/alpha0; requires a plateau value.
  double tau0() const;

  /// Spot-checks the bounds and the plateau on a grid over [-range, range].
  /// Returns human-readable violations, empty when the kernel is admissible.
  std::vector<std::string> validate(double range, std::size_t samples = 2001) const;

 private:
  DelayKernel() = default;

  Profile alpha_;
  double r_ = 1.0;
  double alpha2_ = 1.0;
  std::optional<double> alpha0_;
  double eps_ = 0.0;
  double lipschitz_ = 0.0;
  KernelDescription description_;
};

/// Left-hand side of the threshold condition as a function of tau in [0, r_seg].
double kernel_integral(const Segment& phi, const DelayKernel& kernel, double tau);

/// tail[k] = integral of alpha(phi) over [s_k, 0] for every grid node s_k.
std::vector<double> tail_kernel_integrals(const Segment& phi, const DelayKernel& kernel);

/// Unique tau in [1/alpha2, r] solving the threshold condition.
/// Throws BracketFailure when the kernel leaves its declared bounds on phi.
double solve_threshold_delay(const Segment& phi, const DelayKernel& kernel);

/// A priori bound on |tau(phi) - tau(psi)| / ||phi - psi||, i.e. r^2 Lip(alpha).
double delay_lipschitz_bound(const DelayKernel& kernel) noexcept;

}  // namespace dlmorse
