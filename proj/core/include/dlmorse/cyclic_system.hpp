#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlmorse/lyapunov.hpp"

namespace dlmorse {

/// Serializable description of a named nonlinearity family.
struct NonlinearityPreset {
  std::string family;
  std::map<std::string, double> params;

  friend bool operator==(const NonlinearityPreset&, const NonlinearityPreset&) = default;
};

/// A scalar map f(u, v) with optional derivatives at the origin.
///
/// Families:
///   linear         f = a u + b v
///   tanh-feedback  f = a u + b tanh(c v)
///   mackey-glass   f = a u + b v / (1 + |v|^p)
class Nonlinearity {
 public:
  using Fn = std::function<double(double, double)>;

  static Nonlinearity linear(double a, double b);
  static Nonlinearity tanh_feedback(double a, double b, double c);
  static Nonlinearity mackey_glass(double a, double b, double p);
  static Nonlinearity from_preset(const NonlinearityPreset& preset);
  static Nonlinearity custom(Fn f, std::optional<double> d1 = std::nullopt,
                             std::optional<double> d2 = std::nullopt);

  double operator()(double u, double v) const { return f_(u, v); }

  std::optional<double> d1_at_origin() const noexcept { return d1_; }
  std::optional<double> d2_at_origin() const noexcept { return d2_; }
  const std::optional<NonlinearityPreset>& preset() const noexcept { return preset_; }

 private:
  Fn f_;
  std::optional<double> d1_;
  std::optional<double> d2_;
  std::optional<NonlinearityPreset> preset_;
};

/// The cyclic system
///   x^i' = f^i(x^i, x^{i+1}),  i < N,
///   x^N' = f^N(x^N, x^0(t - tau(x_t)))
/// with feedback sign delta and dissipativity bound M.
class CyclicSystemSpec {
 public:
  static CyclicSystemSpec make(std::vector<Nonlinearity> components, Feedback delta, double M);

  std::size_t n_components() const noexcept { return f_.size() - 1; }
  const Nonlinearity& component(std::size_t i) const { return f_.at(i); }
  const std::vector<Nonlinearity>& components() const noexcept { return f_; }
  Feedback delta() const noexcept { return delta_; }
  double dissipativity_bound() const noexcept { return M_; }
  /// max |f^i| over [-M, M]^2, from a grid scan.
  double lipschitz_bound() const noexcept { return L0_; }

  /// Sampled checks of the sign conditions, dissipativity and L0.
  std::vector<std::string> validate() const;

 private:
  std::vector<Nonlinearity> f_;
  Feedback delta_ = Feedback::Negative;
  double M_ = 1.0;
  double L0_ = 0.0;
};

/// Sampled sign check v f(0, v) * sign > 0 on a symmetric grid in [-range, range].
bool satisfies_feedback(const Nonlinearity& f, int sign, double range);

}  // namespace dlmorse
