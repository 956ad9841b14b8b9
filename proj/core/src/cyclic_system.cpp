#include "dlmorse/cyclic_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlmorse/error.hpp"

namespace dlmorse {

namespace {

double param(const NonlinearityPreset& p, const std::string& key) {
  auto it = p.params.find(key);
  if (it == p.params.end()) {
    fail(ErrorCode::Config, "nonlinearity family '" + p.family + "' needs parameter '" + key + "'");
  }
  return it->second;
}

double max_abs_on_square(const Nonlinearity& f, double M) {
  constexpr int n = 201;
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -M + 2 * M * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double v = -M + 2 * M * j / (n - 1);
      m = std::max(m, std::abs(f(u, v)));
    }
  }
  return m;
}

}  // namespace

Nonlinearity Nonlinearity::linear(double a, double b) {
  Nonlinearity n;
  n.f_ = [=](double u, double v) { return a * u + b * v; };
  n.d1_ = a;
  n.d2_ = b;
  n.preset_ = NonlinearityPreset{"linear", {{"a", a}, {"b", b}}};
  return n;
}

Nonlinearity Nonlinearity::tanh_feedback(double a, double b, double c) {
  Nonlinearity n;
  n.f_ = [=](double u, double v) { return a * u + b * std::tanh(c * v); };
  n.d1_ = a;
  n.d2_ = b * c;
  n.preset_ = NonlinearityPreset{"tanh-feedback", {{"a", a}, {"b", b}, {"c", c}}};
  return n;
}

Nonlinearity Nonlinearity::mackey_glass(double a, double b, double p) {
  if (!(p > 1.0)) fail(ErrorCode::InvalidArgument, "mackey-glass exponent must exceed 1");
  Nonlinearity n;
  n.f_ = [=](double u, double v) { return a * u + b * v / (1.0 + std::pow(std::abs(v), p)); };
  n.d1_ = a;
  n.d2_ = b;
  n.preset_ = NonlinearityPreset{"mackey-glass", {{"a", a}, {"b", b}, {"p", p}}};
  return n;
}

Nonlinearity Nonlinearity::from_preset(const NonlinearityPreset& p) {
  if (p.family == "linear") return linear(param(p, "a"), param(p, "b"));
  if (p.family == "tanh-feedback") return tanh_feedback(param(p, "a"), param(p, "b"), param(p, "c"));
  if (p.family == "mackey-glass") return mackey_glass(param(p, "a"), param(p, "b"), param(p, "p"));
  fail(ErrorCode::Config, "unknown nonlinearity family '" + p.family + "'");
}

Nonlinearity Nonlinearity::custom(Fn f, std::optional<double> d1, std::optional<double> d2) {
  if (!f) fail(ErrorCode::InvalidArgument, "custom nonlinearity needs a callable");
  Nonlinearity n;
  n.f_ = std::move(f);
  n.d1_ = d1;
  n.d2_ = d2;
  return n;
}

CyclicSystemSpec CyclicSystemSpec::make(std::vector<Nonlinearity> components, Feedback delta, double M) {
  if (components.empty()) fail(ErrorCode::InvalidArgument, "a cyclic system needs at least one component");
  if (!(M > 0) || !std::isfinite(M)) fail(ErrorCode::InvalidArgument, "dissipativity bound M must be positive");
  CyclicSystemSpec s;
  s.f_ = std::move(components);
  s.delta_ = delta;
  s.M_ = M;
  for (const auto& f : s.f_) s.L0_ = std::max(s.L0_, max_abs_on_square(f, M));
  return s;
}

bool satisfies_feedback(const Nonlinearity& f, int sign, double range) {
  for (int k = 1; k <= 60; ++k) {
    const double mag = range * std::pow(10.0, -6.0 * (60 - k) / 59.0);
    for (double v : {mag, -mag}) {
      if (!(sign * v * f(0.0, v) > 0.0)) return false;
    }
  }
  return true;
}

std::vector<std::string> CyclicSystemSpec::validate() const {
  std::vector<std::string> out;
  const std::size_t N = n_components();
  for (std::size_t i = 0; i <= N; ++i) {
    const int sign = i < N ? 1 : to_int(delta_);
    if (!satisfies_feedback(f_[i], sign, M_)) {
      std::ostringstream os;
      os << "component " << i << " violates the feedback sign condition (sign " << sign << ")";
      out.push_back(os.str());
    }
    if (auto d2 = f_[i].d2_at_origin(); d2 && !(sign * *d2 > 0)) {
      std::ostringstream os;
      os << "component " << i << " has D2 f(0,0) = " << *d2 << " with the wrong sign";
      out.push_back(os.str());
    }
    bool dissipative = true;
    for (int a = 0; a <= 20 && dissipative; ++a) {
      const double u = M_ * (1.0 + a / 10.0);
      for (int b = 0; b <= 20; ++b) {
        const double v = -u + 2 * u * b / 20.0;
        if (!(f_[i](u, v) < 0.0) || !(f_[i](-u, v) > 0.0)) {
          dissipative = false;
          break;
        }
      }
    }
    if (!dissipative) {
      std::ostringstream os;
      os << "component " << i << " is not dissipative at M = " << M_;
      out.push_back(os.str());
    }
  }
  double scan = 0.0;
  for (const auto& f : f_) scan = std::max(scan, max_abs_on_square(f, M_));
  if (std::abs(scan - L0_) > 1e-12 * std::max(1.0, scan)) out.push_back("L0 inconsistent with max scan");
  return out;
}

}  // namespace dlmorse
