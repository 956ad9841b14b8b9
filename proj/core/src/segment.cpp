#include "dlmorse/segment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dlmorse/error.hpp"
#include "dlmorse/hermite.hpp"

namespace dlmorse {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k])) {
      fail(ErrorCode::NonFinite,
           std::string("non-finite ") + what + " sample at index " + std::to_string(k));
    }
  }
}

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

void require_matching(const Segment& a, const Segment& b) {
  if (a.size() != b.size() || a.n_components() != b.n_components() || a.r() != b.r()) {
    fail(ErrorCode::InvalidArgument, "segments live on different grids");
  }
}

}  // namespace

Segment Segment::make(std::vector<double> values, std::vector<double> slopes,
                      std::vector<double> discrete, double r, std::size_t n_components) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "history length r must be positive");
  if (values.size() < 2) fail(ErrorCode::InvalidArgument, "a segment needs at least two history nodes");
  if (values.size() != slopes.size()) {
    fail(ErrorCode::InvalidArgument, "history values and slopes differ in length");
  }
  if (discrete.size() != n_components) {
    fail(ErrorCode::InvalidArgument, "discrete coordinate count does not match N");
  }
  require_finite(values, "history value");
  require_finite(slopes, "history slope");
  require_finite(discrete, "discrete coordinate");

  Segment seg;
  seg.values_ = std::move(values);
  seg.slopes_ = std::move(slopes);
  seg.discrete_ = std::move(discrete);
  seg.r_ = r;
  seg.h_ = r / static_cast<double>(seg.values_.size() - 1);
  return seg;
}

Segment Segment::make(std::vector<double> values, std::vector<double> slopes,
                      std::vector<double> discrete, double r) {
  const std::size_t n = discrete.size();
  return make(std::move(values), std::move(slopes), std::move(discrete), r, n);
}

double Segment::time(std::size_t k) const noexcept {
  if (k + 1 >= values_.size()) return 0.0;
  return -r_ + static_cast<double>(k) * h_;
}

std::size_t Segment::locate(double s, double& u) const noexcept {
  const std::size_t cells = values_.size() - 1;
  double pos = (s + r_) / h_;
  if (pos <= 0.0) {
    u = 0.0;
    return 0;
  }
  if (pos >= static_cast<double>(cells)) {
    u = 1.0;
    return cells - 1;
  }
  auto k = static_cast<std::size_t>(pos);
  if (k >= cells) k = cells - 1;
  u = pos - static_cast<double>(k);
  return k;
}

double Segment::eval(double s) const {
  if (s > 0.0) {
    const double idx = std::round(s);
    if (idx != s || idx < 1.0 || idx > static_cast<double>(discrete_.size())) {
      fail(ErrorCode::OutOfDomain, "evaluation point " + std::to_string(s) + " is not in K");
    }
    return discrete_[static_cast<std::size_t>(idx) - 1];
  }
  if (s < -r_ * (1.0 + 1e-12) || !std::isfinite(s)) {
    fail(ErrorCode::OutOfDomain, "evaluation point " + std::to_string(s) + " is before -r");
  }
  double u = 0.0;
  const std::size_t k = locate(s, u);
  if (u == 0.0) return values_[k];
  if (u == 1.0) return values_[k + 1];
  return hermite::value(values_[k], slopes_[k], values_[k + 1], slopes_[k + 1], h_, u);
}

double Segment::slope_at(double s) const {
  if (s > 0.0 || s < -r_ * (1.0 + 1e-12) || !std::isfinite(s)) {
    fail(ErrorCode::OutOfDomain, "slope requested outside [-r, 0]");
  }
  double u = 0.0;
  const std::size_t k = locate(s, u);
  if (u == 0.0) return slopes_[k];
  if (u == 1.0) return slopes_[k + 1];
  return hermite::derivative(values_[k], slopes_[k], values_[k + 1], slopes_[k + 1], h_, u);
}

double Segment::coordinate(std::size_t i) const {
  if (i < 1 || i > discrete_.size()) fail(ErrorCode::OutOfDomain, "discrete coordinate index out of range");
  return discrete_[i - 1];
}

double Segment::last_coordinate() const noexcept {
  return discrete_.empty() ? values_.back() : discrete_.back();
}

Norms Segment::norms() const noexcept {
  Norms n;
  n.sup = std::max(max_abs(values_), max_abs(discrete_));
  n.c1 = n.sup + max_abs(slopes_);
  return n;
}

double Segment::max_abs_slope() const noexcept { return max_abs(slopes_); }

bool Segment::in_phase_space(double M, double L0, double tol) const noexcept {
  return sup_norm() < M && max_abs_slope() <= L0 * (1.0 + tol) + tol;
}

Segment constant_segment(double c, double r, std::size_t n_components, std::size_t nodes) {
  return Segment::make(std::vector<double>(nodes, c), std::vector<double>(nodes, 0.0),
                       std::vector<double>(n_components, c), r, n_components);
}

double sup_distance(const Segment& a, const Segment& b) {
  require_matching(a, b);
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.values()[k] - b.values()[k]));
  for (std::size_t k = 0; k < a.n_components(); ++k) {
    d = std::max(d, std::abs(a.discrete()[k] - b.discrete()[k]));
  }
  return d;
}

double c1_distance(const Segment& a, const Segment& b) {
  double d = sup_distance(a, b);
  double ds = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) ds = std::max(ds, std::abs(a.slopes()[k] - b.slopes()[k]));
  return d + ds;
}

}  // namespace dlmorse
