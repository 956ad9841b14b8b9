#include "dlmorse/lyapunov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dlmorse/error.hpp"
#include "dlmorse/hermite.hpp"

namespace dlmorse {

namespace {

void require_window(const Segment& phi, double a) {
  if (!(a >= -phi.r() * (1.0 + 1e-12)) || !(a < 0.0)) {
    fail(ErrorCode::OutOfDomain, "window start a = " + std::to_string(a) + " outside [-r, 0)");
  }
}

// Visits the window sequence phi(a), in-cell extrema, nodes in (a, 0].
template <class Visit>
void walk_window(const Segment& phi, double a, Visit&& visit) {
  const auto v = phi.values();
  const auto d = phi.slopes();
  const double h = phi.step();
  double ua = 0.0;
  const std::size_t first = phi.locate(std::max(a, -phi.r()), ua);
  visit(phi.eval(std::max(a, -phi.r())));
  std::array<double, 2> crit{};
  for (std::size_t k = first; k + 1 < phi.size(); ++k) {
    const double from = k == first ? ua : 0.0;
    const std::size_t nc = hermite::critical_points(v[k], d[k], v[k + 1], d[k + 1], h, crit);
    for (std::size_t c = 0; c < nc; ++c) {
      if (crit[c] > from) visit(hermite::value(v[k], d[k], v[k + 1], d[k + 1], h, crit[c]));
    }
    if (!(k == first && ua >= 1.0)) visit(v[k + 1]);
  }
}

}  // namespace

Feedback feedback_from_int(int delta) {
  if (delta == 1) return Feedback::Positive;
  if (delta == -1) return Feedback::Negative;
  fail(ErrorCode::InvalidArgument, "feedback sign must be +1 or -1");
}

std::string to_string(ParityBranch b) { return b == ParityBranch::Plus ? "V+" : "V-"; }

int apply_parity(int sc, ParityBranch branch) noexcept {
  const bool even = sc % 2 == 0;
  if (branch == ParityBranch::Plus) return even ? sc : sc + 1;
  return even ? sc + 1 : sc;
}

double zero_tolerance(const Segment& phi) noexcept { return 1e-9 * std::max(1.0, phi.sup_norm()); }

namespace {

SignCounter window_counter(const Segment& phi, double a, double zeta) {
  require_window(phi, a);
  SignCounter counter(zeta < 0 ? zero_tolerance(phi) : zeta);
  walk_window(phi, a, [&](double x) { counter.push(x); });
  for (double x : phi.discrete()) counter.push(x);
  return counter;
}

}  // namespace

int count_sign_changes(const Segment& phi, double a, double zeta) {
  return window_counter(phi, a, zeta).count();
}

std::pair<int, int> v_signed(const Segment& phi, double a) {
  if (phi.near_origin()) fail(ErrorCode::UndefinedOnOrigin, "V is undefined on the origin");
  const SignCounter c = window_counter(phi, a, -1.0);
  if (!c.saw_sign()) fail(ErrorCode::Indeterminate, "every sample in the window is a numerical zero");
  return {apply_parity(c.count(), ParityBranch::Plus), apply_parity(c.count(), ParityBranch::Minus)};
}

LyapunovValue lyapunov_value(const Segment& phi, const DelayKernel& kernel, Feedback delta) {
  if (phi.near_origin()) fail(ErrorCode::UndefinedOnOrigin, "V is undefined on the origin");
  LyapunovValue out;
  out.a = -solve_threshold_delay(phi, kernel);
  if (out.a >= 0.0) fail(ErrorCode::OutOfDomain, "delay collapsed to zero");
  const SignCounter c = window_counter(phi, out.a, -1.0);
  if (!c.saw_sign()) fail(ErrorCode::Indeterminate, "every sample in the window is a numerical zero");
  out.sc = c.count();
  out.branch = branch_for(delta);
  out.value = apply_parity(out.sc, out.branch);
  return out;
}

std::string RegularitySet::name() const {
  switch (kind) {
    case Kind::S0: return "S^0";
    case Kind::Sa: return "S_a";
    case Kind::SStar: return "S*_a";
    case Kind::SN: return "S^N_a";
    case Kind::Si: return "S^" + std::to_string(index);
  }
  return "?";
}

namespace {

// Tracks the deciding quantities of the regularity conditionals.
struct Decider {
  double zeta;
  RegularityVerdict verdict;

  explicit Decider(double z) : zeta(z) { verdict.margin = std::numeric_limits<double>::infinity(); }

  void note(double q) { verdict.margin = std::min(verdict.margin, std::abs(q)); }

  void failed(RegularitySet s) {
    verdict.in_R = false;
    if (std::find(verdict.failed_sets.begin(), verdict.failed_sets.end(), s) == verdict.failed_sets.end()) {
      verdict.failed_sets.push_back(s);
    }
  }

  // "if hyp = 0 then lhs * rhs has sign `want`", factors decide the product.
  void conditional(RegularitySet set, double hyp, double lhs, double rhs, int want, double hyp_weight = 1.0) {
    if (std::abs(hyp) > zeta) {
      note(std::abs(hyp) / hyp_weight);
      return;
    }
    const double prod = lhs * rhs;
    const bool ok = want > 0 ? prod > zeta : prod < -zeta;
    if (!ok) failed(set);
    note(lhs);
    note(rhs);
  }
};

// Min over [from, 0] of max(|phi|, |phi'|); flags zeros with vanishing slope.
void scan_star(const Segment& phi, double from, Decider& dec) {
  const auto v = phi.values();
  const auto d = phi.slopes();
  const double h = phi.step();
  constexpr int kSub = 8;
  double ua = 0.0;
  const std::size_t first = phi.locate(from, ua);
  const RegularitySet star{RegularitySet::Kind::SStar};

  auto check_point = [&](double y, double dy) {
    if (std::abs(y) <= dec.zeta && std::abs(dy) <= dec.zeta) dec.failed(star);
    dec.note(std::max(std::abs(y), std::abs(dy)));
  };

  std::array<double, 2> crit{};
  for (std::size_t k = first; k + 1 < phi.size(); ++k) {
    auto val = [&](double u) { return hermite::value(v[k], d[k], v[k + 1], d[k + 1], h, u); };
    auto der = [&](double u) { return hermite::derivative(v[k], d[k], v[k + 1], d[k + 1], h, u); };
    std::vector<double> us;
    const double u0 = k == first ? ua : 0.0;
    for (int j = 0; j <= kSub; ++j) us.push_back(u0 + (1.0 - u0) * j / kSub);
    const std::size_t nc = hermite::critical_points(v[k], d[k], v[k + 1], d[k + 1], h, crit);
    for (std::size_t c = 0; c < nc; ++c) {
      if (crit[c] > u0) us.push_back(crit[c]);
    }
    std::sort(us.begin(), us.end());
    for (std::size_t j = 0; j < us.size(); ++j) {
      check_point(val(us[j]), der(us[j]));
      if (j + 1 < us.size()) {
        double lo = us[j], hi = us[j + 1];
        double flo = val(lo);
        if (flo * val(hi) < 0.0) {
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = val(mid);
            if ((fm < 0) == (flo < 0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          const double z = 0.5 * (lo + hi);
          check_point(0.0, der(z));
        }
      }
    }
  }
}

}  // namespace

RegularityVerdict regularity_membership(const Segment& phi, double a, Feedback delta,
                                        double endpoint_lipschitz) {
  require_window(phi, a);
  a = std::max(a, -phi.r());
  const double zeta = zero_tolerance(phi);
  const int dl = to_int(delta);
  const std::size_t N = phi.n_components();
  Decider dec(zeta);

  const double phi_a = phi.eval(a);
  const double dphi_a = phi.slope_at(a);
  const double phi_0 = phi.values().back();
  const double dphi_0 = phi.slopes().back();
  const double phi_N = phi.last_coordinate();
  using K = RegularitySet::Kind;

  // Sensitivity of phi(a) to the window start moving with the perturbation.
  const double endpoint_weight = 1.0 + endpoint_lipschitz * phi.max_abs_slope();

  // S_a: if phi(a) = 0 then delta * phi(N) * phi'(a) < 0.
  dec.conditional({K::Sa}, phi_a, dl * phi_N, dphi_a, -1, endpoint_weight);

  // S^0: if phi(0) = 0 then phi'(0) * phi(1) > 0, phi(1) -> phi(a) when N = 0.
  dec.conditional({K::S0}, phi_0, dphi_0, N == 0 ? phi_a : phi.coordinate(1), +1);

  if (N >= 1) {
    // S^i, 1 <= i <= N-1: if phi(i) = 0 then phi(i-1) * phi(i+1) < 0.
    for (std::size_t i = 1; i + 1 <= N; ++i) {
      const double prev = i == 1 ? phi_0 : phi.coordinate(i - 1);
      dec.conditional({K::Si, i}, phi.coordinate(i), prev, phi.coordinate(i + 1), -1);
    }
    // S^N_a: if phi(N) = 0 then delta * phi(N-1) * phi(a) < 0.
    const double prev = N == 1 ? phi_0 : phi.coordinate(N - 1);
    dec.conditional({K::SN}, phi_N, dl * prev, phi_a, -1);
  }

  // S*_a over the window, widened by how far a may travel.
  const double travel = endpoint_lipschitz * (std::abs(phi_a) > zeta ? std::abs(phi_a) : phi.sup_norm()) / 2;
  scan_star(phi, std::max(-phi.r(), a - travel), dec);

  if (!std::isfinite(dec.verdict.margin)) dec.verdict.margin = 0.0;
  return dec.verdict;
}

RegularityVerdict regularity_at_delay(const Segment& phi, const DelayKernel& kernel, Feedback delta) {
  const double a = -solve_threshold_delay(phi, kernel);
  return regularity_membership(phi, a, delta, delay_lipschitz_bound(kernel));
}

}  // namespace dlmorse
