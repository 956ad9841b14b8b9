#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dlmorse/cyclic_system.hpp"
#include "dlmorse/threshold_delay.hpp"

namespace dlmorse {

using cplx = std::complex<double>;

struct Linearization {
  std::vector<double> mu;     // D1 f^i(0, 0)
  std::vector<double> gamma;  // D2 f^i(0, 0)
  double tau0 = 1.0;          // tau(0) = 1 / alpha0
};

/// Derivatives at the origin (supplied ones, else central differences with
/// step 1e-6) and tau(0) from the kernel plateau.
Linearization linearize(const CyclicSystemSpec& system, const DelayKernel& kernel);

/// prod (lambda - mu^i) - exp(-lambda tau0) prod gamma^i.
cplx char_fn(cplx lambda, std::span<const double> mu, std::span<const double> gamma, double tau0);

struct ContourInfo {
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
  double omega = 0.0;
  double tol_hyp = 1e-6;
  std::size_t samples = 0;      // evaluations on the counting rectangle
  std::size_t strip_samples = 0;
  int perturbations = 0;        // retries after passing too close to a root
};

struct RootCount {
  int m_star = 0;
  bool nonhyperbolic = false;
  ContourInfo contour;
};

struct SpectrumOptions {
  double tol_hyp = 1e-6;
  /// Initial samples per unit length of contour (before adaptive refinement).
  double density = 16.0;
  int max_depth = 48;
};

/// Roots of the characteristic function with Re > tol_hyp, by the argument
/// principle on [tol_hyp, B] x [-B, B] with B = max|mu| + (prod|gamma|)^(1/(N+1)) + 1.
/// `nonhyperbolic` reports a root in the strip |Re| <= tol_hyp.
RootCount count_unstable_roots(std::span<const double> mu, std::span<const double> gamma, double tau0,
                               const SpectrumOptions& options = {});

/// Winding number of char_fn around the rectangle [x0, x1] x [y0, y1].
int winding_number(std::span<const double> mu, std::span<const double> gamma, double tau0, double x0,
                   double x1, double y0, double y1, const SpectrumOptions& options = {},
                   std::size_t* samples = nullptr);

/// Threshold level from the unstable count and the hyperbolicity verdict.
int compute_nstar(int m_star, bool nonhyperbolic, Feedback delta) noexcept;

/// Newton-polished roots from a seed grid over [x0, x1] x [y0, y1], deduplicated.
std::vector<cplx> locate_roots(std::span<const double> mu, std::span<const double> gamma, double tau0,
                               double x0, double x1, double y0, double y1, int seeds_x = 24,
                               int seeds_y = 48);

struct SpectrumReport {
  Linearization lin;
  Feedback delta = Feedback::Negative;
  int m_star = 0;
  bool nonhyperbolic = false;
  int n_star = 0;
  double modulus_bound = 0.0;
  ContourInfo contour;
  std::vector<cplx> located_roots;  // audit trail, rightmost first
};

SpectrumReport spectrum_report(const CyclicSystemSpec& system, const DelayKernel& kernel,
                               const SpectrumOptions& options = {});

/// max|mu| + (prod|gamma|)^(1/(N+1)) + 1.
double modulus_bound(std::span<const double> mu, std::span<const double> gamma) noexcept;

}  // namespace dlmorse
