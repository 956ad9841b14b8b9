#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's sign counting, root counting or delay solving.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace dlmorse::oracle {

/// Largest k such that some index subsequence i_0 < ... < i_k has
/// consecutive products strictly negative; entries with |x| <= zeta count as zero.
/// Exhaustive over all 2^n subsets.
int brute_force_sign_changes(std::span<const double> seq, double zeta = 0.0);

/// Plain bisection for an increasing function on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14);

/// Roots of prod(lambda - mu) - exp(-lambda tau0) prod(gamma) found by
/// Newton from a dense seed grid over [-B, B]^2, merged within 1e-6.
std::vector<std::complex<double>> newton_root_scan(std::span<const double> mu, std::span<const double> gamma,
                                                   double tau0, double box, int per_axis = 60);

/// Number of scanned roots with real part above `threshold`.
int count_right_half(const std::vector<std::complex<double>>& roots, double threshold = 1e-6);

/// x' = gamma x(t - tau0): unstable root pairs appear each time |gamma| tau0
/// crosses pi/2 + 2 pi k (gamma < 0).
int scalar_crossing_count(double gamma, double tau0);

}  // namespace dlmorse::oracle
