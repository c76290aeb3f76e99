#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace marcink::dyadic {

// Smooth transition sigma-based step: 0 for u <= 0, 1 for u >= 1, C-infinity.
// `sharpness` is the exponent scale of the exp(-c/u) transition.
double smooth_step(double u, double sharpness = 1.0);
double smooth_step_deriv(double u, double sharpness = 1.0);

// Littlewood-Paley bump beta. The raw profile is a product of two smooth
// steps (rising over [5/8, 1/sqrt(2)], falling over [sqrt(2), 8/5]); the
// square is then divided by its own dyadic-dilate sum so that
// sum_k beta^2(2^k s) = 1 holds exactly for every s != 0.
struct BumpProfile {
  double transition_sharpness = 1.0;

  double beta(double s) const;
  double beta_sq(double s) const;
  double beta_deriv(double s) const;
  double beta_sq_deriv(double s) const;

  // Unnormalized profile and its dilate sum; exposed for testing.
  double beta_sq_raw(double s) const;
  double dilate_sum(double s) const;
};

// Shared default profile (sharpness 1) used throughout the library.
const BumpProfile& default_bump();

// beta with the default profile.
double eval_beta(double s);
double eval_beta_sq(double s);
double eval_beta_deriv(double s);

// Inhomogeneous partition: psi_r = beta^2(2^{-r} .) for r >= 1,
// psi_0 = 1 - sum_{r>=1} psi_r (finite sum; equals 1 for |s| <= 5/4).
double eval_psi(int r, double s);

// Tensor piece psi_n(xi') = prod_i psi_{n_i}(xi'_i).
double eval_psi_n(std::span<const int> n, std::span<const double> xi);

// Cone cutoff as a function of the ratio xi1/xi2 (even, degree zero):
// 1 on |ratio| in [25/64, 64/25], 0 outside (1/4, 4), smooth in log|ratio|.
double eval_gamma_ratio(double ratio);
double eval_gamma_ratio_deriv(double ratio);

// gamma(xi); computed from the ratio only, so exactly scale invariant.
// Throws std::invalid_argument if xi2 == 0.
double eval_gamma(double xi1, double xi2);

// I_k = [2^{-k-1}, 2^{-k}] u [-2^{-k}, -2^{-k-1}].
struct DyadicInterval {
  int k = 0;
  std::pair<double, double> positive() const;
  std::pair<double, double> negative() const;
};

// ([2^{-k-1}, 2^{-k}], [-2^{-k}, -2^{-k-1}])
std::pair<std::pair<double, double>, std::pair<double, double>>
interval_bounds(int k);

}  // namespace marcink::dyadic
