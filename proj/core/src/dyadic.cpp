#include "marcink/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace marcink::dyadic {

namespace {

constexpr double kSuppLo = 0.625;          // 5/8
constexpr double kSuppHi = 1.6;            // 8/5
const double kFlatLo = 1.0 / std::sqrt(2.0);
const double kFlatHi = std::sqrt(2.0);

// exp(-c/u) for u > 0, 0 otherwise.
double sigma(double u, double c) {
  if (u <= 0.0) return 0.0;
  return std::exp(-c / u);
}

double sigma_deriv(double u, double c) {
  if (u <= 0.0) return 0.0;
  const double e = std::exp(-c / u);
  return c / (u * u) * e;
}

}  // namespace

double smooth_step(double u, double sharpness) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = sigma(u, sharpness);
  const double b = sigma(1.0 - u, sharpness);
  return a / (a + b);
}

double smooth_step_deriv(double u, double sharpness) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = sigma(u, sharpness);
  const double b = sigma(1.0 - u, sharpness);
  const double da = sigma_deriv(u, sharpness);
  const double db = -sigma_deriv(1.0 - u, sharpness);
  const double denom = (a + b) * (a + b);
  return (da * b - a * db) / denom;
}

double BumpProfile::beta_sq_raw(double s) const {
  const double a = std::fabs(s);
  if (a <= kSuppLo || a >= kSuppHi) return 0.0;
  const double rise = smooth_step((a - kSuppLo) / (kFlatLo - kSuppLo),
                                  transition_sharpness);
  const double fall = smooth_step((kSuppHi - a) / (kSuppHi - kFlatHi),
                                  transition_sharpness);
  return rise * fall;
}

namespace {

// d/da of the raw profile at a = |s| > 0.
double beta_sq_raw_deriv_abs(const BumpProfile& bp, double a) {
  if (a <= kSuppLo || a >= kSuppHi) return 0.0;
  const double c = bp.transition_sharpness;
  const double u1 = (a - kSuppLo) / (kFlatLo - kSuppLo);
  const double u2 = (kSuppHi - a) / (kSuppHi - kFlatHi);
  const double rise = smooth_step(u1, c);
  const double fall = smooth_step(u2, c);
  const double drise = smooth_step_deriv(u1, c) / (kFlatLo - kSuppLo);
  const double dfall = -smooth_step_deriv(u2, c) / (kSuppHi - kFlatHi);
  return drise * fall + rise * dfall;
}

// Dyadic dilates of the raw profile that can be nonzero at |s|: the
// candidate exponents are recovered from the binary exponent of |s|, and
// scaling by 2^k uses ldexp so the sum is bitwise dilation invariant.
template <typename Term>
void for_each_dilate(double a, Term&& term) {
  // beta_sq_raw(2^k a) != 0 requires 2^k a in (5/8, 8/5); with
  // a = m 2^e, m in [1,2), that pins k to a two-element range around -e.
  const int e = std::ilogb(a);
  for (int k = -e - 2; k <= -e + 1; ++k) {
    const double scaled = std::ldexp(a, k);
    if (scaled > kSuppLo && scaled < kSuppHi) term(k, scaled);
  }
}

}  // namespace

double BumpProfile::dilate_sum(double s) const {
  const double a = std::fabs(s);
  if (a == 0.0 || !std::isfinite(a)) return 0.0;
  double sum = 0.0;
  for_each_dilate(a, [&](int, double scaled) { sum += beta_sq_raw(scaled); });
  return sum;
}

double BumpProfile::beta_sq(double s) const {
  const double raw = beta_sq_raw(s);
  if (raw == 0.0) return 0.0;
  return raw / dilate_sum(s);
}

double BumpProfile::beta(double s) const { return std::sqrt(beta_sq(s)); }

double BumpProfile::beta_sq_deriv(double s) const {
  const double a = std::fabs(s);
  if (a <= kSuppLo || a >= kSuppHi) return 0.0;
  const double raw = beta_sq_raw(a);
  const double draw = beta_sq_raw_deriv_abs(*this, a);
  double sum = 0.0, dsum = 0.0;
  for_each_dilate(a, [&](int k, double scaled) {
    sum += beta_sq_raw(scaled);
    dsum += std::ldexp(beta_sq_raw_deriv_abs(*this, scaled), k);
  });
  const double d_abs = (draw * sum - raw * dsum) / (sum * sum);
  return s >= 0.0 ? d_abs : -d_abs;
}

double BumpProfile::beta_deriv(double s) const {
  const double b = beta(s);
  if (b <= 0.0) return 0.0;
  return beta_sq_deriv(s) / (2.0 * b);
}

const BumpProfile& default_bump() {
  static const BumpProfile bp{1.0};
  return bp;
}

double eval_beta(double s) { return default_bump().beta(s); }
double eval_beta_sq(double s) { return default_bump().beta_sq(s); }
double eval_beta_deriv(double s) { return default_bump().beta_deriv(s); }

double eval_psi(int r, double s) {
  if (r < 0) throw std::invalid_argument("eval_psi: r must be >= 0");
  if (r >= 1) return eval_beta_sq(std::ldexp(s, -r));
  // psi_0 = 1 - sum_{r>=1} beta^2(2^{-r} s); the sum has at most two
  // nonzero terms located via the binary exponent of |s|.
  const double a = std::fabs(s);
  if (a <= 1.25) return 1.0;  // all dilated terms vanish for |s| <= 5/4
  double tail = 0.0;
  const int e = std::ilogb(a);
  for (int rr = e - 1; rr <= e + 2; ++rr) {
    if (rr < 1) continue;
    tail += eval_beta_sq(std::ldexp(a, -rr));
  }
  // guard against -eps when the tail rounds to slightly above 1
  return std::max(0.0, 1.0 - tail);
}

double eval_psi_n(std::span<const int> n, std::span<const double> xi) {
  if (n.size() != xi.size())
    throw std::invalid_argument("eval_psi_n: size mismatch");
  double prod = 1.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    prod *= eval_psi(n[i], xi[i]);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

namespace {

const double kLogRatioOuter = std::log(4.0);        // support edge
const double kLogRatioInner = std::log(64.0 / 25.0);  // flat region edge

}  // namespace

double eval_gamma_ratio(double ratio) {
  const double a = std::fabs(ratio);
  if (a <= 0.25 || a >= 4.0) return 0.0;
  const double u = std::log(a);
  // Even in log|ratio|: rises over [-log 4, -log(64/25)], falls mirrored.
  const double width = kLogRatioOuter - kLogRatioInner;
  const double rise = smooth_step((u + kLogRatioOuter) / width);
  const double fall = smooth_step((kLogRatioOuter - u) / width);
  return rise * fall;
}

double eval_gamma_ratio_deriv(double ratio) {
  const double a = std::fabs(ratio);
  if (a <= 0.25 || a >= 4.0) return 0.0;
  const double u = std::log(a);
  const double width = kLogRatioOuter - kLogRatioInner;
  const double rise = smooth_step((u + kLogRatioOuter) / width);
  const double fall = smooth_step((kLogRatioOuter - u) / width);
  const double drise = smooth_step_deriv((u + kLogRatioOuter) / width) / width;
  const double dfall = -smooth_step_deriv((kLogRatioOuter - u) / width) / width;
  const double d_log = drise * fall + rise * dfall;
  // d/d(ratio) = d/du * du/d(ratio); du/d(ratio) = 1/ratio (odd extension).
  return d_log / ratio;
}

double eval_gamma(double xi1, double xi2) {
  if (xi2 == 0.0)
    throw std::invalid_argument("eval_gamma: xi2 must be nonzero");
  return eval_gamma_ratio(xi1 / xi2);
}

std::pair<double, double> DyadicInterval::positive() const {
  return {std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k)};
}

std::pair<double, double> DyadicInterval::negative() const {
  return {-std::ldexp(1.0, -k), -std::ldexp(1.0, -k - 1)};
}

std::pair<std::pair<double, double>, std::pair<double, double>>
interval_bounds(int k) {
  DyadicInterval iv{k};
  return {iv.positive(), iv.negative()};
}

}  // namespace marcink::dyadic
