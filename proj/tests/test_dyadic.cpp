#include "marcink/dyadic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace marcink::dyadic;

namespace {

// Every dyadic dilate of beta^2 that can be nonzero at s.
double dilate_partition_sum(double s) {
  const int e = std::ilogb(std::fabs(s));
  double sum = 0.0;
  for (int k = -e - 3; k <= -e + 2; ++k)
    sum += eval_beta_sq(std::ldexp(s, k));
  return sum;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

TEST_CASE("beta support, range and evenness") {
  CHECK(eval_beta(0.5) == 0.0);
  CHECK(eval_beta(0.625) == 0.0);
  CHECK(eval_beta(1.6) == 0.0);
  CHECK(eval_beta(1.0) > 0.0);
  CHECK(eval_beta(-1.2) == eval_beta(1.2));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double s = log_uniform(rng, 1e-3, 1e3);
    const double b = eval_beta(s);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    if (s <= 0.625 || s >= 1.6) CHECK(b == 0.0);
    if (s > 1.0 / std::sqrt(2.0) && s < std::sqrt(2.0)) CHECK(b > 0.0);
    CHECK(eval_beta(-s) == b);
  }
}

TEST_CASE("dyadic partition of unity for beta^2") {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double s = log_uniform(rng, 1e-6, 1e6);
    worst = std::max(worst, std::fabs(dilate_partition_sum(s) - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("inhomogeneous partition psi") {
  CHECK(eval_psi(0, 0.0) == 1.0);
  CHECK(eval_psi(1, 2.0) == doctest::Approx(eval_beta_sq(1.0)).epsilon(1e-15));
  CHECK(eval_psi(0, 1.0) == 1.0);

  std::mt19937_64 rng(13);
  const int R = 40;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double s = log_uniform(rng, 1e-4, std::ldexp(1.0, R - 1));
    if (i % 2) s = -s;
    double sum = 0.0;
    for (int r = 0; r <= R; ++r) sum += eval_psi(r, s);
    worst = std::max(worst, std::fabs(sum - 1.0));
    CHECK(eval_psi(0, s) >= 0.0);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("psi_n tensor product") {
  {
    const int n[] = {0, 0};
    const double xi[] = {0.0, 0.0};
    CHECK(eval_psi_n(n, xi) == 1.0);
  }
  {
    const int n[] = {1, 0};
    const double xi[] = {2.0, 0.0};
    CHECK(eval_psi_n(n, xi) ==
          doctest::Approx(eval_beta_sq(1.0)).epsilon(1e-15));
  }
  // finite partition of unity over multi-indices
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    const double xi[] = {u(rng), u(rng)};
    double sum = 0.0;
    for (int r0 = 0; r0 <= 10; ++r0)
      for (int r1 = 0; r1 <= 10; ++r1) {
        const int n[] = {r0, r1};
        sum += eval_psi_n(n, xi);
      }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gamma cone cutoff") {
  CHECK(eval_gamma(1.0, 1.0) == 1.0);
  CHECK(eval_gamma(5.0, 1.0) == 0.0);
  CHECK(eval_gamma(1.0, 4.0) == 0.0);
  CHECK(eval_gamma_ratio(25.0 / 64.0) == 1.0);
  CHECK(eval_gamma_ratio(64.0 / 25.0) == 1.0);
  CHECK(eval_gamma_ratio(-1.0) == 1.0);
  CHECK_THROWS_AS(eval_gamma(1.0, 0.0), std::invalid_argument);

  // scale invariance is exact: only the ratio enters
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng), t = u(rng);
    CHECK(eval_gamma(t * x, t * y) == eval_gamma_ratio((t * x) / (t * y)));
    CHECK(eval_gamma(2.0 * x, 2.0 * x) == eval_gamma(1.0, 1.0));
  }
  for (int i = 0; i < 2000; ++i) {
    const double r = log_uniform(rng, 1e-2, 1e2);
    const double g = eval_gamma_ratio(r);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    if (r <= 0.25 || r >= 4.0) CHECK(g == 0.0);
    if (r >= 25.0 / 64.0 && r <= 64.0 / 25.0) CHECK(g == 1.0);
  }
}

TEST_CASE("interval bounds") {
  const auto [pos0, neg0] = interval_bounds(0);
  CHECK(pos0.first == 0.5);
  CHECK(pos0.second == 1.0);
  CHECK(neg0.first == -1.0);
  CHECK(neg0.second == -0.5);

  const auto [posm1, negm1] = interval_bounds(-1);
  CHECK(posm1.first == 1.0);
  CHECK(posm1.second == 2.0);
  CHECK(negm1.first == -2.0);
  CHECK(negm1.second == -1.0);

  for (int k = -10; k <= 10; ++k) {
    const auto [pk, nk] = interval_bounds(k);
    const auto [pk1, nk1] = interval_bounds(k + 1);
    CHECK(pk1.second == pk.first);  // consecutive intervals share endpoints
    CHECK(nk1.first == nk.second);
  }
}

TEST_CASE("symbolic derivatives match finite differences") {
  const auto& bp = default_bump();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.6, 1.7);
  const double eps = 1e-6;
  for (int i = 0; i < 300; ++i) {
    const double s = u(rng);
    const double fd = (bp.beta_sq(s + eps) - bp.beta_sq(s - eps)) / (2 * eps);
    CHECK(bp.beta_sq_deriv(s) == doctest::Approx(fd).epsilon(1e-5));
    if (bp.beta(s) > 1e-6) {
      const double fdb = (bp.beta(s + eps) - bp.beta(s - eps)) / (2 * eps);
      CHECK(bp.beta_deriv(s) == doctest::Approx(fdb).epsilon(1e-5));
    }
  }
  std::uniform_real_distribution<double> ur(0.26, 3.9);
  for (int i = 0; i < 300; ++i) {
    const double r = ur(rng);
    const double fd =
        (eval_gamma_ratio(r + eps) - eval_gamma_ratio(r - eps)) / (2 * eps);
    CHECK(eval_gamma_ratio_deriv(r) ==
          doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
  // oddness of the derivative
  CHECK(eval_gamma_ratio_deriv(-0.3) == -eval_gamma_ratio_deriv(0.3));
}
