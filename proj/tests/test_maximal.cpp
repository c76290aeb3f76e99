#include "marcink/maximal.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "marcink/fields.hpp"
#include "marcink/quadrature.hpp"

using namespace marcink;
using namespace marcink::maximal;
using fields::Grid;

namespace {

WeightField random_weight(const Grid& g, std::uint64_t seed) {
  return abs_weight(fields::random_gaussian(g, seed));
}

// Direct enumeration oracle: maximal dyadic-window average around `x` on a
// periodic line.
double line_oracle(const std::vector<double>& v, int x) {
  const int n = static_cast<int>(v.size());
  double best = v[x];
  for (int len = 2; len <= n; len <<= 1) {
    for (int start = x - len + 1; start <= x; ++start) {
      double sum = 0.0;
      for (int i = 0; i < len; ++i) sum += v[((start + i) % n + n) % n];
      best = std::max(best, sum / len);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("axis maximal function") {
  const Grid g = fields::make_grid(1, 16, 1.0);

  SUBCASE("constants are fixed points") {
    WeightField ones = make_weight(g, 1.0);
    const WeightField m = hl_maximal_axis(ones, 1);
    for (const double x : m.v) CHECK(x == 1.0);
    WeightField c = make_weight(g, 0.37);
    const WeightField mc = hl_maximal_axis(c, 1);
    for (const double x : mc.v)
      CHECK(x == doctest::Approx(0.37).epsilon(1e-12));
  }

  SUBCASE("single cell decays like the dyadic window size") {
    WeightField w = make_weight(g);
    w.v[0] = 1.0;
    const WeightField m = hl_maximal_axis(w, 1);
    std::vector<double> line(w.v.begin(), w.v.end());
    for (int j = 0; j < 16; ++j) {
      CHECK(m.v[j] == doctest::Approx(line_oracle(line, j)).epsilon(1e-13));
      // dyadic windows are within a factor two of all window lengths
      const int dist = std::min(j, 16 - j);
      CHECK(m.v[j] >= 1.0 / (2.0 * (dist + 1)));
      CHECK(m.v[j] <= 1.0);
    }
  }

  SUBCASE("matches the enumeration oracle on random lines") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      WeightField w = make_weight(g);
      for (double& x : w.v) x = u(rng);
      const WeightField m = hl_maximal_axis(w, 1);
      std::vector<double> line(w.v.begin(), w.v.end());
      for (int j = 0; j < 16; ++j)
        CHECK(m.v[j] == doctest::Approx(line_oracle(line, j)).epsilon(1e-12));
    }
  }

  SUBCASE("dominates the input and respects pointwise order") {
    const Grid g2 = fields::make_grid(2, 32, 1.0);
    const WeightField w1 = random_weight(g2, 3);
    WeightField w2 = w1;
    for (double& x : w2.v) x *= 1.7;
    const WeightField m1 = hl_maximal_axis(w1, 2);
    const WeightField m2 = hl_maximal_axis(w2, 2);
    for (std::size_t i = 0; i < w1.v.size(); ++i) {
      CHECK(m1.v[i] >= w1.v[i]);
      CHECK(m1.v[i] <= m2.v[i] * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("directional maximal function") {
  const Grid g = fields::make_grid(2, 32, 1.0);

  SUBCASE("constants are fixed points") {
    WeightField c = make_weight(g, 2.5);
    const WeightField m = directional_maximal(c, 0, 1.0);
    for (const double x : m.v) CHECK(x == doctest::Approx(2.5).epsilon(1e-12));
  }

  SUBCASE("diagonal direction reduces to the 1-d maximal of the diagonal") {
    // kappa = 0, s = 1: direction (1, -1); support one wrapped diagonal
    WeightField w = make_weight(g);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> diag(32);
    for (int i = 0; i < 32; ++i) {
      diag[i] = u(rng);
      const int j1 = ((5 - i) % 32 + 32) % 32;  // line through (0, 5)
      w.v[static_cast<std::size_t>(i) * 32 + j1] = diag[i];
    }
    const WeightField m = directional_maximal(w, 0, 1.0);
    for (int i = 0; i < 32; ++i) {
      const int j1 = ((5 - i) % 32 + 32) % 32;
      CHECK(m.v[static_cast<std::size_t>(i) * 32 + j1] ==
            doctest::Approx(line_oracle(diag, i)).epsilon(1e-12));
    }
  }

  SUBCASE("dominates the input; L2 bound is moderate") {
    const WeightField w = random_weight(g, 13);
    for (const double s : {0.125, 0.6, 1.0, 3.7, 8.0}) {
      for (const int kappa : {-2, 0, 3}) {
        const WeightField m = directional_maximal(w, kappa, s);
        for (std::size_t i = 0; i < w.v.size(); ++i) CHECK(m.v[i] >= w.v[i]);
        const double r = fields::lp_norm(to_field(m), 2.0) /
                         fields::lp_norm(to_field(w), 2.0);
        CHECK(r < 4.0);
      }
    }
    CHECK_THROWS_AS(directional_maximal(w, 0, 0.05), std::invalid_argument);
  }

  SUBCASE("L2 ratio stays stable under refinement") {
    double prev = 0.0;
    for (const int n : {32, 64, 128}) {
      const Grid gn = fields::make_grid(2, n, 1.0);
      const WeightField w = random_weight(gn, 17);
      const WeightField m = directional_maximal(w, 1, 1.3);
      const double r = fields::lp_norm(to_field(m), 2.0) /
                       fields::lp_norm(to_field(w), 2.0);
      if (prev > 0.0) CHECK(r < prev * 1.10);
      prev = r;
    }
  }
}

TEST_CASE("strong maximal function") {
  const Grid g = fields::make_grid(2, 32, 1.0);

  SUBCASE("constant fixed point and domination of single-axis maximal") {
    WeightField c = make_weight(g, 1.0);
    const WeightField m = strong_maximal(c);
    for (const double x : m.v) CHECK(x == 1.0);

    const WeightField w = random_weight(g, 19);
    const WeightField mm = strong_maximal(w);
    const WeightField m1 = hl_maximal_axis(w, 1);
    const WeightField m2 = hl_maximal_axis(w, 2);
    for (std::size_t i = 0; i < w.v.size(); ++i) {
      CHECK(mm.v[i] >= m2.v[i] * (1.0 - 1e-14));
      // M1 M2 >= M1 applied to w pointwise since M2 w >= w
      CHECK(mm.v[i] >= m1.v[i] * (1.0 - 1e-14));
    }
  }

  SUBCASE("rectangle indicator lower bound at a distant point") {
    WeightField w = make_weight(g);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 8; ++b)
        w.v[static_cast<std::size_t>(a) * 32 + b] = 1.0;
    const WeightField m = strong_maximal(w);
    const int px = 20, py = 25;
    // dyadic windows containing both the point and the rectangle span
    const double lenx = 32.0, leny = 32.0;
    const double bound = (4.0 * 8.0) / (lenx * leny);
    CHECK(m.v[static_cast<std::size_t>(px) * 32 + py] >= bound - 1e-14);
  }
}

TEST_CASE("lacunary maximal operator") {
  const Grid g = fields::make_grid(2, 32, 1.0);
  const WeightField w = random_weight(g, 23);

  SUBCASE("narrow lambda bump reduces to a single directional maximal") {
    // the digital-line pattern is locally constant in s near s = 1, so a
    // bump inside that window integrates to (quadrature mass) * M_{0,1}
    auto bump = [](double u) {
      return std::fabs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
    };
    const double width = 0.008;  // well inside the constant-pattern zone
    const LambdaFn lambda = [&](int, double s) {
      return bump((s - 1.0) / width);
    };
    const int nodes = 2048;
    const auto rule = quadrature::gauss_legendre(nodes, 0.125, 8.0);
    double mass = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      mass += rule.weights[j] * lambda(0, rule.nodes[j]);
    REQUIRE(mass > 0.0);
    const WeightField got = lacunary_maximal(w, 1.0, lambda, 0, 0, nodes);
    const WeightField want = directional_maximal(w, 0, 1.0);
    for (std::size_t i = 0; i < w.v.size(); ++i)
      CHECK(got.v[i] == doctest::Approx(mass * want.v[i]).epsilon(1e-11));
  }

  SUBCASE("discrete Holder chain holds node by node") {
    const double alpha = 1.6;
    const LambdaFn lambda = [](int kappa, double s) {
      return 1.0 / (1.0 + kappa * kappa) * std::exp(-0.1 * s);
    };
    const int nodes = 12;
    const auto rule = quadrature::gauss_legendre(nodes, 0.125, 8.0);
    double B = 0.0;
    for (int kappa = -2; kappa <= 2; ++kappa) {
      double bk = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        bk += rule.weights[j] * std::fabs(lambda(kappa, rule.nodes[j]));
      B = std::max(B, bk);
    }
    const WeightField lhs = lacunary_maximal(w, alpha, lambda, -2, 2, nodes);
    WeightField wa = w;
    for (double& x : wa.v) x = std::pow(x, alpha);
    const WeightField m1 = lacunary_maximal(wa, 1.0, lambda, -2, 2, nodes);
    const double bfac = std::pow(B, 1.0 - 1.0 / alpha);
    for (std::size_t i = 0; i < w.v.size(); ++i) {
      const double rhs = bfac * std::pow(m1.v[i], 1.0 / alpha);
      CHECK(lhs.v[i] <= rhs * (1.0 + 1e-12));
    }
  }

  SUBCASE("constant weight with unit-mass lambda returns B * constant") {
    WeightField c = make_weight(g, 3.0);
    const LambdaFn lambda = [](int, double) { return 1.0 / 7.875; };
    const int nodes = 32;
    const auto rule = quadrature::gauss_legendre(nodes, 0.125, 8.0);
    double B = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      B += rule.weights[j] / 7.875;
    const WeightField out = lacunary_maximal(c, 1.0, lambda, -1, 1, nodes);
    for (const double x : out.v)
      CHECK(x == doctest::Approx(B * 3.0).epsilon(1e-12));
  }
}

TEST_CASE("smoothing profile and projections") {
  const SmoothingProfile& prof = default_profile();

  SUBCASE("profile invariants") {
    CHECK(prof.phi_hat(0.0) == 1.0);
    CHECK(prof.phi_hat(0.051) == 0.0);
    CHECK(prof.phi_hat(-0.051) == 0.0);
    CHECK(prof.phi_hat(0.01) == prof.phi_hat(-0.01));
    CHECK(prof.phi(0.0) > 0.0);
    for (const double x : {0.0, 1.0, 7.3, 40.0, 123.4})
      CHECK(prof.phi(x) >= 0.0);
    CHECK(prof.split_rho(0.4) == 1.0);
    CHECK(prof.split_rho(1.1) == 0.0);
  }

  const Grid g = fields::make_grid(2, 64, 3.14159265358979323846);

  SUBCASE("part decomposition is additive") {
    const fields::Field f = fields::random_gaussian(g, 29);
    for (const auto& [kappa, s, l] :
         {std::tuple{0, 1.0, 0}, std::tuple{2, 0.4, -3}, std::tuple{-1, 6.0,
                                                                    2}}) {
      const fields::Field all =
          smoothed_projection(f, kappa, s, l, ProjectionPart::All);
      const fields::Field near =
          smoothed_projection(f, kappa, s, l, ProjectionPart::Near);
      const fields::Field cone =
          smoothed_projection(f, kappa, s, l, ProjectionPart::Cone);
      double worst = 0.0;
      for (std::size_t i = 0; i < all.samples.size(); ++i)
        worst = std::max(worst, std::abs(all.samples[i] - near.samples[i] -
                                         cone.samples[i]));
      CHECK(worst < 1e-12 * (1.0 + fields::lp_norm(f, 2.0)));
    }
  }

  SUBCASE("l-window is sane") {
    const auto [lo, hi] = projection_l_window(g, 0, 1.0, 12);
    CHECK(lo <= hi);
    CHECK(hi - lo < 12);
  }

  SUBCASE("domination ratios are finite and positive") {
    const WeightField w = random_weight(g, 31);
    const auto [lo, hi] = projection_l_window(g, 0, 1.0, 12);
    for (const int l : {lo, (lo + hi) / 2, hi}) {
      const double rn = near_domination_ratio(w, 0, 1.0, l);
      const double rc = cone_domination_ratio(w, 0, 1.0, l);
      CHECK(rn >= 0.0);
      CHECK(rn < 100.0);
      CHECK(rc >= 0.0);
      CHECK(rc < 100.0);
    }
  }
}

TEST_CASE("lacunary sup bound check") {
  const Grid g = fields::make_grid(2, 32, 3.14159265358979323846);
  const WeightField w = random_weight(g, 37);

  SUBCASE("zero lambda gives zero") {
    const int windows[] = {0, 1};
    const auto rep = lacunary_sup_bound_check(
        w, windows, [](int, double) { return 0.0; }, 2.0, 6, 8);
    for (const double r : rep.ratios) CHECK(r == 0.0);
  }

  SUBCASE("ratios are nondecreasing in the window and plateau-prone") {
    const int windows[] = {0, 1, 2, 4};
    const auto rep = lacunary_sup_bound_check(
        w, windows, [](int, double) { return 1.0 / 7.875; }, 2.0, 6, 8);
    REQUIRE(rep.ratios.size() == 4);
    CHECK(rep.ratios[0] > 0.0);
    for (std::size_t i = 0; i + 1 < rep.ratios.size(); ++i)
      CHECK(rep.ratios[i + 1] >= rep.ratios[i] * (1.0 - 1e-12));
  }
}
