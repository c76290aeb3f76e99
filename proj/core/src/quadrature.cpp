#include "marcink/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace marcink::quadrature {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on Legendre roots, symmetric pairs.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = w * half;
    rule.weights[n - 1 - i] = w * half;
  }
  return rule;
}

Rule segmented_gauss(int budget, std::span<const double> breakpoints) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("segmented_gauss: need >= 2 breakpoints");
  const std::size_t segs = breakpoints.size() - 1;
  std::vector<double> logw(segs);
  double total = 0.0;
  for (std::size_t i = 0; i < segs; ++i) {
    if (!(breakpoints[i] > 0.0 && breakpoints[i + 1] > breakpoints[i]))
      throw std::invalid_argument(
          "segmented_gauss: breakpoints must be positive increasing");
    logw[i] = std::log(breakpoints[i + 1] / breakpoints[i]);
    total += logw[i];
  }
  Rule out;
  for (std::size_t i = 0; i < segs; ++i) {
    int m = static_cast<int>(std::lround(budget * logw[i] / total));
    m = std::max(m, 4);
    Rule seg = gauss_legendre(m, breakpoints[i], breakpoints[i + 1]);
    out.nodes.insert(out.nodes.end(), seg.nodes.begin(), seg.nodes.end());
    out.weights.insert(out.weights.end(), seg.weights.begin(),
                       seg.weights.end());
  }
  return out;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double fm, double whole, double tol,
                int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, flm);
  const double right = simpson(f, m, fm, b, fb, frm);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) < 15.0 * tol)
    return left + right + diff / 15.0;
  return adaptive(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, fm, whole, tol, 48);
}

}  // namespace marcink::quadrature
