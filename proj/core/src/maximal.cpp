#include "marcink/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "marcink/dyadic.hpp"
#include "marcink/parallel.hpp"
#include "marcink/quadrature.hpp"

namespace marcink::maximal {

using fields::Field;
using fields::Grid;
using fields::cplx;

WeightField make_weight(const Grid& g, double fill) {
  return WeightField{g, std::vector<double>(g.size(), fill)};
}

WeightField abs_weight(const Field& f) {
  WeightField w{f.grid, std::vector<double>(f.samples.size())};
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    w.v[i] = std::abs(f.samples[i]);
  return w;
}

Field to_field(const WeightField& w) {
  Field f = fields::make_field(w.grid);
  for (std::size_t i = 0; i < w.v.size(); ++i) f.samples[i] = cplx(w.v[i]);
  return f;
}

namespace {

// Periodic maximal average over dyadic window lengths on one line.
// out[x] = max over lengths L in {1,2,4,...,n} and windows of L consecutive
// cells containing x of the window average.
void line_dyadic_max_average(std::span<const double> in,
                             std::span<double> out) {
  const int n = static_cast<int>(in.size());
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (int i = 0; i < 2 * n; ++i) prefix[i + 1] = prefix[i] + in[i % n];
  for (int x = 0; x < n; ++x) out[x] = in[x];

  // window averages are n-periodic in the start position
  std::vector<double> avg(n);
  std::deque<int> dq;
  for (int len = 2; len <= n; len <<= 1) {
    const double inv = 1.0 / len;
    for (int s = 0; s < n; ++s) avg[s] = (prefix[s + len] - prefix[s]) * inv;
    // out[x] = max over starts in [x - len + 1, x] (mod n); slide over a
    // doubled copy so the wrap needs no special casing
    dq.clear();
    for (int i = 0; i < 2 * n; ++i) {
      const double value = avg[i % n];
      while (!dq.empty() && avg[dq.back() % n] <= value) dq.pop_back();
      dq.push_back(i);
      while (dq.front() < i - len + 1) dq.pop_front();
      if (i >= n) {
        const int x = i - n;
        out[x] = std::max(out[x], avg[dq.front() % n]);
      }
    }
  }
}

void require_d2(const Grid& g, const char* op) {
  if (g.d != 2)
    throw std::invalid_argument(std::string(op) + ": requires a d = 2 grid");
}

}  // namespace

WeightField hl_maximal_axis(const WeightField& w, int axis) {
  const Grid& g = w.grid;
  if (axis < 1 || axis > g.d)
    throw std::invalid_argument("hl_maximal_axis: axis out of range");
  const int ax = axis - 1;
  WeightField out = make_weight(g);
  const int n = g.n;

  // stride of the chosen axis and the enumeration of the other axes
  std::size_t stride = 1;
  for (int a = g.d - 1; a > ax; --a) stride *= static_cast<std::size_t>(n);
  const std::size_t lines = g.size() / static_cast<std::size_t>(n);

  std::vector<double> in(n), res(n);
  for (std::size_t line = 0; line < lines; ++line) {
    // base index of this line: distribute `line` over the other axes
    std::size_t base = 0;
    std::size_t rem = line;
    std::size_t mul = 1;
    for (int a = g.d - 1; a >= 0; --a) {
      if (a == ax) {
        mul *= static_cast<std::size_t>(n);
        continue;
      }
      base += (rem % n) * mul;
      rem /= n;
      mul *= static_cast<std::size_t>(n);
    }
    for (int j = 0; j < n; ++j) in[j] = w.v[base + stride * j];
    line_dyadic_max_average(in, res);
    for (int j = 0; j < n; ++j) out.v[base + stride * j] = res[j];
  }
  return out;
}

WeightField directional_maximal(const WeightField& w, int kappa, double s) {
  require_d2(w.grid, "directional_maximal");
  if (!(s >= 0.125 && s <= 8.0))
    throw std::invalid_argument("directional_maximal: s must be in [1/8, 8]");
  const int n = w.grid.n;
  const double t = std::ldexp(s, -kappa);
  WeightField out = make_weight(w.grid);

  std::vector<std::size_t> cells(n);
  std::vector<double> in(n), res(n);
  std::vector<long long> offs(n);
  if (t <= 1.0) {
    for (int i = 0; i < n; ++i) offs[i] = std::llround(t * i);
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < n; ++i) {
        const long long j1 = ((c - offs[i]) % n + n) % n;
        cells[i] = static_cast<std::size_t>(i) * n +
                   static_cast<std::size_t>(j1);
        in[i] = w.v[cells[i]];
      }
      line_dyadic_max_average(in, res);
      for (int i = 0; i < n; ++i) out.v[cells[i]] = res[i];
    }
  } else {
    for (int m = 0; m < n; ++m) offs[m] = std::llround(m / t);
    for (int c = 0; c < n; ++c) {
      for (int m = 0; m < n; ++m) {
        const long long j0 = (c + offs[m]) % n;
        const long long j1 = ((n - m) % n);
        cells[m] = static_cast<std::size_t>(j0) * n +
                   static_cast<std::size_t>(j1);
        in[m] = w.v[cells[m]];
      }
      line_dyadic_max_average(in, res);
      for (int m = 0; m < n; ++m) out.v[cells[m]] = res[m];
    }
  }
  return out;
}

WeightField strong_maximal(const WeightField& w) {
  require_d2(w.grid, "strong_maximal");
  return hl_maximal_axis(hl_maximal_axis(w, 2), 1);
}

WeightField lacunary_maximal(const WeightField& w, double alpha,
                             const LambdaFn& lambda, int kappa_min,
                             int kappa_max, int quad_nodes) {
  require_d2(w.grid, "lacunary_maximal");
  if (!(alpha >= 1.0))
    throw std::invalid_argument("lacunary_maximal: alpha must be >= 1");
  if (kappa_min > kappa_max)
    throw std::invalid_argument("lacunary_maximal: empty kappa window");
  const auto rule = quadrature::gauss_legendre(quad_nodes, 0.125, 8.0);

  WeightField wa = w;
  if (alpha != 1.0)
    for (double& x : wa.v) x = std::pow(x, alpha);

  const std::size_t total = w.grid.size();
  WeightField out = make_weight(w.grid);
  std::vector<WeightField> per_kappa(
      static_cast<std::size_t>(kappa_max - kappa_min + 1));
  parallel_for(per_kappa.size(), [&](std::size_t ki) {
    const int kappa = kappa_min + static_cast<int>(ki);
    WeightField acc = make_weight(w.grid);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double lam = std::fabs(lambda(kappa, rule.nodes[j]));
      if (lam == 0.0) continue;
      const WeightField m = directional_maximal(wa, kappa, rule.nodes[j]);
      const double coeff = rule.weights[j] * lam;
      if (alpha == 1.0) {
        for (std::size_t i = 0; i < total; ++i) acc.v[i] += coeff * m.v[i];
      } else {
        for (std::size_t i = 0; i < total; ++i)
          acc.v[i] += coeff * std::pow(m.v[i], 1.0 / alpha);
      }
    }
    per_kappa[ki] = std::move(acc);
  });
  for (const WeightField& acc : per_kappa)
    for (std::size_t i = 0; i < total; ++i)
      out.v[i] = std::max(out.v[i], acc.v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing profile and projections
// ---------------------------------------------------------------------------

namespace {

double bump01(double u) {
  if (std::fabs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

constexpr double kSlabHalfWidth = 0.05;  // 1/20

// Autoconvolution table of the band profile b(40 .), normalized to 1 at 0.
struct PhiHatTable {
  static constexpr int kSamples = 4096;
  std::vector<double> values;  // u in [0, 1/20]

  PhiHatTable() : values(kSamples + 1) {
    auto b40 = [](double u) { return bump01(40.0 * u); };
    for (int i = 0; i <= kSamples; ++i) {
      const double u = kSlabHalfWidth * i / kSamples;
      values[i] = quadrature::adaptive_simpson(
          [&](double v) { return b40(v) * b40(u - v); }, -0.025, 0.025,
          1e-13);
    }
    const double c0 = values[0];
    for (double& v : values) v /= c0;
  }

  double eval(double u) const {
    const double a = std::fabs(u);
    if (a >= kSlabHalfWidth) return 0.0;
    const double pos = a / kSlabHalfWidth * kSamples;
    const int i = std::min(static_cast<int>(pos), kSamples - 1);
    const double frac = pos - i;
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
  }
};

const PhiHatTable& phi_hat_table() {
  static const PhiHatTable table;
  return table;
}

}  // namespace

double SmoothingProfile::phi_hat(double u) const {
  return phi_hat_table().eval(u);
}

double SmoothingProfile::phi(double x) const {
  // g(x) = (1/2pi) int b(40 xi) cos(x xi) dxi ; phi = g^2 up to the same
  // normalization used in phi_hat.
  const double g = quadrature::adaptive_simpson(
      [&](double xi) { return bump01(40.0 * xi) * std::cos(x * xi); },
      -0.025, 0.025, 1e-13);
  return g * g;
}

double SmoothingProfile::split_rho(double r) const {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  return 1.0 - dyadic::smooth_step((r - 0.5) * 2.0);
}

const SmoothingProfile& default_profile() {
  static const SmoothingProfile profile;
  return profile;
}

namespace {

double psi_part(const SmoothingProfile& prof, double eta1, double eta2,
                ProjectionPart part) {
  const double base = prof.phi_hat(eta1 + eta2);
  if (base == 0.0) return 0.0;
  if (part == ProjectionPart::All) return base;
  const double r = std::hypot(eta1, eta2);
  const double rho = prof.split_rho(r);
  return part == ProjectionPart::Near ? base * rho : base * (1.0 - rho);
}

}  // namespace

fields::Field smoothed_projection(const Field& w, int kappa, double s, int l,
                                  ProjectionPart part) {
  require_d2(w.grid, "smoothed_projection");
  if (!(s > 0.0))
    throw std::invalid_argument("smoothed_projection: s must be positive");
  const SmoothingProfile& prof = default_profile();
  const double c2 = s * std::ldexp(1.0, l - kappa);
  const double c1 = std::ldexp(1.0, l);
  return fields::apply_symbol(w, [&prof, c1, c2,
                                  part](std::span<const double> xi) {
    return cplx(psi_part(prof, c1 * xi[0], c2 * xi[1], part), 0.0);
  });
}

std::pair<int, int> projection_l_window(const Grid& g, int kappa, double s,
                                        int width) {
  require_d2(g, "projection_l_window");
  const double c = s * std::ldexp(1.0, -kappa);
  double umax = 0.0;
  double umin = std::numeric_limits<double>::infinity();
  for (int j0 = 0; j0 < g.n; ++j0)
    for (int j1 = 0; j1 < g.n; ++j1) {
      const double u = std::fabs(g.freq(j0) + c * g.freq(j1));
      umax = std::max(umax, u);
      if (u > 0.0) umin = std::min(umin, u);
    }
  const int l_lo =
      static_cast<int>(std::floor(std::log2(kSlabHalfWidth / umax))) - 1;
  int l_hi = l_lo + width - 1;
  if (std::isfinite(umin)) {
    const int resonance_cap =
        static_cast<int>(std::floor(std::log2(kSlabHalfWidth / umin)));
    l_hi = std::min(l_hi, std::max(l_lo, resonance_cap));
  }
  return {l_lo, l_hi};
}

double near_domination_ratio(const WeightField& w, int kappa, double s,
                             int l) {
  const Field p =
      smoothed_projection(to_field(w), kappa, s, l, ProjectionPart::Near);
  const WeightField mm = strong_maximal(w);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.v.size(); ++i) {
    if (mm.v[i] <= 0.0) continue;
    worst = std::max(worst, std::abs(p.samples[i]) / mm.v[i]);
  }
  return worst;
}

double cone_domination_ratio(const WeightField& w, int kappa, double s,
                             int l) {
  const Field p =
      smoothed_projection(to_field(w), kappa, s, l, ProjectionPart::Cone);
  const WeightField mm = strong_maximal(w);
  const WeightField md = directional_maximal(w, kappa, s);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.v.size(); ++i) {
    const double denom = mm.v[i] + md.v[i];
    if (denom <= 0.0) continue;
    worst = std::max(worst, std::abs(p.samples[i]) / denom);
  }
  return worst;
}

SupBoundReport lacunary_sup_bound_check(const WeightField& w,
                                        std::span<const int> window_sizes,
                                        const LambdaFn& lambda, double p,
                                        int quad_nodes, int l_width) {
  require_d2(w.grid, "lacunary_sup_bound_check");
  if (window_sizes.empty())
    throw std::invalid_argument("lacunary_sup_bound_check: no window sizes");
  if (!(p > 1.0))
    throw std::invalid_argument("lacunary_sup_bound_check: need p > 1");
  const int n_max = *std::max_element(window_sizes.begin(),
                                      window_sizes.end());
  const auto rule = quadrature::gauss_legendre(quad_nodes, 0.125, 8.0);
  const std::size_t total = w.grid.size();

  const Field wf = to_field(w);
  const Field what = fields::transform_forward(wf);
  const SmoothingProfile& prof = default_profile();

  // per-kappa integral of sup_l |P^l w| |lambda| ds
  std::vector<std::vector<double>> per_kappa(
      static_cast<std::size_t>(2 * n_max + 1));
  parallel_for(per_kappa.size(), [&](std::size_t ki) {
    const int kappa = static_cast<int>(ki) - n_max;
    std::vector<double> acc(total, 0.0);
    Field band = fields::make_field(w.grid, fields::Side::Frequency);
    std::vector<double> supl(total);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double s = rule.nodes[j];
      const double lam = std::fabs(lambda(kappa, s));
      if (lam == 0.0) continue;
      std::fill(supl.begin(), supl.end(), 0.0);
      const auto [l_lo, l_hi] =
          projection_l_window(w.grid, kappa, s, l_width);
      for (int l = l_lo; l <= l_hi; ++l) {
        const double c1 = std::ldexp(1.0, l);
        const double c2 = s * std::ldexp(1.0, l - kappa);
        std::size_t flat = 0;
        bool any = false;
        for (int j0 = 0; j0 < w.grid.n; ++j0) {
          const double e1 = c1 * w.grid.freq(j0);
          for (int j1 = 0; j1 < w.grid.n; ++j1, ++flat) {
            const double v = prof.phi_hat(e1 + c2 * w.grid.freq(j1));
            band.samples[flat] = what.samples[flat] * v;
            any = any || v != 0.0;
          }
        }
        if (!any) continue;
        const Field pl = fields::transform_inverse(band);
        for (std::size_t i = 0; i < total; ++i)
          supl[i] = std::max(supl[i], std::abs(pl.samples[i]));
      }
      const double coeff = rule.weights[j] * lam;
      for (std::size_t i = 0; i < total; ++i) acc[i] += coeff * supl[i];
    }
    per_kappa[ki] = std::move(acc);
  });

  SupBoundReport report;
  report.quad_nodes = quad_nodes;
  report.l_width = l_width;
  const double wnorm = fields::lp_norm(wf, p);
  Field sup_field = fields::make_field(w.grid);
  for (const int N : window_sizes) {
    std::vector<double> g(total, 0.0);
    for (int kappa = -N; kappa <= N; ++kappa) {
      const auto& acc = per_kappa[static_cast<std::size_t>(kappa + n_max)];
      for (std::size_t i = 0; i < total; ++i)
        g[i] = std::max(g[i], acc[i]);
    }
    for (std::size_t i = 0; i < total; ++i) sup_field.samples[i] = cplx(g[i]);
    report.window_sizes.push_back(N);
    report.ratios.push_back(wnorm > 0.0
                                ? fields::lp_norm(sup_field, p) / wnorm
                                : 0.0);
  }
  for (std::size_t i = 0; i + 1 < report.ratios.size(); ++i)
    report.growth.push_back(report.ratios[i + 1] /
                            std::max(report.ratios[i], 1e-300));
  return report;
}

}  // namespace marcink::maximal
