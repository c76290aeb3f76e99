#include "marcink/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "marcink/dyadic.hpp"
#include "marcink/fields.hpp"
#include "marcink/quadrature.hpp"

namespace marcink::norms {

using fields::Field;
using fields::Grid;
using fields::cplx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_univariate(const BoundaryData& h, const char* op) {
  if (h.dim() != 1)
    throw std::invalid_argument(std::string(op) + ": univariate h required");
}

double smooth_tv(const BoundaryData& h, double a, double b) {
  // |h'| integrated over [a, b]; the analytic families have symbolic
  // derivatives, blow-up at 0 is reported as infinity.
  using Kind = BoundaryData::Kind;
  switch (h.kind()) {
    case Kind::Constant:
      return 0.0;
    case Kind::PowerOscillation:
    case Kind::LogSine: {
      if (a < 0.0 && b > 0.0) return kInf;
      if (a == 0.0 || b == 0.0) return kInf;
      // integrate in u = log|s|
      const double ua = std::log(std::fabs(a));
      const double ub = std::log(std::fabs(b));
      const double lo = std::min(ua, ub), hi = std::max(ua, ub);
      const double sgn = a > 0.0 ? 1.0 : -1.0;
      return quadrature::adaptive_simpson(
          [&](double u) {
            const double s = sgn * std::exp(u);
            return std::abs(h.deriv1(s)) * std::fabs(s);
          },
          lo, hi, 1e-11);
    }
    case Kind::SmoothBumps:
      return quadrature::adaptive_simpson(
          [&](double s) { return std::abs(h.deriv1(s)); }, a, b, 1e-11);
    default:
      throw std::invalid_argument("smooth_tv: unsupported kind");
  }
}

}  // namespace

double tv_on_interval(const BoundaryData& h, double a, double b) {
  require_univariate(h, "tv_on_interval");
  if (!(a < b)) throw std::invalid_argument("tv_on_interval: need a < b");
  if (h.is_step_like()) {
    double tv = 0.0;
    for (const auto& j : h.jumps_in(a, b)) {
      if (j.pos > a && j.pos < b) {
        tv += std::abs(j.at - j.left) + std::abs(j.right - j.at);
      } else if (j.pos == a) {
        tv += std::abs(j.right - j.at);
      } else if (j.pos == b) {
        tv += std::abs(j.at - j.left);
      }
    }
    return tv;
  }
  if (h.kind() == BoundaryData::Kind::SampledTable) {
    // sampled partition: table knots inside plus the interval endpoints
    std::vector<double> pts{a};
    for (const double x : h.table_abscissae())
      if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      tv += std::abs(h.eval1(pts[i + 1]) - h.eval1(pts[i]));
    return tv;
  }
  return smooth_tv(h, a, b);
}

double tv_marcinkiewicz(const BoundaryData& h, KWindow w) {
  require_univariate(h, "tv_marcinkiewicz");
  double best = 0.0;
  for (int k = w.k_min; k <= w.k_max; ++k) {
    const auto [pos, neg] = dyadic::interval_bounds(k);
    best = std::max(best, tv_on_interval(h, pos.first, pos.second) +
                              tv_on_interval(h, neg.first, neg.second));
  }
  return best;
}

double r_condition(const BoundaryData& h, double r, KWindow w) {
  require_univariate(h, "r_condition");
  if (!(r >= 1.0)) throw std::invalid_argument("r_condition: need r >= 1");
  if (!h.differentiable())
    throw std::invalid_argument(
        "r_condition: boundary data has no symbolic derivative (kind " +
        h.kind_name() + ")");
  auto component = [&](double c, double d, double sgn) {
    // int_c^d |s h'(s)|^r ds/|s| in u = log s coordinates
    return quadrature::adaptive_simpson(
        [&](double u) {
          const double s = sgn * std::exp(u);
          return std::pow(std::abs(h.deriv1(s)) * std::fabs(s), r);
        },
        std::log(c), std::log(d), 1e-12);
  };
  double best = 0.0;
  for (int k = w.k_min; k <= w.k_max; ++k) {
    const auto [pos, neg] = dyadic::interval_bounds(k);
    const double val = component(pos.first, pos.second, 1.0) +
                       component(-neg.second, -neg.first, -1.0);
    best = std::max(best, val);
  }
  return std::pow(best, 1.0 / r);
}

namespace {

// Sample points for the variation DP: uniform grid plus exact jump
// locations and their immediate neighbours.
std::vector<double> variation_samples(const BoundaryData& h, double a,
                                      double b, int samples) {
  std::set<double> pts;
  for (int i = 0; i < samples; ++i)
    pts.insert(a + (b - a) * i / (samples - 1.0));
  for (const auto& j : h.jumps_in(a, b)) {
    pts.insert(j.pos);
    const double before = std::nextafter(j.pos, a - 1.0);
    const double after = std::nextafter(j.pos, b + 1.0);
    if (before >= a) pts.insert(before);
    if (after <= b) pts.insert(after);
  }
  return {pts.begin(), pts.end()};
}

double vq_dp(const std::vector<cplx>& v, double q) {
  // D[i] = best sum of |dh|^q over chains ending at i.
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  std::vector<double> best(n, 0.0);
  double answer = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double bi = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double inc = std::pow(std::abs(v[i] - v[j]), q);
      bi = std::max(bi, best[j] + inc);
    }
    best[i] = bi;
    answer = std::max(answer, bi);
  }
  return std::pow(answer, 1.0 / q);
}

std::vector<std::size_t> extrema_indices(const std::vector<double>& v) {
  std::vector<std::size_t> keep;
  keep.push_back(0);
  int lastdir = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    const int dir = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (dir == 0) continue;
    if (lastdir != 0 && dir != lastdir) keep.push_back(i - 1);
    lastdir = dir;
  }
  if (keep.back() != v.size() - 1) keep.push_back(v.size() - 1);
  return keep;
}

double vq_from_values_impl(const std::vector<cplx>& values, double q) {
  bool real = true;
  for (const cplx& z : values)
    if (z.imag() != 0.0) {
      real = false;
      break;
    }
  if (!real) return vq_dp(values, q);
  std::vector<double> re(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) re[i] = values[i].real();
  const auto idx = extrema_indices(re);
  std::vector<cplx> reduced;
  reduced.reserve(idx.size());
  for (const std::size_t i : idx) reduced.push_back(values[i]);
  return vq_dp(reduced, q);
}

}  // namespace

double vq_from_samples(std::span<const multiplier::cplx> values, double q) {
  if (!(q >= 1.0))
    throw std::invalid_argument("vq_from_samples: need q >= 1");
  return vq_from_values_impl(std::vector<cplx>(values.begin(), values.end()),
                             q);
}

double vq_norm(const BoundaryData& h, double q, double a, double b,
               int samples) {
  require_univariate(h, "vq_norm");
  if (!(q >= 1.0)) throw std::invalid_argument("vq_norm: need q >= 1");
  if (!(a < b)) throw std::invalid_argument("vq_norm: need a < b");
  const auto pts = variation_samples(h, a, b, samples);
  std::vector<cplx> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) values[i] = h.eval1(pts[i]);
  return vq_from_values_impl(values, q);
}

double vq_norm_dyadic(const BoundaryData& h, double q, int k, int samples) {
  require_univariate(h, "vq_norm_dyadic");
  const auto [pos, neg] = dyadic::interval_bounds(k);
  auto neg_pts = variation_samples(h, neg.first, neg.second, samples / 2);
  auto pos_pts = variation_samples(h, pos.first, pos.second, samples / 2);
  neg_pts.insert(neg_pts.end(), pos_pts.begin(), pos_pts.end());
  std::vector<cplx> values(neg_pts.size());
  for (std::size_t i = 0; i < neg_pts.size(); ++i)
    values[i] = h.eval1(neg_pts[i]);
  return vq_from_values_impl(values, q);
}

namespace {

// beta (x) ... (x) beta localized dilate of g, sampled on the grid.
Field localize(const BoundaryData& g, std::span<const double> t,
               const Grid& grid) {
  if (g.dim() != grid.d)
    throw std::invalid_argument("localize: boundary dim != grid dim");
  if (static_cast<int>(t.size()) != grid.d)
    throw std::invalid_argument("localize: t has wrong length");
  for (const double ti : t)
    if (!(ti > 0.0))
      throw std::invalid_argument("localize: dilations must be positive");
  Field G = fields::make_field(grid);
  std::array<double, 3> x{}, ts{};
  const std::size_t total = grid.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double bprod = 1.0;
    for (int ax = grid.d - 1; ax >= 0; --ax) {
      x[ax] = grid.coord(static_cast<int>(rem % grid.n));
      rem /= grid.n;
    }
    for (int ax = 0; ax < grid.d && bprod != 0.0; ++ax) {
      bprod *= dyadic::eval_beta(x[ax]);
      ts[ax] = t[ax] * x[ax];
    }
    if (bprod == 0.0) continue;
    G.samples[flat] =
        bprod * g.eval(std::span<const double>(ts.data(), grid.d));
  }
  return G;
}

double grid_L() { return 4.0; }

}  // namespace

double localized_sobolev(const BoundaryData& h, double t, double q,
                         double alpha, int grid_n) {
  require_univariate(h, "localized_sobolev");
  if (!(t > 0.0))
    throw std::invalid_argument("localized_sobolev: t must be positive");
  const Grid g1 = fields::make_grid(1, grid_n, grid_L());
  const double tv[] = {t};
  Field G = localize(h, tv, g1);
  Field W = fields::apply_symbol(G, [alpha](std::span<const double> xi) {
    return cplx(std::pow(1.0 + xi[0] * xi[0], alpha / 2.0), 0.0);
  });
  return fields::lp_norm(W, q);
}

namespace {

// Per-axis tables of psi_r on the lattice; bands r with an all-zero row
// are dropped.
std::vector<std::vector<double>> psi_rows(const Grid& grid) {
  const double max_freq = grid.max_abs_freq();
  const int r_max =
      std::max(0, static_cast<int>(std::floor(std::log2(max_freq / 0.625))) +
                      1);
  std::vector<std::vector<double>> rows;
  for (int r = 0; r <= r_max; ++r) {
    std::vector<double> row(grid.n);
    double mass = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      row[j] = dyadic::eval_psi(r, grid.freq(j));
      mass += row[j];
    }
    if (r > 0 && mass == 0.0) continue;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double multiparam_sobolev(const BoundaryData& g, std::span<const double> t,
                          double q, double alpha, int grid_n) {
  if (g.dim() < 1 || g.dim() > 2)
    throw std::invalid_argument("multiparam_sobolev: dim must be 1 or 2");
  if (!(q > 0.0))
    throw std::invalid_argument("multiparam_sobolev: q must be positive");
  const Grid grid = fields::make_grid(g.dim(), grid_n, grid_L());
  const Field G = localize(g, t, grid);
  const Field Ghat = fields::transform_forward(G);
  const auto rows = psi_rows(grid);
  const std::size_t total = grid.size();
  std::vector<double> acc(total, 0.0);
  Field band = fields::make_field(grid, fields::Side::Frequency);

  auto accumulate_band = [&](double weight) {
    const Field B = fields::transform_inverse(band);
    for (std::size_t i = 0; i < total; ++i)
      acc[i] += weight * std::norm(B.samples[i]);
  };

  if (grid.d == 1) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int j = 0; j < grid.n; ++j)
        band.samples[j] = Ghat.samples[j] * rows[r][j];
      accumulate_band(std::exp2(2.0 * alpha * static_cast<double>(r)));
    }
  } else {
    for (std::size_t r0 = 0; r0 < rows.size(); ++r0)
      for (std::size_t r1 = 0; r1 < rows.size(); ++r1) {
        for (int j0 = 0; j0 < grid.n; ++j0) {
          const double p0 = rows[r0][j0];
          for (int j1 = 0; j1 < grid.n; ++j1) {
            const std::size_t flat =
                static_cast<std::size_t>(j0) * grid.n + j1;
            band.samples[flat] = Ghat.samples[flat] * (p0 * rows[r1][j1]);
          }
        }
        accumulate_band(
            std::exp2(2.0 * alpha * static_cast<double>(r0 + r1)));
      }
  }

  Field sq = fields::make_field(grid);
  for (std::size_t i = 0; i < total; ++i)
    sq.samples[i] = cplx(std::sqrt(acc[i]), 0.0);
  return fields::lp_norm(sq, q);
}

double mixed_derivative_norm(const BoundaryData& g, std::span<const double> t,
                             std::span<const double> a, double q,
                             int grid_n) {
  if (static_cast<int>(a.size()) != g.dim())
    throw std::invalid_argument(
        "mixed_derivative_norm: exponent vector length != dim");
  const Grid grid = fields::make_grid(g.dim(), grid_n, grid_L());
  const Field G = localize(g, t, grid);
  std::vector<double> av(a.begin(), a.end());
  Field W = fields::apply_symbol(G, [av](std::span<const double> xi) {
    double w = 1.0;
    for (std::size_t j = 0; j < av.size(); ++j)
      w *= std::pow(1.0 + xi[j] * xi[j], av[j] / 2.0);
    return cplx(w, 0.0);
  });
  return fields::lp_norm(W, q);
}

double oneparam_sobolev(const BoundaryData& g, std::span<const double> t,
                        double q, double alpha, int grid_n) {
  const Grid grid = fields::make_grid(g.dim(), grid_n, grid_L());
  const Field G = localize(g, t, grid);
  Field W = fields::apply_symbol(G, [alpha](std::span<const double> xi) {
    double r2 = 0.0;
    for (const double x : xi) r2 += x * x;
    return cplx(std::pow(1.0 + r2, alpha / 2.0), 0.0);
  });
  return fields::lp_norm(W, q);
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string params_string(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ";";
    out += k + "=" + fmt(v);
  }
  return out;
}

std::string range_string(const PredictedRange& r) {
  std::string out = "p in (" + fmt(r.p_lo) + ", ";
  out += std::isinf(r.p_hi) ? std::string("inf") : fmt(r.p_hi);
  out += ") via " + r.rule;
  return out;
}

struct SweepResult {
  double value = 0.0;
  double marginal = 0.0;
  bool converged = false;
};

// sup over a list of evaluations with the marginal change recorded against
// a shrunk window (drop the outermost elements).
SweepResult sup_with_marginal(const std::vector<double>& values,
                              std::size_t shrink) {
  SweepResult out;
  for (const double v : values) out.value = std::max(out.value, v);
  double inner = 0.0;
  if (values.size() > 2 * shrink) {
    for (std::size_t i = shrink; i + shrink < values.size(); ++i)
      inner = std::max(inner, values[i]);
  }
  out.marginal = out.value > 0.0 ? (out.value - inner) / out.value : 0.0;
  out.converged = out.marginal < 0.01;
  return out;
}

std::vector<double> log_uniform_ts(const ReportParams& p) {
  std::vector<double> ts;
  for (int i = 0; i < p.t_points; ++i) {
    const double e =
        p.t_log2_min +
        (p.t_log2_max - p.t_log2_min) * i / std::max(1, p.t_points - 1);
    ts.push_back(std::exp2(e));
  }
  return ts;
}

}  // namespace

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"condition", e.condition},
                            {"boundary", e.boundary},
                            {"params", e.params},
                            {"value", e.value},
                            {"converged", e.converged},
                            {"marginal_change", e.marginal_change},
                            {"window", e.window},
                            {"predicted_range", e.predicted_range}});
  }
  j["ranges"] = nlohmann::json::array();
  for (const auto& r : ranges) {
    j["ranges"].push_back({{"rule", r.rule},
                           {"p_lo", r.p_lo},
                           {"p_hi", std::isinf(r.p_hi) ? -1.0 : r.p_hi},
                           {"space", r.space},
                           {"note", r.note},
                           {"params", r.params}});
  }
  return j;
}

std::string ConditionReport::to_csv() const {
  std::string out =
      "condition,boundary,params,value,converged,marginal_change,window,"
      "predicted_range\n";
  for (const auto& e : entries) {
    out += e.condition + "," + e.boundary + "," + params_string(e.params) +
           "," + fmt(e.value) + "," + (e.converged ? "1" : "0") + "," +
           fmt(e.marginal_change) + "," + e.window + "," + e.predicted_range +
           "\n";
  }
  return out;
}

namespace {

struct ReportBuilder {
  const HomogeneousMultiplier& m;
  const ReportParams& p;
  ConditionReport report;

  std::string window_desc() const {
    return "k in [" + std::to_string(p.k_window.k_min) + "," +
           std::to_string(p.k_window.k_max) + "]";
  }

  void add_range(ConditionEntry& e, PredictedRange r) {
    e.predicted_range = range_string(r);
    report.ranges.push_back(std::move(r));
  }

  // ---- univariate boundary (d = 2) -------------------------------------
  void univariate_conditions(const BoundaryData& h, const std::string& side) {
    // dyadic total variation
    {
      ConditionEntry e;
      e.condition = "dyadic-variation";
      e.boundary = side;
      std::vector<double> vals;
      for (int k = p.k_window.k_min; k <= p.k_window.k_max; ++k) {
        const auto [pos, neg] = dyadic::interval_bounds(k);
        vals.push_back(tv_on_interval(h, pos.first, pos.second) +
                       tv_on_interval(h, neg.first, neg.second));
      }
      const auto sweep = sup_with_marginal(vals, 1);
      e.value = sweep.value;
      e.marginal_change = sweep.marginal;
      e.converged = sweep.converged && std::isfinite(sweep.value);
      e.window = window_desc();
      if (e.converged) {
        add_range(e, PredictedRange{"tv-multiplier-bound", 1.0, kInf,
                                    "Lp(R^2)",
                                    "operator norm bounded by C*(sup-TV)",
                                    {{"A", e.value}}});
      }
      report.entries.push_back(std::move(e));
    }

    // scale-invariant derivative condition, analytic families only
    if (h.differentiable()) {
      for (const double r : p.rs) {
        if (r < 1.0) continue;
        ConditionEntry e;
        e.condition = "dyadic-derivative-lr";
        e.boundary = side;
        e.params["r"] = r;
        std::vector<double> vals;
        for (int k = p.k_window.k_min; k <= p.k_window.k_max; ++k)
          vals.push_back(r_condition(h, r, KWindow{k, k}));
        const auto sweep = sup_with_marginal(vals, 1);
        e.value = sweep.value;
        e.marginal_change = sweep.marginal;
        e.converged = sweep.converged;
        e.window = window_desc();
        report.entries.push_back(std::move(e));
      }
    }

    // q-variation over dyadic intervals
    for (const double q : p.qs) {
      if (q < 1.0) continue;
      ConditionEntry e;
      e.condition = "q-variation";
      e.boundary = side;
      e.params["q"] = q;
      std::vector<double> vals;
      for (int k = p.k_window.k_min; k <= p.k_window.k_max; ++k)
        vals.push_back(vq_norm_dyadic(h, q, k, p.vq_samples));
      const auto sweep = sup_with_marginal(vals, 1);
      e.value = sweep.value + h.sup_abs();
      e.marginal_change = sweep.marginal;
      e.converged = sweep.converged;
      e.window = window_desc();
      if (e.converged && q > 1.0) {
        add_range(e, PredictedRange{"q-variation-range", 2.0 * q / (q + 1.0),
                                    2.0 * q / (q - 1.0), "Lp(R^2)",
                                    "|1/p - 1/2| < 1/(2q)",
                                    {{"q", q}, {"value", e.value}}});
      }
      report.entries.push_back(std::move(e));
    }

    // localized Sobolev condition over the dilation sweep
    for (const double q : p.qs) {
      for (const double alpha : alphas_for(q)) {
        ConditionEntry e;
        e.condition = "localized-sobolev";
        e.boundary = side;
        e.params["q"] = q;
        e.params["alpha"] = alpha;
        std::vector<double> vals;
        for (const double t : log_uniform_ts(p))
          vals.push_back(localized_sobolev(h, t, q, alpha, p.sobolev_grid_n));
        const auto sweep = sup_with_marginal(vals, 1);
        // grid-refinement marginal: recompute the sup-attaining value at
        // half resolution
        double coarse = 0.0;
        for (const double t : log_uniform_ts(p))
          coarse = std::max(coarse, localized_sobolev(h, t, q, alpha,
                                                      p.sobolev_grid_n / 2));
        const double grid_marginal =
            sweep.value > 0.0
                ? std::fabs(sweep.value - coarse) / sweep.value
                : 0.0;
        e.value = sweep.value;
        e.marginal_change = std::max(sweep.marginal, grid_marginal);
        e.converged = e.marginal_change < 0.01;
        e.window = "t in [2^" + fmt(p.t_log2_min) + ", 2^" +
                   fmt(p.t_log2_max) + "] x" + std::to_string(p.t_points);
        if (e.converged && q > 1.0 && alpha > 1.0 / q) {
          add_range(e,
                    PredictedRange{"sobolev-variation-range",
                                   2.0 * q / (q + 1.0), 2.0 * q / (q - 1.0),
                                   "Lp(R^2)", "|1/p - 1/2| < 1/(2q)",
                                   {{"q", q}, {"alpha", alpha}}});
        }
        report.entries.push_back(std::move(e));
      }
    }

    // product-Hardy quasinorm branch (no side condition in the plane)
    for (const double r : p.hardy_rs) {
      if (!(r > 0.0 && r <= 1.0)) continue;
      const double alpha = 2.0 / r - 1.0 + 0.25;
      ConditionEntry e;
      e.condition = "multiparam-sobolev";
      e.boundary = side;
      e.params["q"] = r;
      e.params["alpha"] = alpha;
      std::vector<double> vals;
      for (const double t : log_uniform_ts(p)) {
        const double tv[] = {t};
        vals.push_back(
            multiparam_sobolev(h, tv, r, alpha, p.sobolev_grid_n));
      }
      const auto sweep = sup_with_marginal(vals, 1);
      e.value = sweep.value;
      e.marginal_change = sweep.marginal;
      e.converged = sweep.converged;
      e.window = "t in [2^" + fmt(p.t_log2_min) + ", 2^" + fmt(p.t_log2_max) +
                 "] x" + std::to_string(p.t_points);
      if (e.converged) {
        add_range(e, PredictedRange{"hardy-multiparam-range", r, kInf,
                                    "Hp(R^2) multiparameter",
                                    "r <= p < inf on the product Hardy scale",
                                    {{"r", r}, {"alpha", alpha}}});
      }
      report.entries.push_back(std::move(e));
    }
  }

  // ---- bivariate boundary (d = 3) ---------------------------------------
  void bivariate_conditions(const BoundaryData& g, const std::string& side) {
    auto t_grid = [&]() {
      std::vector<std::array<double, 2>> ts;
      for (const double t0 : log_uniform_ts(p))
        for (const double t1 : log_uniform_ts(p)) ts.push_back({t0, t1});
      return ts;
    }();

    auto sweep_norm = [&](auto&& eval) {
      std::vector<double> vals;
      vals.reserve(t_grid.size());
      for (const auto& t : t_grid)
        vals.push_back(eval(std::span<const double>(t.data(), 2)));
      // shrink by one ring of the t-grid: recompute over interior points
      double inner = 0.0;
      const auto ts = log_uniform_ts(p);
      if (ts.size() > 2) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < ts.size(); ++i)
          for (std::size_t j = 0; j < ts.size(); ++j, ++idx)
            if (i > 0 && i + 1 < ts.size() && j > 0 && j + 1 < ts.size())
              inner = std::max(inner, vals[idx]);
      }
      SweepResult out;
      for (const double v : vals) out.value = std::max(out.value, v);
      out.marginal =
          out.value > 0.0 ? (out.value - inner) / out.value : 0.0;
      out.converged = out.marginal < 0.01;
      return out;
    };

    const std::string t_window = "t in [2^" + fmt(p.t_log2_min) + ", 2^" +
                                 fmt(p.t_log2_max) + "]^2 x" +
                                 std::to_string(p.t_points) + "^2";

    // multiparameter Sobolev, q >= 2 branch
    for (const double q : p.qs) {
      for (const double alpha : alphas_for(q)) {
        ConditionEntry e;
        e.condition = "multiparam-sobolev";
        e.boundary = side;
        e.params["q"] = q;
        e.params["alpha"] = alpha;
        const auto sweep = sweep_norm([&](std::span<const double> t) {
          return multiparam_sobolev(g, t, q, alpha, p.multiparam_grid_n);
        });
        e.value = sweep.value;
        e.marginal_change = sweep.marginal;
        e.converged = sweep.converged;
        e.window = t_window;
        if (e.converged && q >= 2.0 && alpha > 1.0 / q) {
          add_range(e, PredictedRange{"multiparam-sobolev-range",
                                      2.0 * q / (q + 1.0),
                                      2.0 * q / (q - 1.0), "Lp(R^3)",
                                      "|1/p - 1/2| < 1/(2q)",
                                      {{"q", q}, {"alpha", alpha}}});
        }
        report.entries.push_back(std::move(e));
      }
    }

    // mixed-derivative conditions (doubled first exponent + permutation)
    for (const double r : p.rs) {
      if (r < 2.0) continue;
      const double gamma = 1.0 / r + 0.25;
      ConditionEntry e;
      e.condition = "mixed-derivative";
      e.boundary = side;
      e.params["r"] = r;
      e.params["gamma"] = gamma;
      double worst_marginal = 0.0;
      double value = 0.0;
      bool conv = true;
      for (const std::array<double, 2> a :
           {std::array<double, 2>{2.0 * gamma, gamma},
            std::array<double, 2>{gamma, 2.0 * gamma}}) {
        const auto sweep = sweep_norm([&](std::span<const double> t) {
          return mixed_derivative_norm(g, t, a, r, p.multiparam_grid_n);
        });
        value = std::max(value, sweep.value);
        worst_marginal = std::max(worst_marginal, sweep.marginal);
        conv = conv && sweep.converged;
      }
      e.value = value;
      e.marginal_change = worst_marginal;
      e.converged = conv;
      e.window = t_window;
      if (e.converged && gamma > 1.0 / r) {
        add_range(e, PredictedRange{"mixed-derivative-range",
                                    r / (0.5 * r + 1.0), r / (0.5 * r - 1.0) >
                                            0.0
                                        ? r / (0.5 * r - 1.0)
                                        : kInf,
                                    "Lp(R^3)", "|1/p - 1/2| < 1/r",
                                    {{"r", r}, {"gamma", gamma}}});
      }
      report.entries.push_back(std::move(e));
    }

    // low-p criterion: L2 mixed derivative with one large exponent
    {
      const double gamma = 0.75;
      for (const double target_p : {1.1, 1.25}) {
        const double alpha = 2.0 / target_p - 1.0 + 0.1;
        ConditionEntry e;
        e.condition = "mixed-derivative-l2";
        e.boundary = side;
        e.params["alpha"] = alpha;
        e.params["gamma"] = gamma;
        double value = 0.0, worst_marginal = 0.0;
        bool conv = true;
        for (const std::array<double, 2> a :
             {std::array<double, 2>{alpha, gamma},
              std::array<double, 2>{gamma, alpha}}) {
          const auto sweep = sweep_norm([&](std::span<const double> t) {
            return mixed_derivative_norm(g, t, a, 2.0, p.multiparam_grid_n);
          });
          value = std::max(value, sweep.value);
          worst_marginal = std::max(worst_marginal, sweep.marginal);
          conv = conv && sweep.converged;
        }
        e.value = value;
        e.marginal_change = worst_marginal;
        e.converged = conv;
        e.window = t_window;
        if (e.converged) {
          add_range(e, PredictedRange{"low-p-interpolation-range",
                                      std::max(1.0, 2.0 / (1.0 + alpha)),
                                      4.0 / 3.0, "Lp(R^3)",
                                      "alpha > 2/p - 1, gamma > 1/2",
                                      {{"alpha", alpha}, {"gamma", gamma}}});
        }
        report.entries.push_back(std::move(e));
      }
    }

    // product-Hardy criterion: quasinorm branch plus the L2 side condition
    for (const double r : p.hardy_rs) {
      if (!(r > 0.0 && r <= 1.0)) continue;
      const double alpha = 2.0 / r - 1.0 + 0.25;
      const double gamma = 1.0 / r - 0.5 + 0.25;
      ConditionEntry quasi;
      quasi.condition = "multiparam-sobolev";
      quasi.boundary = side;
      quasi.params["q"] = r;
      quasi.params["alpha"] = alpha;
      const auto sweep = sweep_norm([&](std::span<const double> t) {
        return multiparam_sobolev(g, t, r, alpha, p.multiparam_grid_n);
      });
      quasi.value = sweep.value;
      quasi.marginal_change = sweep.marginal;
      quasi.converged = sweep.converged;
      quasi.window = t_window;

      ConditionEntry l2;
      l2.condition = "mixed-derivative-l2";
      l2.boundary = side;
      l2.params["gamma"] = gamma;
      l2.params["q"] = r;
      double value = 0.0, worst_marginal = 0.0;
      bool conv = true;
      for (const std::array<double, 2> a :
           {std::array<double, 2>{2.0 * gamma, 0.0},
            std::array<double, 2>{0.0, 2.0 * gamma}}) {
        const auto sw = sweep_norm([&](std::span<const double> t) {
          return mixed_derivative_norm(g, t, a, 2.0, p.multiparam_grid_n);
        });
        value = std::max(value, sw.value);
        worst_marginal = std::max(worst_marginal, sw.marginal);
        conv = conv && sw.converged;
      }
      l2.value = value;
      l2.marginal_change = worst_marginal;
      l2.converged = conv;
      l2.window = t_window;

      if (quasi.converged && l2.converged) {
        PredictedRange range{"hardy-multiparam-range", r, kInf,
                             "Hp(R^3) multiparameter",
                             "r <= p < inf on the product Hardy scale",
                             {{"r", r}, {"alpha", alpha}, {"gamma", gamma}}};
        quasi.predicted_range = range_string(range);
        report.ranges.push_back(std::move(range));
      }
      report.entries.push_back(std::move(quasi));
      report.entries.push_back(std::move(l2));
    }

    // isotropic Sobolev criterion
    for (const double q : p.qs) {
      if (q <= 1.0) continue;
      const double alpha = 2.0 / q + 0.25;  // above (d-1)/q for d = 3
      ConditionEntry e;
      e.condition = "oneparam-sobolev";
      e.boundary = side;
      e.params["q"] = q;
      e.params["alpha"] = alpha;
      const auto sweep = sweep_norm([&](std::span<const double> t) {
        return oneparam_sobolev(g, t, q, alpha, p.multiparam_grid_n);
      });
      e.value = sweep.value;
      e.marginal_change = sweep.marginal;
      e.converged = sweep.converged;
      e.window = t_window;
      if (e.converged) {
        add_range(e, PredictedRange{"oneparam-sobolev-range",
                                    2.0 * q / (q + 1.0),
                                    2.0 * q / (q - 1.0),
                                    "Lp (as stated; likely R^d)",
                                    "|1/p - 1/2| < 1/(2q), alpha > (d-1)/q",
                                    {{"q", q}, {"alpha", alpha}}});
      }
      report.entries.push_back(std::move(e));
    }
  }

  std::vector<double> alphas_for(double q) const {
    if (!p.alphas.empty()) return p.alphas;
    return {1.0 / q + 0.25};
  }

  // sharpness exclusions for each (q, alpha) used by a Sobolev-type range
  void sharpness_rows() {
    std::set<std::pair<double, double>> seen;
    for (const auto& r : report.ranges) {
      if (!r.params.count("q") || !r.params.count("alpha")) continue;
      const double q = r.params.at("q");
      const double alpha = r.params.at("alpha");
      if (!seen.insert({q, alpha}).second) continue;
      // on (1, 4/3): excluded when alpha < 2/p - 3/2 + 1/q, i.e. for
      // p below 2 / (alpha + 3/2 - 1/q)
      const double denom = alpha + 1.5 - 1.0 / q;
      const double p_excl = denom > 0.0 ? 2.0 / denom : kInf;
      if (p_excl > 1.0) {
        PredictedRange ex{"sharpness-exclusion", 1.0,
                          std::min(4.0 / 3.0, p_excl),
                          "excluded for Lp",
                          "alpha below the necessary threshold",
                          {{"q", q}, {"alpha", alpha}}};
        if (ex.p_hi > ex.p_lo) report.ranges.push_back(std::move(ex));
      }
      if (alpha <= 1.0 / q) {
        report.ranges.push_back(
            PredictedRange{"sharpness-exclusion", 4.0 / 3.0, 2.0,
                           "excluded for Lp",
                           "alpha <= 1/q on [4/3, 2]",
                           {{"q", q}, {"alpha", alpha}}});
      }
    }
  }

  ConditionReport build() {
    report.d = m.d;
    if (m.d == 2) {
      univariate_conditions(m.plus, "plus");
      univariate_conditions(m.minus, "minus");
    } else {
      bivariate_conditions(m.plus, "plus");
      bivariate_conditions(m.minus, "minus");
    }
    sharpness_rows();
    return std::move(report);
  }
};

}  // namespace

ConditionReport build_report(const HomogeneousMultiplier& m,
                             const ReportParams& params) {
  ReportBuilder builder{m, params, {}};
  return builder.build();
}

}  // namespace marcink::norms
