#include "marcink/probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "marcink/dyadic.hpp"
#include "marcink/norms.hpp"
#include "marcink/parallel.hpp"
#include "marcink/quadrature.hpp"

namespace marcink::probe {

using fields::cplx;
using fields::Side;

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, Strategy s, int trial) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(s) + 1) ^
               mix64(static_cast<std::uint64_t>(trial) * 0x51ull));
}

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Field rectangle_witness(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = g.n;
  const int cx = static_cast<int>(uniform01(rng) * n);
  const int cy = static_cast<int>(uniform01(rng) * n);
  auto half = [&]() {
    const double lo = std::log(1.0), hi = std::log(n / 2.0);
    return std::max(1, static_cast<int>(std::exp(
                            lo + (hi - lo) * uniform01(rng))));
  };
  const int hx = half(), hy = half();
  Field f = fields::make_field(g);
  for (int dx = -hx; dx <= hx; ++dx)
    for (int dy = -hy; dy <= hy; ++dy) {
      const int j0 = ((cx + dx) % n + n) % n;
      const int j1 = ((cy + dy) % n + n) % n;
      f.samples[static_cast<std::size_t>(j0) * n + j1] = 1.0;
    }
  return f;
}

Field tube_witness(const Grid& g, std::uint64_t seed, int trial) {
  std::mt19937_64 rng(seed);
  const int n = g.n;
  // lacunary fan of directions (1, -2^{-kappa})
  const int kappa = trial % 4;
  const double vx = 1.0, vy = -std::ldexp(1.0, -kappa);
  const double norm = std::hypot(vx, vy);
  const double px = -vy / norm, py = vx / norm;  // unit normal
  const double x0 = (uniform01(rng) * 2.0 - 1.0) * g.L;
  const double y0 = (uniform01(rng) * 2.0 - 1.0) * g.L;
  const double width = std::sqrt(static_cast<double>(n)) * g.spacing();
  Field f = fields::make_field(g);
  std::size_t flat = 0;
  for (int j0 = 0; j0 < n; ++j0)
    for (int j1 = 0; j1 < n; ++j1, ++flat) {
      const double u =
          (g.coord(j0) - x0) * px + (g.coord(j1) - y0) * py;
      if (std::fabs(u) <= 0.5 * width) f.samples[flat] = 1.0;
    }
  return f;
}

// Homogeneous symbols carry the declared value 0 on {xi_d = 0}; witnesses
// are projected off that lattice row so ratios probe the symbol rather
// than the hyperplane artifact.
Field drop_hyperplane_row(const Field& f) {
  Field fhat = fields::transform_forward(f);
  const int d = f.grid.d;
  fields::for_each_freq(f.grid, [&](std::size_t flat,
                                    std::span<const double> xi) {
    if (xi[d - 1] == 0.0) fhat.samples[flat] = cplx(0.0);
  });
  return fields::transform_inverse(fhat);
}

struct Scored {
  double ratio = 0.0;
  int iteration = 0;
};

double rated(const Field& f, const fields::CachedSymbol& sym, double p) {
  const double fn = fields::lp_norm(f, p);
  if (fn == 0.0) return 0.0;
  return fields::lp_norm(fields::apply_symbol(f, sym), p) / fn;
}

// Dual-map power iteration sharpening the Lp ratio; keeps the best
// intermediate. Only lower bounds are claimed.
Scored ascent_score(Field f, const fields::CachedSymbol& sym,
                    const fields::CachedSymbol& adj, double p,
                    int iterations) {
  Scored best;
  const double pp = p / (p - 1.0);
  for (int it = 0; it < iterations; ++it) {
    const double fn = fields::lp_norm(f, p);
    if (fn == 0.0) break;
    Field g = fields::apply_symbol(f, sym);
    const double ratio = fields::lp_norm(g, p) / fn;
    if (ratio > best.ratio) {
      best.ratio = ratio;
      best.iteration = it;
    }
    // duality map |g|^{p-2} g, clamped away from vanishing samples
    double gmax = 0.0;
    for (const cplx& z : g.samples) gmax = std::max(gmax, std::abs(z));
    if (gmax == 0.0) break;
    const double floor = 1e-12 * gmax;
    for (cplx& z : g.samples) {
      const double a = std::abs(z);
      z = a > floor ? z * std::pow(a, p - 2.0) : cplx(0.0);
    }
    Field next = fields::apply_symbol(g, adj);
    double nmax = 0.0;
    for (const cplx& z : next.samples) nmax = std::max(nmax, std::abs(z));
    if (nmax == 0.0) break;
    const double nfloor = 1e-12 * nmax;
    for (cplx& z : next.samples) {
      const double a = std::abs(z);
      z = a > nfloor ? z * std::pow(a, pp - 2.0) : cplx(0.0);
    }
    f = drop_hyperplane_row(next);
  }
  return best;
}

constexpr int kAscentIterations = 10;

Field strategy_field(Strategy s, const Grid& g, std::uint64_t seed,
                     int trial) {
  const std::uint64_t ts = trial_seed(seed, s, trial);
  switch (s) {
    case Strategy::RandomGaussian:
    case Strategy::Ascent:
      return drop_hyperplane_row(fields::random_gaussian(g, ts));
    case Strategy::RectangleIndicators:
      return drop_hyperplane_row(rectangle_witness(g, ts));
    case Strategy::TubeIndicators:
      return drop_hyperplane_row(tube_witness(g, ts, trial));
  }
  throw std::logic_error("unknown strategy");
}

Field wave_witness(const Grid& g, std::size_t argmax_flat) {
  // inverse transform of a frequency delta: a pure lattice wave
  Field spike = fields::make_field(g, Side::Frequency);
  spike.samples[argmax_flat] = 1.0;
  return fields::transform_inverse(spike);
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::RandomGaussian: return "random-gaussian";
    case Strategy::RectangleIndicators: return "rectangle-indicators";
    case Strategy::TubeIndicators: return "tube-indicators";
    case Strategy::Ascent: return "ascent";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "random-gaussian") return Strategy::RandomGaussian;
  if (name == "rectangle-indicators") return Strategy::RectangleIndicators;
  if (name == "tube-indicators") return Strategy::TubeIndicators;
  if (name == "ascent") return Strategy::Ascent;
  throw std::invalid_argument("unknown strategy: " + name);
}

const ProbeRow& ProbeResult::best_row(int size) const {
  const ProbeRow* best = nullptr;
  for (const ProbeRow& r : rows) {
    if (r.size != size) continue;
    if (!best || r.ratio > best->ratio) best = &r;
  }
  if (!best) throw std::invalid_argument("no rows for requested size");
  return *best;
}

nlohmann::json ProbeResult::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["seed"] = seed;
  j["L"] = L;
  j["sizes"] = sizes;
  j["best_ratios"] = best_ratios;
  j["growth"] = growth;
  j["rows"] = nlohmann::json::array();
  for (const ProbeRow& r : rows) {
    j["rows"].push_back({{"size", r.size},
                         {"p", r.p},
                         {"strategy", r.strategy},
                         {"seed", r.seed},
                         {"ratio", r.ratio},
                         {"growth", r.growth},
                         {"trial", r.trial},
                         {"iteration", r.iteration}});
  }
  return j;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ProbeResult::to_csv() const {
  std::string out = "size,p,strategy,seed,ratio,growth\n";
  for (const ProbeRow& r : rows) {
    out += std::to_string(r.size) + "," + fmt17(r.p) + "," + r.strategy +
           "," + std::to_string(r.seed) + "," + fmt17(r.ratio) + "," +
           fmt17(r.growth) + "\n";
  }
  return out;
}

ProbeResult probe_norm(const HomogeneousMultiplier& m, double p,
                       const Grid& g, std::span<const Strategy> strategies,
                       int trials, std::uint64_t seed) {
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("probe_norm: p must lie in (1, inf)");
  if (trials < 1) throw std::invalid_argument("probe_norm: trials >= 1");
  const fields::CachedSymbol sym = fields::precompute_symbol(g, m.symbol());
  const fields::CachedSymbol adj = sym.adjoint();

  ProbeResult result;
  result.p = p;
  result.seed = seed;
  result.L = g.L;
  result.sizes = {g.n};

  // baseline: pure wave at the lattice argmax of |m|, ratio = max |m|
  {
    const Field wave = wave_witness(g, sym.argmax_abs());
    ProbeRow row{g.n, p, "wave-argmax", seed, rated(wave, sym, p),
                 0.0,  0, 0};
    result.rows.push_back(std::move(row));
  }

  for (const Strategy s : strategies) {
    std::vector<Scored> scored(static_cast<std::size_t>(trials));
    parallel_for(scored.size(), [&](std::size_t t) {
      const Field f = strategy_field(s, g, seed, static_cast<int>(t));
      if (s == Strategy::Ascent) {
        scored[t] = ascent_score(f, sym, adj, p, kAscentIterations);
      } else {
        scored[t] = Scored{rated(f, sym, p), 0};
      }
    });
    ProbeRow row{g.n, p, strategy_name(s), seed, 0.0, 0.0, 0, 0};
    for (int t = 0; t < trials; ++t) {
      if (scored[static_cast<std::size_t>(t)].ratio > row.ratio) {
        row.ratio = scored[static_cast<std::size_t>(t)].ratio;
        row.trial = t;
        row.iteration = scored[static_cast<std::size_t>(t)].iteration;
      }
    }
    result.rows.push_back(std::move(row));
  }

  double best = 0.0;
  for (const ProbeRow& r : result.rows) best = std::max(best, r.ratio);
  result.best_ratios = {best};
  return result;
}

ProbeResult sweep_refinement(const HomogeneousMultiplier& m, double p,
                             std::span<const int> sizes,
                             std::span<const Strategy> strategies, int trials,
                             std::uint64_t seed, double L) {
  if (sizes.empty())
    throw std::invalid_argument("sweep_refinement: no sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    if (!(sizes[i] < sizes[i + 1]))
      throw std::invalid_argument("sweep_refinement: sizes must ascend");
  ProbeResult result;
  result.p = p;
  result.seed = seed;
  result.L = L;
  std::vector<ProbeRow> prev_rows;
  for (const int n : sizes) {
    const Grid g = fields::make_grid(m.d, n, L);
    ProbeResult one = probe_norm(m, p, g, strategies, trials, seed);
    for (ProbeRow& row : one.rows) {
      for (const ProbeRow& pr : prev_rows)
        if (pr.strategy == row.strategy && pr.ratio > 0.0)
          row.growth = row.ratio / pr.ratio;
      result.rows.push_back(row);
    }
    prev_rows = one.rows;
    result.sizes.push_back(n);
    result.best_ratios.push_back(one.best_ratios.front());
  }
  for (std::size_t i = 0; i + 1 < result.best_ratios.size(); ++i)
    result.growth.push_back(result.best_ratios[i + 1] /
                            std::max(result.best_ratios[i], 1e-300));
  return result;
}

Field rebuild_witness(const HomogeneousMultiplier& m, double p, const Grid& g,
                      const ProbeRow& row) {
  if (row.strategy == "wave-argmax") {
    const fields::CachedSymbol sym = fields::precompute_symbol(g, m.symbol());
    return wave_witness(g, sym.argmax_abs());
  }
  const Strategy s = strategy_from_name(row.strategy);
  Field f = strategy_field(s, g, row.seed, row.trial);
  if (s != Strategy::Ascent) return f;
  // replay the ascent up to the recorded best iteration
  const fields::CachedSymbol sym = fields::precompute_symbol(g, m.symbol());
  const fields::CachedSymbol adj = sym.adjoint();
  const double pp = p / (p - 1.0);
  for (int it = 0; it < row.iteration; ++it) {
    Field gfield = fields::apply_symbol(f, sym);
    double gmax = 0.0;
    for (const cplx& z : gfield.samples) gmax = std::max(gmax, std::abs(z));
    if (gmax == 0.0) break;
    const double floor = 1e-12 * gmax;
    for (cplx& z : gfield.samples) {
      const double a = std::abs(z);
      z = a > floor ? z * std::pow(a, p - 2.0) : cplx(0.0);
    }
    Field next = fields::apply_symbol(gfield, adj);
    double nmax = 0.0;
    for (const cplx& z : next.samples) nmax = std::max(nmax, std::abs(z));
    if (nmax == 0.0) break;
    const double nfloor = 1e-12 * nmax;
    for (cplx& z : next.samples) {
      const double a = std::abs(z);
      z = a > nfloor ? z * std::pow(a, pp - 2.0) : cplx(0.0);
    }
    f = drop_hyperplane_row(next);
  }
  return f;
}

namespace {

// L_k composed with the sharp cutoff in one symbol pass.
Field apply_Lk_S(const Field& f, std::array<int, 2> k, int kappa, double s) {
  return fields::apply_symbol(f, [k, kappa, s](std::span<const double> xi) {
    if (!multiplier::s_cut_passes(kappa, s, xi[0], xi[1])) return cplx(0.0);
    return cplx(dyadic::eval_beta(std::ldexp(xi[0], k[0])) *
                dyadic::eval_beta(std::ldexp(xi[1], k[1])));
  });
}

double weighted_l2_sq(const Field& f, const WeightField& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    acc += std::norm(f.samples[i]) * w.v[i];
  return acc * f.grid.cell_volume();
}

}  // namespace

ChainReport weighted_chain_check(const Field& f, const WeightField& omega,
                                 const BoundaryData& h, std::array<int, 2> k,
                                 int nodes) {
  if (!(f.grid == omega.grid))
    throw std::invalid_argument("weighted_chain_check: grid mismatch");
  if (!h.differentiable())
    throw std::invalid_argument(
        "weighted_chain_check: boundary data has no symbolic derivative");
  const int kappa = k[0] - k[1];
  const auto rule = multiplier::h_kappa_rule(nodes);

  ChainReport report;
  Field recon = fields::make_field(f.grid);
  double rhs_sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const cplx hp = multiplier::eval_h_kappa_deriv(h, kappa, rule.nodes[j]);
    const double w = rule.weights[j];
    report.a_disc += w * std::abs(hp);
    if (hp == cplx(0.0)) continue;
    const Field slice = apply_Lk_S(f, k, kappa, rule.nodes[j]);
    for (std::size_t i = 0; i < recon.samples.size(); ++i)
      recon.samples[i] += w * hp * slice.samples[i];
    rhs_sum += w * std::abs(hp) * weighted_l2_sq(slice, omega);
  }
  report.lhs = weighted_l2_sq(recon, omega);
  report.rhs = report.a_disc * rhs_sum;
  report.margin = report.rhs - report.lhs;
  report.normalized_margin =
      report.margin / std::max({report.rhs, report.lhs, 1e-300});
  return report;
}

EndpointReport weighted_endpoint_check(const Field& f,
                                       const WeightField& omega,
                                       const BoundaryData& h,
                                       std::array<int, 2> k, double alpha,
                                       int nodes) {
  if (!(f.grid == omega.grid))
    throw std::invalid_argument("weighted_endpoint_check: grid mismatch");
  if (!(alpha > 1.0))
    throw std::invalid_argument("weighted_endpoint_check: need alpha > 1");
  if (!h.differentiable())
    throw std::invalid_argument(
        "weighted_endpoint_check: boundary data has no symbolic derivative");
  const int kappa = k[0] - k[1];
  const auto rule = multiplier::h_kappa_rule(nodes);

  EndpointReport report;
  WeightField omega_a = omega;
  for (double& x : omega_a.v) x = std::pow(x, alpha);
  WeightField inner = maximal::make_weight(omega.grid);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double hp =
        std::abs(multiplier::eval_h_kappa_deriv(h, kappa, rule.nodes[j]));
    report.a_disc += rule.weights[j] * hp;
    if (hp == 0.0) continue;
    const WeightField md =
        maximal::directional_maximal(omega_a, kappa, rule.nodes[j]);
    const double coeff = rule.weights[j] * hp;
    for (std::size_t i = 0; i < inner.v.size(); ++i)
      inner.v[i] += coeff * std::pow(md.v[i], 1.0 / alpha);
  }
  const WeightField mm = maximal::strong_maximal(inner);

  const Field tf = multiplier::apply_Tk(f, h, k, /*first_quadrant_only=*/true);
  report.lhs = weighted_l2_sq(tf, omega);
  double rhs = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    rhs += std::norm(f.samples[i]) * mm.v[i];
  report.rhs_integral = rhs * f.grid.cell_volume();
  report.ratio =
      report.lhs / std::max(report.a_disc * report.rhs_integral, 1e-300);
  return report;
}

HomogeneousMultiplier generate_kakeya_family(const CounterexampleSpec& spec) {
  const int N = spec.num_directions;
  if (N < 1 || (N & (N - 1)) != 0)
    throw std::invalid_argument(
        "generate_kakeya_family: num_directions must be a power of two");
  if (!(spec.bump_width > 0.0 && spec.bump_width < 1.0 / N))
    throw std::invalid_argument(
        "generate_kakeya_family: bump_width must lie in (0, 1/N)");

  std::vector<BoundaryData::PlaneBump> bumps;
  bumps.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    double amp = 1.0;
    switch (spec.profile) {
      case CounterexampleSpec::AmplitudeProfile::Uniform: break;
      case CounterexampleSpec::AmplitudeProfile::Alternating:
        amp = (i % 2 == 0) ? 1.0 : -1.0;
        break;
      case CounterexampleSpec::AmplitudeProfile::SqrtDecay:
        amp = 1.0 / std::sqrt(1.0 + i);
        break;
    }
    // lacunary fan of slopes 2^{-i} through a common center
    const double angle = std::atan(std::ldexp(1.0, -i));
    bumps.push_back({cplx(amp, 0.0), {1.0, 1.0}, angle, 0.45,
                     spec.bump_width});
  }
  BoundaryData g = BoundaryData::plane_bumps(std::move(bumps));

  const double t[] = {1.0, 1.0};
  const double raw =
      norms::multiparam_sobolev(g, t, spec.q, spec.alpha, spec.norm_grid_n);
  if (!(raw > 0.0) || !std::isfinite(raw))
    throw std::runtime_error(
        "generate_kakeya_family: normalization infeasible (budget " +
        std::to_string(raw) + ")");
  const double scale = 0.95 / raw;
  nlohmann::json gj = g.to_json();
  for (auto& b : gj.at("bumps")) {
    b["amp_re"] = b["amp_re"].get<double>() * scale;
    b["amp_im"] = b["amp_im"].get<double>() * scale;
  }
  BoundaryData scaled = BoundaryData::from_json(gj);
  const double check = norms::multiparam_sobolev(scaled, t, spec.q,
                                                 spec.alpha,
                                                 spec.norm_grid_n);
  if (!(check >= 0.9 && check <= 1.0))
    throw std::runtime_error(
        "generate_kakeya_family: normalization check failed (" +
        std::to_string(check) + ")");
  return HomogeneousMultiplier{scaled, scaled, 3};
}

double sharpness_threshold(double p, double q) {
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("sharpness_threshold: need 1 < p <= 2");
  if (!(q >= 1.0))
    throw std::invalid_argument("sharpness_threshold: need q >= 1");
  if (p < 4.0 / 3.0) return 2.0 / p - 1.5 + 1.0 / q;
  return 1.0 / q;
}

}  // namespace marcink::probe
