#include "marcink/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "marcink/dyadic.hpp"
#include "marcink/quadrature.hpp"

namespace marcink::multiplier {

namespace {

using dyadic::eval_beta;
using dyadic::eval_beta_sq;
using dyadic::eval_gamma_ratio;
using dyadic::eval_gamma_ratio_deriv;

// C-infinity bump on (-1, 1), value 1 at the origin.
double bump01(double u) {
  if (std::fabs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// Fritsch-Carlson tangents for a real data column.
std::vector<double> fc_tangents(const std::vector<double>& x,
                                const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) m[i] = 0.5 * (d[i - 1] + d[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = 0.0;
      m[i + 1] = 0.0;
      continue;
    }
    double a = m[i] / d[i];
    double b = m[i + 1] / d[i];
    if (a < 0.0) {
      m[i] = 0.0;
      a = 0.0;
    }
    if (b < 0.0) {
      m[i + 1] = 0.0;
      b = 0.0;
    }
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m[i] = t * a * d[i];
      m[i + 1] = t * b * d[i];
    }
  }
  return m;
}

double hermite(double x0, double x1, double y0, double y1, double m0,
               double m1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
}

}  // namespace

BoundaryData BoundaryData::constant(cplx value, int dim) {
  BoundaryData b;
  b.kind_ = Kind::Constant;
  b.dim_ = dim;
  b.value_ = value;
  return b;
}

BoundaryData BoundaryData::sign() {
  BoundaryData b;
  b.kind_ = Kind::Sign;
  return b;
}

BoundaryData BoundaryData::interval_indicator(double a, double bnd) {
  if (!(a < bnd))
    throw std::invalid_argument("interval_indicator: need a < b");
  BoundaryData b;
  b.kind_ = Kind::IntervalIndicator;
  b.a_ = a;
  b.b_ = bnd;
  return b;
}

BoundaryData BoundaryData::power_oscillation(double tau) {
  BoundaryData b;
  b.kind_ = Kind::PowerOscillation;
  b.a_ = tau;
  return b;
}

BoundaryData BoundaryData::log_sine(double tau) {
  BoundaryData b;
  b.kind_ = Kind::LogSine;
  b.a_ = tau;
  return b;
}

BoundaryData BoundaryData::lacunary_steps(int k0, std::vector<double> eps) {
  if (eps.empty()) throw std::invalid_argument("lacunary_steps: empty eps");
  BoundaryData b;
  b.kind_ = Kind::LacunarySteps;
  b.k0_ = k0;
  b.eps_ = std::move(eps);
  return b;
}

BoundaryData BoundaryData::smooth_bumps(std::vector<Bump> bumps) {
  if (bumps.empty()) throw std::invalid_argument("smooth_bumps: empty list");
  for (const Bump& bp : bumps)
    if (!(bp.width > 0.0))
      throw std::invalid_argument("smooth_bumps: widths must be positive");
  BoundaryData b;
  b.kind_ = Kind::SmoothBumps;
  b.bumps_ = std::move(bumps);
  return b;
}

BoundaryData BoundaryData::sampled_table(std::vector<double> abscissae,
                                         std::vector<cplx> values) {
  if (abscissae.size() < 2 || abscissae.size() != values.size())
    throw std::invalid_argument("sampled_table: need >= 2 matched samples");
  for (std::size_t i = 0; i + 1 < abscissae.size(); ++i)
    if (!(abscissae[i] < abscissae[i + 1]))
      throw std::invalid_argument("sampled_table: abscissae must increase");
  BoundaryData b;
  b.kind_ = Kind::SampledTable;
  b.abscissae_ = std::move(abscissae);
  b.table_values_ = std::move(values);
  std::vector<double> re(b.table_values_.size()), im(b.table_values_.size());
  for (std::size_t i = 0; i < b.table_values_.size(); ++i) {
    re[i] = b.table_values_[i].real();
    im[i] = b.table_values_[i].imag();
  }
  const auto mre = fc_tangents(b.abscissae_, re);
  const auto mim = fc_tangents(b.abscissae_, im);
  b.table_slopes_.resize(b.table_values_.size());
  for (std::size_t i = 0; i < b.table_values_.size(); ++i)
    b.table_slopes_[i] = cplx(mre[i], mim[i]);
  return b;
}

BoundaryData BoundaryData::tensor(std::vector<BoundaryData> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factors");
  for (const BoundaryData& f : factors)
    if (f.dim() != 1)
      throw std::invalid_argument("tensor: factors must be univariate");
  BoundaryData b;
  b.kind_ = Kind::Tensor;
  b.dim_ = static_cast<int>(factors.size());
  b.factors_ = std::move(factors);
  return b;
}

BoundaryData BoundaryData::plane_bumps(std::vector<PlaneBump> bumps) {
  if (bumps.empty()) throw std::invalid_argument("plane_bumps: empty list");
  BoundaryData b;
  b.kind_ = Kind::PlaneBumps;
  b.dim_ = 2;
  b.plane_bumps_ = std::move(bumps);
  return b;
}

std::string BoundaryData::kind_name() const {
  switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::Sign: return "sign";
    case Kind::IntervalIndicator: return "interval-indicator";
    case Kind::PowerOscillation: return "power-oscillation";
    case Kind::LogSine: return "log-sine";
    case Kind::LacunarySteps: return "lacunary-steps";
    case Kind::SmoothBumps: return "smooth-bumps";
    case Kind::SampledTable: return "sampled-table";
    case Kind::Tensor: return "tensor";
    case Kind::PlaneBumps: return "plane-bumps";
  }
  return "?";
}

cplx BoundaryData::eval1(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Sign:
      return s > 0.0 ? cplx(1.0) : (s < 0.0 ? cplx(-1.0) : cplx(0.0));
    case Kind::IntervalIndicator:
      return (s > a_ && s < b_) ? cplx(1.0) : cplx(0.0);
    case Kind::PowerOscillation: {
      if (s == 0.0) return cplx(1.0);  // declared bounded value at 0
      const double u = a_ * std::log(std::fabs(s));
      return cplx(std::cos(u), std::sin(u));
    }
    case Kind::LogSine: {
      if (s == 0.0) return cplx(0.0);
      return cplx(std::sin(a_ * std::log(std::fabs(s))), 0.0);
    }
    case Kind::LacunarySteps: {
      const double a = std::fabs(s);
      double acc = 0.0;
      for (std::size_t i = 0; i < eps_.size(); ++i) {
        const int k = k0_ + static_cast<int>(i);
        if (a <= std::ldexp(1.0, -k)) acc += eps_[i];
      }
      return cplx(acc, 0.0);
    }
    case Kind::SmoothBumps: {
      cplx acc(0.0);
      for (const Bump& bp : bumps_)
        acc += bp.amplitude * eval_beta((s - bp.center) / bp.width);
      return acc;
    }
    case Kind::SampledTable: {
      if (s <= abscissae_.front()) return table_values_.front();
      if (s >= abscissae_.back()) return table_values_.back();
      const auto it =
          std::upper_bound(abscissae_.begin(), abscissae_.end(), s);
      const std::size_t i = static_cast<std::size_t>(
          std::distance(abscissae_.begin(), it)) - 1;
      const double re =
          hermite(abscissae_[i], abscissae_[i + 1], table_values_[i].real(),
                  table_values_[i + 1].real(), table_slopes_[i].real(),
                  table_slopes_[i + 1].real(), s);
      const double im =
          hermite(abscissae_[i], abscissae_[i + 1], table_values_[i].imag(),
                  table_values_[i + 1].imag(), table_slopes_[i].imag(),
                  table_slopes_[i + 1].imag(), s);
      return cplx(re, im);
    }
    default:
      throw std::invalid_argument("eval1: boundary data is not univariate");
  }
}

cplx BoundaryData::eval(std::span<const double> s) const {
  if (static_cast<int>(s.size()) != dim_)
    throw std::invalid_argument("BoundaryData::eval: dimension mismatch");
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Tensor: {
      cplx prod(1.0);
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        prod *= factors_[i].eval1(s[i]);
        if (prod == cplx(0.0)) return prod;
      }
      return prod;
    }
    case Kind::PlaneBumps: {
      cplx acc(0.0);
      for (const PlaneBump& pb : plane_bumps_) {
        const double u0 = s[0] - pb.center[0];
        const double u1 = s[1] - pb.center[1];
        const double c = std::cos(pb.angle), sn = std::sin(pb.angle);
        const double along = (c * u0 + sn * u1) / pb.half_len;
        const double across = (-sn * u0 + c * u1) / pb.half_wid;
        acc += pb.amplitude * bump01(along) * bump01(across);
      }
      return acc;
    }
    default:
      return eval1(s[0]);
  }
}

bool BoundaryData::differentiable() const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::PowerOscillation:
    case Kind::LogSine:
    case Kind::SmoothBumps:
      return dim_ == 1;
    default:
      return false;
  }
}

cplx BoundaryData::deriv1(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return cplx(0.0);
    case Kind::PowerOscillation: {
      if (s == 0.0) return cplx(0.0);
      return cplx(0.0, a_) / s * eval1(s);
    }
    case Kind::LogSine: {
      if (s == 0.0) return cplx(0.0);
      return cplx(a_ * std::cos(a_ * std::log(std::fabs(s))) / s, 0.0);
    }
    case Kind::SmoothBumps: {
      cplx acc(0.0);
      for (const Bump& bp : bumps_)
        acc += bp.amplitude *
               dyadic::eval_beta_deriv((s - bp.center) / bp.width) / bp.width;
      return acc;
    }
    default:
      throw std::invalid_argument(
          "deriv1: no symbolic derivative for kind " + kind_name());
  }
}

std::vector<BoundaryData::Jump> BoundaryData::jumps_in(double a,
                                                       double b) const {
  std::vector<Jump> out;
  auto push = [&](double pos, cplx left, cplx at, cplx right) {
    if (pos >= a && pos <= b) out.push_back({pos, left, at, right});
  };
  switch (kind_) {
    case Kind::Sign:
      push(0.0, cplx(-1.0), cplx(0.0), cplx(1.0));
      break;
    case Kind::IntervalIndicator:
      push(a_, cplx(0.0), cplx(0.0), cplx(1.0));
      push(b_, cplx(1.0), cplx(0.0), cplx(0.0));
      break;
    case Kind::LacunarySteps: {
      for (std::size_t i = 0; i < eps_.size(); ++i) {
        const int k = k0_ + static_cast<int>(i);
        const double p = std::ldexp(1.0, -k);
        const cplx lo = eval1(std::nextafter(p, 0.0));
        const cplx hi = eval1(std::nextafter(p, 2.0 * p));
        push(p, lo, eval1(p), hi);
        push(-p, eval1(std::nextafter(-p, -2.0 * p)), eval1(-p),
             eval1(std::nextafter(-p, 0.0)));
      }
      break;
    }
    default:
      break;
  }
  std::sort(out.begin(), out.end(),
            [](const Jump& x, const Jump& y) { return x.pos < y.pos; });
  return out;
}

bool BoundaryData::is_step_like() const {
  switch (kind_) {
    case Kind::Sign:
    case Kind::IntervalIndicator:
    case Kind::LacunarySteps:
      return true;
    default:
      return false;
  }
}

double BoundaryData::sup_abs() const {
  switch (kind_) {
    case Kind::Constant:
      return std::abs(value_);
    case Kind::Sign:
    case Kind::IntervalIndicator:
    case Kind::PowerOscillation:
    case Kind::LogSine:
      return 1.0;
    case Kind::LacunarySteps: {
      double best = 0.0, acc = 0.0;
      // partial sums from the smallest scale upward
      for (std::size_t i = eps_.size(); i-- > 0;) {
        acc += eps_[i];
        best = std::max(best, std::fabs(acc));
      }
      return best;
    }
    case Kind::SmoothBumps: {
      double bound = 0.0;
      for (const Bump& bp : bumps_) bound += std::abs(bp.amplitude);
      return bound;
    }
    case Kind::SampledTable: {
      double m = 0.0;
      for (const cplx& v : table_values_) m = std::max(m, std::abs(v));
      return m;
    }
    case Kind::Tensor: {
      double prod = 1.0;
      for (const BoundaryData& f : factors_) prod *= f.sup_abs();
      return prod;
    }
    case Kind::PlaneBumps: {
      double bound = 0.0;
      for (const PlaneBump& pb : plane_bumps_) bound += std::abs(pb.amplitude);
      return bound;
    }
  }
  return 0.0;
}

nlohmann::json BoundaryData::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name();
  switch (kind_) {
    case Kind::Constant:
      j["dim"] = dim_;
      j["re"] = value_.real();
      j["im"] = value_.imag();
      break;
    case Kind::Sign:
      break;
    case Kind::IntervalIndicator:
      j["a"] = a_;
      j["b"] = b_;
      break;
    case Kind::PowerOscillation:
    case Kind::LogSine:
      j["tau"] = a_;
      break;
    case Kind::LacunarySteps:
      j["k0"] = k0_;
      j["eps"] = eps_;
      break;
    case Kind::SmoothBumps: {
      nlohmann::json arr = nlohmann::json::array();
      for (const Bump& bp : bumps_)
        arr.push_back({{"amp_re", bp.amplitude.real()},
                       {"amp_im", bp.amplitude.imag()},
                       {"center", bp.center},
                       {"width", bp.width}});
      j["bumps"] = std::move(arr);
      break;
    }
    case Kind::SampledTable: {
      j["abscissae"] = abscissae_;
      std::vector<double> re, im;
      for (const cplx& v : table_values_) {
        re.push_back(v.real());
        im.push_back(v.imag());
      }
      j["values_re"] = std::move(re);
      j["values_im"] = std::move(im);
      break;
    }
    case Kind::Tensor: {
      nlohmann::json arr = nlohmann::json::array();
      for (const BoundaryData& f : factors_) arr.push_back(f.to_json());
      j["factors"] = std::move(arr);
      break;
    }
    case Kind::PlaneBumps: {
      nlohmann::json arr = nlohmann::json::array();
      for (const PlaneBump& pb : plane_bumps_)
        arr.push_back({{"amp_re", pb.amplitude.real()},
                       {"amp_im", pb.amplitude.imag()},
                       {"center", pb.center},
                       {"angle", pb.angle},
                       {"half_len", pb.half_len},
                       {"half_wid", pb.half_wid}});
      j["bumps"] = std::move(arr);
      break;
    }
  }
  return j;
}

BoundaryData BoundaryData::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant")
    return constant(cplx(j.value("re", 0.0), j.value("im", 0.0)),
                    j.value("dim", 1));
  if (kind == "sign") return sign();
  if (kind == "interval-indicator")
    return interval_indicator(j.at("a").get<double>(),
                              j.at("b").get<double>());
  if (kind == "power-oscillation")
    return power_oscillation(j.at("tau").get<double>());
  if (kind == "log-sine") return log_sine(j.at("tau").get<double>());
  if (kind == "lacunary-steps")
    return lacunary_steps(j.at("k0").get<int>(),
                          j.at("eps").get<std::vector<double>>());
  if (kind == "smooth-bumps") {
    std::vector<Bump> bumps;
    for (const auto& e : j.at("bumps"))
      bumps.push_back({cplx(e.value("amp_re", 0.0), e.value("amp_im", 0.0)),
                       e.at("center").get<double>(),
                       e.at("width").get<double>()});
    return smooth_bumps(std::move(bumps));
  }
  if (kind == "sampled-table") {
    const auto re = j.at("values_re").get<std::vector<double>>();
    const auto im = j.at("values_im").get<std::vector<double>>();
    if (re.size() != im.size())
      throw std::invalid_argument("sampled-table: re/im length mismatch");
    std::vector<cplx> vals(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) vals[i] = cplx(re[i], im[i]);
    return sampled_table(j.at("abscissae").get<std::vector<double>>(),
                         std::move(vals));
  }
  if (kind == "tensor") {
    std::vector<BoundaryData> factors;
    for (const auto& e : j.at("factors")) factors.push_back(from_json(e));
    return tensor(std::move(factors));
  }
  if (kind == "plane-bumps") {
    std::vector<PlaneBump> bumps;
    for (const auto& e : j.at("bumps"))
      bumps.push_back({cplx(e.value("amp_re", 0.0), e.value("amp_im", 0.0)),
                       {e.at("center")[0].get<double>(),
                        e.at("center")[1].get<double>()},
                       e.at("angle").get<double>(),
                       e.at("half_len").get<double>(),
                       e.at("half_wid").get<double>()});
    return plane_bumps(std::move(bumps));
  }
  throw std::invalid_argument("unknown boundary data kind: " + kind);
}

cplx HomogeneousMultiplier::eval(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != d)
    throw std::invalid_argument("HomogeneousMultiplier: dimension mismatch");
  const double xd = xi[d - 1];
  if (xd == 0.0) return cplx(0.0);
  std::array<double, 2> s{};
  const int bdim = d - 1;
  if (xd > 0.0) {
    for (int i = 0; i < bdim; ++i) s[i] = xi[i] / xd;
    return plus.eval(std::span<const double>(s.data(), bdim));
  }
  for (int i = 0; i < bdim; ++i) s[i] = -xi[i] / xd;
  return minus.eval(std::span<const double>(s.data(), bdim));
}

fields::SymbolFn HomogeneousMultiplier::symbol() const {
  HomogeneousMultiplier copy = *this;
  return [copy](std::span<const double> xi) { return copy.eval(xi); };
}

nlohmann::json HomogeneousMultiplier::to_json() const {
  return nlohmann::json{
      {"d", d}, {"plus", plus.to_json()}, {"minus", minus.to_json()}};
}

HomogeneousMultiplier HomogeneousMultiplier::from_json(
    const nlohmann::json& j) {
  HomogeneousMultiplier m{BoundaryData::from_json(j.at("plus")),
                          BoundaryData::from_json(j.at("minus")),
                          j.at("d").get<int>()};
  if (m.d < 2 || m.d > 3)
    throw std::invalid_argument("multiplier: d must be 2 or 3");
  if (m.plus.dim() != m.d - 1 || m.minus.dim() != m.d - 1)
    throw std::invalid_argument("multiplier: boundary dim must be d - 1");
  return m;
}

cplx eval_h_kappa(const BoundaryData& h, int kappa, double s) {
  const double g = eval_gamma_ratio(s);
  if (g == 0.0) return cplx(0.0);
  return g * h.eval1(std::ldexp(s, -kappa));
}

cplx eval_h_kappa_deriv(const BoundaryData& h, int kappa, double s) {
  const double g = eval_gamma_ratio(s);
  const double dg = eval_gamma_ratio_deriv(s);
  cplx out(0.0);
  if (dg != 0.0) out += dg * h.eval1(std::ldexp(s, -kappa));
  if (g != 0.0)
    out += g * std::ldexp(1.0, -kappa) * h.deriv1(std::ldexp(s, -kappa));
  return out;
}

cplx eval_m_k(const BoundaryData& h, std::array<int, 2> k, double xi1,
              double xi2) {
  const double bb = eval_beta(xi1) * eval_beta(xi2);
  if (bb == 0.0) return cplx(0.0);
  return bb * eval_h_kappa(h, k[0] - k[1], xi1 / xi2);
}

cplx eval_m_k_rescaled(const BoundaryData& h, std::array<int, 2> k, double xi1,
                       double xi2) {
  const double e1 = std::ldexp(xi1, k[0]);
  const double e2 = std::ldexp(xi2, k[1]);
  const double bb = eval_beta(e1) * eval_beta(e2);
  if (bb == 0.0) return cplx(0.0);
  return bb * eval_m_k(h, k, e1, e2);
}

namespace {

void require_d2(const fields::Field& f, const char* op) {
  if (f.grid.d != 2)
    throw std::invalid_argument(std::string(op) + ": requires a d = 2 grid");
}

}  // namespace

fields::Field apply_Tk(const fields::Field& f, const BoundaryData& h,
                       std::array<int, 2> k, bool first_quadrant_only) {
  require_d2(f, "apply_Tk");
  return fields::apply_symbol(f, [&, k, first_quadrant_only](
                                     std::span<const double> xi) {
    if (first_quadrant_only && !(xi[0] > 0.0 && xi[1] > 0.0)) return cplx(0.0);
    return eval_m_k_rescaled(h, k, xi[0], xi[1]);
  });
}

fields::Field apply_Lk(const fields::Field& f, std::array<int, 2> k) {
  require_d2(f, "apply_Lk");
  return fields::apply_symbol(f, [k](std::span<const double> xi) {
    return cplx(eval_beta(std::ldexp(xi[0], k[0])) *
                eval_beta(std::ldexp(xi[1], k[1])));
  });
}

bool s_cut_passes(int kappa, double s, double xi1, double xi2) {
  if (!(xi2 > 0.0) || xi1 < 0.0) return false;
  return std::ldexp(xi1, kappa) / xi2 > s;
}

fields::Field apply_S(const fields::Field& f, int kappa, double s) {
  require_d2(f, "apply_S");
  if (!(s > 0.0)) throw std::invalid_argument("apply_S: s must be positive");
  return fields::apply_symbol(f, [kappa, s](std::span<const double> xi) {
    return cplx(s_cut_passes(kappa, s, xi[0], xi[1]) ? 1.0 : 0.0);
  });
}

fields::Field apply_Tk_slice(const fields::Field& f, std::array<int, 2> k,
                             int kappa, double s) {
  require_d2(f, "apply_Tk_slice");
  if (!(s > 0.0))
    throw std::invalid_argument("apply_Tk_slice: s must be positive");
  return fields::apply_symbol(f, [k, kappa, s](std::span<const double> xi) {
    if (!s_cut_passes(kappa, s, xi[0], xi[1])) return cplx(0.0);
    return cplx(eval_beta_sq(std::ldexp(xi[0], k[0])) *
                eval_beta_sq(std::ldexp(xi[1], k[1])));
  });
}

quadrature::Rule h_kappa_rule(int budget) {
  const double breakpoints[] = {0.125, 0.25, 25.0 / 64.0, 64.0 / 25.0, 4.0,
                                8.0};
  return quadrature::segmented_gauss(budget, breakpoints);
}

double tk_integral_representation_check(const fields::Field& f,
                                        const BoundaryData& h,
                                        std::array<int, 2> k, int nodes) {
  require_d2(f, "tk_integral_representation_check");
  if (!h.differentiable())
    throw std::invalid_argument(
        "tk_integral_representation_check: boundary data has no symbolic "
        "derivative");
  const int kappa = k[0] - k[1];
  const auto rule = h_kappa_rule(nodes);

  // Prefix sums of w_j h'_kappa(s_j); the S-cut at ratio r keeps nodes
  // strictly below r, so the reconstructed symbol at r is prefix(r).
  std::vector<cplx> prefix(rule.nodes.size() + 1, cplx(0.0));
  for (std::size_t j = 0; j < rule.nodes.size(); ++j)
    prefix[j + 1] = prefix[j] + rule.weights[j] *
                                    eval_h_kappa_deriv(h, kappa, rule.nodes[j]);

  fields::Field fhat = transform_forward(f);
  double acc = 0.0;
  fields::for_each_freq(f.grid, [&](std::size_t flat,
                                    std::span<const double> xi) {
    if (!(xi[0] > 0.0 && xi[1] > 0.0)) return;
    const double b2 = eval_beta_sq(std::ldexp(xi[0], k[0])) *
                      eval_beta_sq(std::ldexp(xi[1], k[1]));
    if (b2 == 0.0) return;
    const double r = std::ldexp(xi[0], kappa) / xi[1];
    const cplx exact = b2 * eval_h_kappa(h, kappa, r);
    const auto it =
        std::lower_bound(rule.nodes.begin(), rule.nodes.end(), r);
    const cplx quad =
        b2 * prefix[static_cast<std::size_t>(
                 std::distance(rule.nodes.begin(), it))];
    acc += std::norm(exact - quad) * std::norm(fhat.samples[flat]);
  });
  const double fn = fields::lp_norm(f, 2.0);
  if (fn == 0.0) return 0.0;
  return std::sqrt(acc * f.grid.cell_volume()) / fn;
}

}  // namespace marcink::multiplier
