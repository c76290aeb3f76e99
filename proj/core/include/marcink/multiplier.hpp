#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marcink/fields.hpp"
#include "marcink/quadrature.hpp"

namespace marcink::multiplier {

using cplx = std::complex<double>;

// Boundary function h (one variable) or g (d-1 variables) defining a
// homogeneous multiplier by restriction to xi_d = +-1. Analytic families
// carry symbolic derivatives; sampled tables interpolate monotone-cubicly
// with constant continuation outside the sampled range.
class BoundaryData {
 public:
  enum class Kind {
    Constant,
    Sign,
    IntervalIndicator,
    PowerOscillation,  // s -> |s|^{i tau}
    LogSine,           // s -> sin(tau log|s|)
    LacunarySteps,     // sum_k eps_k chi_{|s| <= 2^{-k}}
    SmoothBumps,       // sum_j c_j beta((s - a_j) / w_j)
    SampledTable,
    Tensor,      // product of univariate factors
    PlaneBumps,  // anisotropic C-inf bumps in the plane (dim 2)
  };

  struct Bump {
    cplx amplitude;
    double center;
    double width;
  };

  struct PlaneBump {
    cplx amplitude;
    std::array<double, 2> center;
    double angle;     // orientation of the long axis
    double half_len;  // support half-extent along the long axis
    double half_wid;  // support half-extent across
  };

  struct Jump {
    double pos;
    cplx left, at, right;
  };

  static BoundaryData constant(cplx value, int dim = 1);
  static BoundaryData sign();
  static BoundaryData interval_indicator(double a, double b);
  static BoundaryData power_oscillation(double tau);
  static BoundaryData log_sine(double tau);
  static BoundaryData lacunary_steps(int k0, std::vector<double> eps);
  static BoundaryData smooth_bumps(std::vector<Bump> bumps);
  static BoundaryData sampled_table(std::vector<double> abscissae,
                                    std::vector<cplx> values);
  static BoundaryData tensor(std::vector<BoundaryData> factors);
  static BoundaryData plane_bumps(std::vector<PlaneBump> bumps);

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  int dim() const { return dim_; }

  cplx eval(std::span<const double> s) const;
  cplx eval1(double s) const;

  // Symbolic derivative; only analytic univariate families support it.
  bool differentiable() const;
  cplx deriv1(double s) const;

  // Exact jump structure on [a, b] for the piecewise-constant families;
  // empty for smooth families. Sorted by position.
  std::vector<Jump> jumps_in(double a, double b) const;
  bool is_step_like() const;

  // Sup of |h| (exact for analytic families, sampled bound otherwise).
  double sup_abs() const;

  const std::vector<BoundaryData>& factors() const { return factors_; }
  const std::vector<double>& table_abscissae() const { return abscissae_; }

  nlohmann::json to_json() const;
  static BoundaryData from_json(const nlohmann::json& j);

 private:
  BoundaryData() = default;

  Kind kind_ = Kind::Constant;
  int dim_ = 1;
  cplx value_{0.0, 0.0};
  double a_ = 0.0, b_ = 0.0;  // interval bounds / tau
  int k0_ = 0;
  std::vector<double> eps_;
  std::vector<Bump> bumps_;
  std::vector<PlaneBump> plane_bumps_;
  std::vector<double> abscissae_;
  std::vector<cplx> table_values_;
  std::vector<cplx> table_slopes_;  // Fritsch-Carlson tangents
  std::vector<BoundaryData> factors_;
};

// Homogeneous degree-zero multiplier determined by its boundary data via
// m(xi', +-1) = g_{+-}(xi'). Evaluation uses ratios only, so positive
// scaling invariance is bitwise; the hyperplane {xi_d = 0} maps to 0.
struct HomogeneousMultiplier {
  BoundaryData plus;
  BoundaryData minus;
  int d = 2;

  cplx eval(std::span<const double> xi) const;
  fields::SymbolFn symbol() const;

  nlohmann::json to_json() const;
  static HomogeneousMultiplier from_json(const nlohmann::json& j);
};

// h_kappa(s) = gamma~(s) h(2^{-kappa} s); supported in |s| in (1/4, 4).
cplx eval_h_kappa(const BoundaryData& h, int kappa, double s);

// Full derivative d/ds [gamma~(s) h(2^{-kappa} s)] (analytic families).
cplx eval_h_kappa_deriv(const BoundaryData& h, int kappa, double s);

// m_k(xi) = beta(xi1) beta(xi2) h_{k1-k2}(xi1/xi2).
cplx eval_m_k(const BoundaryData& h, std::array<int, 2> k, double xi1,
              double xi2);

// The rescaled piece [beta (x) beta m_k](2^{k1} xi1, 2^{k2} xi2); these sum
// to m over k on the open quadrants.
cplx eval_m_k_rescaled(const BoundaryData& h, std::array<int, 2> k, double xi1,
                       double xi2);

// T_k: Fourier multiplier with symbol [beta (x) beta m_k](2^{k1}., 2^{k2}.).
// With first_quadrant_only the symbol is restricted to xi1, xi2 > 0 (the
// decomposition machinery operates on that restriction).
fields::Field apply_Tk(const fields::Field& f, const BoundaryData& h,
                       std::array<int, 2> k, bool first_quadrant_only = false);

// Standard Littlewood-Paley block: symbol beta(2^{k1} xi1) beta(2^{k2} xi2).
fields::Field apply_Lk(const fields::Field& f, std::array<int, 2> k);

// Sharp cutoff S_{kappa,s}: passes xi with 2^kappa xi1/xi2 > s, xi1 >= 0,
// xi2 > 0 (lattice rows with xi2 = 0 are excluded). Requires s > 0.
fields::Field apply_S(const fields::Field& f, int kappa, double s);
bool s_cut_passes(int kappa, double s, double xi1, double xi2);

// Twice-localized sharp slice: symbol beta^2(2^{k1} xi1) beta^2(2^{k2} xi2)
// restricted by the S_{kappa,s} cut. These are the quadrature building
// blocks whose h'-weighted sum reconstructs the first-quadrant part of T_k.
fields::Field apply_Tk_slice(const fields::Field& f, std::array<int, 2> k,
                             int kappa, double s);

// Shared quadrature for s-integrals over [1/8, 8]: segmented Gauss rule with
// breakpoints at the cone-cutoff transition edges {1/4, 25/64, 64/25, 4}.
quadrature::Rule h_kappa_rule(int budget);

// || T_k^{Q1} f - sum_j w_j (slice_j f) h'_kappa(s_j) ||_2 / ||f||_2 with
// the h_kappa_rule quadrature; kappa = k1 - k2.
double tk_integral_representation_check(const fields::Field& f,
                                        const BoundaryData& h,
                                        std::array<int, 2> k, int nodes);

}  // namespace marcink::multiplier
