#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "marcink/fields.hpp"

namespace marcink::maximal {

// Nonnegative real samples on a periodic grid.
struct WeightField {
  fields::Grid grid;
  std::vector<double> v;
};

WeightField make_weight(const fields::Grid& g, double fill = 0.0);
WeightField abs_weight(const fields::Field& f);
fields::Field to_field(const WeightField& w);

// Discrete periodic Hardy-Littlewood maximal function along one coordinate
// axis (1-based). Windows are all dyadic cell counts up to the period, so
// the output is within a factor two of the all-lengths maximal function
// and dominates the input pointwise.
WeightField hl_maximal_axis(const WeightField& w, int axis);

// Maximal averages along digital lines of direction (1, -2^{-kappa} s);
// requires s in [1/8, 8] and a d = 2 grid.
WeightField directional_maximal(const WeightField& w, int kappa, double s);

// Iterated coordinate maximal function M_(1) M_(2).
WeightField strong_maximal(const WeightField& w);

using LambdaFn = std::function<double(int kappa, double s)>;

// sup_{kappa in window} int_{1/8}^{8} (M_{kappa,s} w^alpha)^{1/alpha}
// |lambda_kappa(s)| ds, quadrature over s.
WeightField lacunary_maximal(const WeightField& w, double alpha,
                             const LambdaFn& lambda, int kappa_min,
                             int kappa_max, int quad_nodes);

// Even nonnegative band-limited smoothing profile: phi = g^2 with g_hat a
// bump supported in [-1/40, 1/40], so phi_hat lives in [-1/20, 1/20] and
// phi >= 0 with phi(0) > 0.
struct SmoothingProfile {
  double phi_hat(double u) const;  // autoconvolution table, phi_hat(0) = 1
  double phi(double x) const;      // quadrature evaluation (test support)
  double split_rho(double r) const;  // 1 for r <= 1/2, 0 for r >= 1
};
const SmoothingProfile& default_profile();

// psi(xi) = phi_hat(xi_1 + xi_2) split into a unit-ball part (Near) and a
// part supported in the cone |xi_1 + xi_2| / |xi| <= 1/2 (Cone);
// Near + Cone = All exactly by construction.
enum class ProjectionPart { All, Cone, Near };

// Symbol psi_part(2^l xi_1, s 2^{l-kappa} xi_2) applied to w.
fields::Field smoothed_projection(const fields::Field& w, int kappa, double s,
                                  int l, ProjectionPart part);

// l-range over which the projection symbol meets the lattice, capped to
// `width` values from below.
std::pair<int, int> projection_l_window(const fields::Grid& g, int kappa,
                                        double s, int width = 16);

// max_x |P^{l,near} w| / (M_(1) M_(2) w)
double near_domination_ratio(const WeightField& w, int kappa, double s,
                             int l);
// max_x |P^{l,cone} w| / (M_(1) M_(2) w + M_{kappa,s} w)
double cone_domination_ratio(const WeightField& w, int kappa, double s,
                             int l);

struct SupBoundReport {
  std::vector<int> window_sizes;
  std::vector<double> ratios;  // || sup_kappa ... ||_p / ||w||_p
  std::vector<double> growth;  // consecutive ratio quotients
  int quad_nodes = 0;
  int l_width = 0;
};

// || sup_{|kappa| <= N} int sup_l |P^l_{kappa s} w| |lambda_kappa| ds ||_p
// over ||w||_p for each window size N.
SupBoundReport lacunary_sup_bound_check(const WeightField& w,
                                        std::span<const int> window_sizes,
                                        const LambdaFn& lambda, double p,
                                        int quad_nodes = 8, int l_width = 12);

}  // namespace marcink::maximal
