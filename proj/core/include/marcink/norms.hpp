#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marcink/multiplier.hpp"

namespace marcink::norms {

using multiplier::BoundaryData;
using multiplier::HomogeneousMultiplier;

struct KWindow {
  int k_min = -20;
  int k_max = 20;
};

// Total variation of h over a closed interval, exact for the step families
// (jumps enumerated), closed-form or adaptive quadrature for the analytic
// families, sampled partition for tables. Univariate h only.
double tv_on_interval(const BoundaryData& h, double a, double b);

// sup over the window of the variation over I_k (both components).
double tv_marcinkiewicz(const BoundaryData& h, KWindow w = {});

// sup_k ( int_{I_k} |s h'(s)|^r ds/s )^{1/r}; analytic families only.
double r_condition(const BoundaryData& h, double r, KWindow w = {});

// q-variation over [a, b]: sup over partitions drawn from a dense sample
// grid (uniform samples plus exact jump locations) of (sum |dh|^q)^{1/q}.
// Dynamic programming over local extrema for real-valued data, over all
// sample points otherwise.
double vq_norm(const BoundaryData& h, double q, double a, double b,
               int samples = 1024);

// q-variation over the two-component set I_k; partitions may straddle the
// gap between the components.
double vq_norm_dyadic(const BoundaryData& h, double q, int k,
                      int samples = 1024);

// The DP kernel: q-variation of a fixed ordered value sequence.
double vq_from_samples(std::span<const multiplier::cplx> values, double q);

// || beta h(t .) ||_{L^q_alpha(R)} on a 1-d grid (half period 4).
double localized_sobolev(const BoundaryData& h, double t, double q,
                         double alpha, int grid_n = 2048);

// Multiparameter Sobolev (quasi)norm of the beta-localized dilate of g:
// L^q norm of ( sum_n 4^{alpha(n_1+...)} |band_n|^2 )^{1/2} over the
// inhomogeneous band decomposition. Supports q <= 1.
double multiparam_sobolev(const BoundaryData& g, std::span<const double> t,
                          double q, double alpha, int grid_n = 128);

// Product Fourier weight prod_j (1 + |xi_j|^2)^{a_j/2} applied to the
// localized dilate of g, then the L^q norm.
double mixed_derivative_norm(const BoundaryData& g, std::span<const double> t,
                             std::span<const double> a, double q,
                             int grid_n = 128);

// One-parameter Sobolev weight (1 + |xi|^2)^{alpha/2} on the localized
// dilate (used for the isotropic-regularity criterion in d >= 3).
double oneparam_sobolev(const BoundaryData& g, std::span<const double> t,
                        double q, double alpha, int grid_n = 128);

struct ConditionEntry {
  std::string condition;  // e.g. "dyadic-variation", "q-variation"
  std::string boundary;   // "plus" | "minus"
  std::map<std::string, double> params;
  double value = 0.0;
  bool converged = false;
  double marginal_change = 0.0;
  std::string window;
  std::string predicted_range;  // filled when the entry certifies a range
};

struct PredictedRange {
  std::string rule;  // boundedness criterion that produced the range
  double p_lo = 1.0;
  double p_hi = std::numeric_limits<double>::infinity();
  std::string space;
  std::string note;
  std::map<std::string, double> params;
};

struct ConditionReport {
  int d = 2;
  std::vector<ConditionEntry> entries;
  std::vector<PredictedRange> ranges;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct ReportParams {
  KWindow k_window{-20, 20};
  int t_points = 33;           // log-uniform per axis
  double t_log2_min = -8.0;
  double t_log2_max = 8.0;
  std::vector<double> qs{1.5, 2.0, 3.0};
  std::vector<double> alphas;  // per-q defaults (1/q + 0.25) when empty
  std::vector<double> rs{1.0, 2.0};
  std::vector<double> hardy_rs{1.0};
  int sobolev_grid_n = 2048;
  int multiparam_grid_n = 128;
  int vq_samples = 1024;
};

ConditionReport build_report(const HomogeneousMultiplier& m,
                             const ReportParams& params = {});

}  // namespace marcink::norms
