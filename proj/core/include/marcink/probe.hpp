#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marcink/maximal.hpp"
#include "marcink/multiplier.hpp"

namespace marcink::probe {

using fields::Field;
using fields::Grid;
using maximal::WeightField;
using multiplier::BoundaryData;
using multiplier::HomogeneousMultiplier;

// Witness strategies for operator-norm lower bounds. A pure-wave witness at
// the lattice argmax of |m| is always evaluated in addition (it attains
// max |m| at every p).
enum class Strategy {
  RandomGaussian,
  RectangleIndicators,
  TubeIndicators,
  Ascent,
};

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct ProbeRow {
  int size = 0;
  double p = 2.0;
  std::string strategy;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  double growth = 0.0;  // vs the same strategy at the previous size; 0 first
  int trial = 0;        // best trial for the strategy
  int iteration = 0;    // best ascent iteration (0 for plain witnesses)
};

struct ProbeResult {
  double p = 2.0;
  std::uint64_t seed = 0;
  double L = 3.14159265358979323846;
  std::vector<int> sizes;
  std::vector<double> best_ratios;  // per size, across strategies
  std::vector<double> growth;      // best-ratio quotients between sizes
  std::vector<ProbeRow> rows;

  const ProbeRow& best_row(int size) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;  // size,p,strategy,seed,ratio,growth
};

// Lower-bound probe of the multiplier operator norm on one grid.
ProbeResult probe_norm(const HomogeneousMultiplier& m, double p,
                       const Grid& g, std::span<const Strategy> strategies,
                       int trials, std::uint64_t seed);

// Matched-seed probes across grid sizes, with growth factors.
ProbeResult sweep_refinement(const HomogeneousMultiplier& m, double p,
                             std::span<const int> sizes,
                             std::span<const Strategy> strategies, int trials,
                             std::uint64_t seed,
                             double L = 3.14159265358979323846);

// Rebuild the exact field a probe row scored (bitwise reproducible).
Field rebuild_witness(const HomogeneousMultiplier& m, double p, const Grid& g,
                      const ProbeRow& row);

// Cauchy-Schwarz transfer at matched quadrature: with slices
// F_j = L_k S_{kappa,s_j} f and the reconstruction sum_j w_j h' F_j, the
// weighted integral of the reconstruction is dominated by
// a_disc * sum_j w_j |h'(s_j)| int |F_j|^2 omega. Exact on discrete sums.
struct ChainReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double a_disc = 0.0;
  double margin = 0.0;             // rhs - lhs
  double normalized_margin = 0.0;  // margin / max(rhs, eps)
};

ChainReport weighted_chain_check(const Field& f, const WeightField& omega,
                                 const BoundaryData& h, std::array<int, 2> k,
                                 int nodes);

// Weighted transfer inequality with the assembled maximal operator:
// int |T_k f|^2 omega vs a_disc * int |f|^2 M_(1)M_(2)[ sum_j w_j |h'|
// (M_{kappa,s_j} omega^alpha)^{1/alpha} ].
struct EndpointReport {
  double lhs = 0.0;
  double a_disc = 0.0;
  double rhs_integral = 0.0;
  double ratio = 0.0;  // lhs / (a_disc * rhs_integral)
};

EndpointReport weighted_endpoint_check(const Field& f,
                                       const WeightField& omega,
                                       const BoundaryData& h,
                                       std::array<int, 2> k, double alpha,
                                       int nodes);

// Exploratory boundary family: bumps of prescribed width along a lacunary
// direction fan through a common center, amplitudes normalized so the
// multiparameter Sobolev budget at (q, alpha) lands in [0.9, 1.0].
struct CounterexampleSpec {
  int num_directions = 8;   // power of two
  double bump_width = 0.05;  // must be < 1 / num_directions
  enum class AmplitudeProfile { Uniform, Alternating, SqrtDecay };
  AmplitudeProfile profile = AmplitudeProfile::Uniform;
  double q = 2.0;
  double alpha = 0.75;
  int norm_grid_n = 128;
};

HomogeneousMultiplier generate_kakeya_family(const CounterexampleSpec& spec);

// Necessary regularity threshold: 2/p - 3/2 + 1/q on (1, 4/3), 1/q on
// [4/3, 2]. Requires 1 < p <= 2 and q >= 1.
double sharpness_threshold(double p, double q);

}  // namespace marcink::probe
