#pragma once

// Shared 20-function boundary-data corpus used by the embedding-consistency
// checks and their calibration.

#include <cmath>
#include <string>
#include <vector>

#include "marcink/multiplier.hpp"

namespace marcink::testsupport {

using multiplier::BoundaryData;
using multiplier::cplx;

struct CorpusEntry {
  std::string name;
  BoundaryData h;
};

inline BoundaryData table_from(double (*re)(double), double (*im)(double)) {
  std::vector<double> xs;
  std::vector<cplx> vs;
  for (int i = 0; i <= 48; ++i) {
    const double x = std::pow(10.0, -3.0 + 6.0 * i / 48.0);
    xs.push_back(x);
    vs.push_back(cplx(re(x), im(x)));
  }
  return BoundaryData::sampled_table(xs, vs);
}

inline std::vector<CorpusEntry> boundary_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back({"const-1", BoundaryData::constant(cplx(1.0))});
  out.push_back({"const-c", BoundaryData::constant(cplx(0.5, -0.3))});
  out.push_back({"sign", BoundaryData::sign()});
  out.push_back({"ind-mid", BoundaryData::interval_indicator(0.75, 1.5)});
  out.push_back({"ind-neg", BoundaryData::interval_indicator(-2.0, -1.0)});
  out.push_back({"osc-0.5", BoundaryData::power_oscillation(0.5)});
  out.push_back({"osc-1", BoundaryData::power_oscillation(1.0)});
  out.push_back({"osc-2", BoundaryData::power_oscillation(2.0)});
  out.push_back({"logsine-1", BoundaryData::log_sine(1.0)});
  out.push_back({"logsine-3", BoundaryData::log_sine(3.0)});
  out.push_back(
      {"lac-alt5", BoundaryData::lacunary_steps(-3, {1, -1, 1, -1, 1})});
  out.push_back({"lac-mixed",
                 BoundaryData::lacunary_steps(-2, {0.5, -1, 0.75, -0.25, 1})});
  out.push_back({"lac-alt9", BoundaryData::lacunary_steps(
                                 -4, {1, -1, 1, -1, 1, -1, 1, -1, 1})});
  out.push_back(
      {"bump-1", BoundaryData::smooth_bumps({{cplx(1.0), 1.0, 0.5}})});
  out.push_back({"bump-2", BoundaryData::smooth_bumps(
                               {{cplx(1.0), 1.0, 0.5},
                                {cplx(0.0, -0.5), -1.5, 0.8}})});
  out.push_back({"bump-3", BoundaryData::smooth_bumps(
                               {{cplx(0.7), 0.8, 0.3},
                                {cplx(-0.4, 0.2), 1.6, 0.4},
                                {cplx(0.3), -1.0, 0.6}})});
  out.push_back({"bump-wide",
                 BoundaryData::smooth_bumps({{cplx(1.0), 2.0, 1.5}})});
  out.push_back({"table-ramp",
                 table_from([](double x) { return std::tanh(std::log(x)); },
                            [](double) { return 0.0; })});
  out.push_back({"table-osc",
                 table_from([](double x) { return std::cos(std::log(x)); },
                            [](double x) {
                              return 0.3 * std::sin(2.0 * std::log(x));
                            })});
  out.push_back(
      {"table-step", table_from(
                         [](double x) {
                           return 1.0 / (1.0 + std::exp(-6.0 * (x - 1.0)));
                         },
                         [](double) { return 0.0; })});
  return out;
}

}  // namespace marcink::testsupport
