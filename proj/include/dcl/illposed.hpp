#pragma once

// Two-mode counterexample family for the bilinear estimate in W^s:
//   u1: rows k = +-N,        unit amplitude on |sigma| <= 1,
//   u2: rows k = +-(N - 1),  unit amplitude on |sigma| <= 1,
// and the scaling collision between
//   L(N) = || <sigma>^{-1} F(u1, u2) ||_{W^s}   ~ N^{2-j}
//   R(N) = ||u1||_{W^s} ||u2||_{W^s}            ~ N^{2s}.

#include "dcl/bourgain.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dcl {

struct CounterexamplePair {
  SpaceTimeSpectrum u1;
  SpaceTimeSpectrum u2;
};

/// Cells are the sigma cells whose centre satisfies |sigma| <= 1.
CounterexamplePair build_counterexample(int N, int j, double dtau = 0.125);

struct WeightedBilinear {
  double value = 0.0;
  bool empty_overlap = false;   ///< the product had no support
  bool exact_binning = true;
};

/// W^s norm of <sigma>^{-1} times the space-time transform of F(u1, u2).
WeightedBilinear duhamel_weighted_bilinear(const SpaceTimeSpectrum& u1, const SpaceTimeSpectrum& u2,
                                           double s);

struct CounterexampleConfig {
  std::vector<int> N_list = {16, 32, 64, 128, 256, 512, 1024};
  int j = 2;
  double s = -0.25;
  double dtau = 0.125;
  bool refine_check = false;    ///< also fit slopes at dtau / 2
};

struct CollisionRow {
  int N = 0;
  double L = 0.0;
  double R = 0.0;
};

struct CollisionReport {
  CounterexampleConfig cfg;
  std::vector<CollisionRow> rows;
  bool regression = false;      ///< at least three N values
  double slopeL = 0.0, slopeR = 0.0;
  double slopeL_refined = 0.0, slopeR_refined = 0.0;
  double critical_s = 0.0;      ///< 1 - j/2
  std::string verdict;          ///< BREAKS, HOLDS-AT-THIS-PROBE, INCONCLUSIVE or NO-REGRESSION
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Slope gap g = slopeL - slopeR decides: BREAKS if g > band, HOLDS-AT-THIS-PROBE
/// if g < -band, else INCONCLUSIVE. The default band 0.1 in g is +-0.05 in s.
std::string collision_verdict(double slopeL, double slopeR, double band = 0.1);

CollisionReport collision_scan(const CounterexampleConfig& cfg);

}  // namespace dcl
