#pragma once

// Picard iteration of the truncated Duhamel map
//
//   Phi(w)(t) = eta(t) S(t) u0 - eta(t) int_0^t S(t - t') F(w, w)(t') dt',
//
// on a uniform time grid over supp eta = [-2, 2]. Iterates are stored in the
// interaction picture v = S(-t) w, where they vary slowly. Since F is bilinear
// and symmetric, successive differences obey
//   delta^{n+1} = -eta int_0^t S(-t') F(w^n + w^{n-1}, delta^n) dt',
// which is what is integrated: the increments shrink geometrically and would
// otherwise be lost to cancellation between nearly equal iterates.

#include "dcl/bourgain.hpp"
#include "dcl/evolve.hpp"

#include <string>
#include <vector>

namespace dcl {

/// Smooth cutoff: 1 on |t| <= 1, exp(1 - 1/(1 - (|t| - 1)^2)) on 1 < |t| < 2, 0 beyond.
double eta(double t);

enum class Quadrature { Simpson, Trapezoid };

std::string to_string(Quadrature q);
Quadrature parse_quadrature(const std::string& name);

struct PicardConfig {
  int iterations = 8;
  double time_step = 1.0 / 512;   ///< grid t_i = i h on [-2, 2]; 2 / h must be an integer
  Quadrature quadrature = Quadrature::Simpson;
  double s = -0.25;               ///< regularity for the ratio norms
  Equation eq;
  double dtau = 1.0 / 8;          ///< target tau resolution of the Z^s ratio
  bool self_check = true;         ///< rerun at 2h and report the change
};

struct PicardStep {
  int n = 0;                      ///< iterate index
  double sup_hs = 0.0;            ///< sup_t ||delta^n(t)||_{H^s}
  double zs = 0.0;                ///< ||delta^n||_{Z^s} of the time-transformed increment
  double ratio_hs = 0.0;          ///< sup_hs(n) / sup_hs(n - 1)
  double ratio_zs = 0.0;
};

struct PicardResult {
  PicardConfig cfg;
  ModelParams params;
  std::vector<double> times;
  /// iterates[n][i] = w^n(t_i) in the physical (not interaction) picture.
  std::vector<std::vector<SpatialSpectrum>> iterates;
  std::vector<PicardStep> steps;  ///< steps[n - 1] describes delta^n = w^n - w^{n-1}
  bool diverged = false;          ///< ratio > 1 on three consecutive iterations
  double self_check_change = -1.0;///< relative H^s change of the final iterate at t = 0.5 vs 2h grid
  double dtau_used = 0.0;

  /// Final iterate at grid time t (must be a node).
  const SpatialSpectrum& final_at(double t) const;
};

PicardResult picard_iterate(const SpatialSpectrum& u0, const PicardConfig& cfg = {});

/// Space-time spectrum of a sampled field v(t_i) in the interaction picture,
/// F(k, tau) = (2 pi)^{-1/2} int e^{-i sigma t} v(k, t) dt on an sigma grid of step close
/// to dtau_target, with the time integral done by the grid sum.
SpaceTimeSpectrum time_transform(const std::vector<double>& times,
                                 const std::vector<SpatialSpectrum>& v, double dtau_target,
                                 double sigma_window);

}  // namespace dcl
