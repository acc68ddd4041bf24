#pragma once

// Time integration of u_t + d_x^{2j+1} u + F(u, u) = f with an integrating
// factor (Lawson) RK4 scheme: the stiff dispersive part is propagated exactly
// and only the nonlinearity is stepped. The spatial mean is carried as a
// separate scalar c; since F(c, c) = 0 its only effect is the linear drift
// 2 F(c, w), which is folded into the exact propagator.

#include "dcl/lattice.hpp"
#include "dcl/symbols.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dcl {

using Equation = NonlinearityForm;

/// Mean-zero forcing f(t) added to the right-hand side (manufactured solutions).
using Forcing = std::function<SpatialSpectrum(double t)>;

struct SolverState {
  double t = 0.0;
  SpatialSpectrum spec;
  double mean = 0.0;
};

struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;    ///< int (u^2 + u_x^2) dx
  double mean = 0.0;
  double l2 = 0.0;        ///< (int u^2 dx)^{1/2}
  double hs = 0.0;        ///< H^s norm at the configured s (mean included as the k = 0 term)
  double max_mode = 0.0;  ///< max_k |F_x u(k)|
};

/// int (u^2 + u_x^2) dx = (1/lambda) sum (1 + k^2) |a_k|^2, plus 2 pi lambda c^2.
double energy(const SpatialSpectrum& spec, double mean = 0.0);

Diagnostics diagnose(const SolverState& state, double s);

/// Total nonlinearity F(c + w, c + w) = F(w, w) + 2 F(c, w).
SpatialSpectrum total_nonlinearity(const SpatialSpectrum& w, double mean, const Equation& eq);

class Stepper {
 public:
  Stepper(const ModelParams& params, const Equation& eq, double dt, double mean,
          Forcing forcing = {});

  /// One Lawson RK4 step; throws NumericalError on non-finite amplitudes.
  SolverState step(const SolverState& state) const;

  double dt() const { return dt_; }

 private:
  SpatialSpectrum rhs(const SpatialSpectrum& w, double t) const;
  SpatialSpectrum rotate(const SpatialSpectrum& w, const std::vector<cplx>& e) const;

  ModelParams params_;
  Equation eq_;
  double dt_;
  double mean_;
  Forcing forcing_;
  std::vector<cplx> half_, full_;
};

/// Single step from scratch (convenience; simulate reuses one Stepper).
SolverState step(const SolverState& state, double dt, const Equation& eq = {},
                 const Forcing& forcing = {});

enum class RunStatus { Completed, BlowUp, Aborted };

std::string to_string(RunStatus s);

struct SimulateConfig {
  Equation eq;
  int stride = 1;              ///< record every stride-th step (the final step is always kept)
  double diag_s = 0.0;         ///< s for the hs diagnostic column
  double blowup_factor = 1e6;  ///< early stop once H^1 exceeds this multiple of its initial value
  Forcing forcing;
};

struct Trajectory {
  ModelParams params;
  Equation eq;
  double dt = 0.0;             ///< effective step T / nsteps
  std::vector<SolverState> states;
  std::vector<Diagnostics> diagnostics;
  RunStatus status = RunStatus::Completed;
  std::string message;
  double phase_per_step = 0.0; ///< dt |P(K)| / (2 pi), linear-part phase wraps per step
};

/// Integrates from t = 0 to T with nsteps = ceil(T / dt) equal steps.
Trajectory simulate(const SpatialSpectrum& u0, double mean, double T, double dt,
                    const SimulateConfig& cfg = {});

struct ResidualReport {
  double residual = 0.0;          ///< max over evaluated times of the L^2 residual
  double relative = 0.0;          ///< residual / max ||F_total(u)||_{L^2} (0 when F vanishes)
  double differencing_error = 0.0;///< max |D_high v - D_low v| in L^2
  int order = 0;                  ///< finite-difference order used
  double t_at_max = 0.0;
  std::size_t times_evaluated = 0;
};

/// Residual of u_t + d_x^{2j+1} u + F(u, u) - f on the recorded states. The
/// time derivative is taken of v = S(-t) u (interaction picture), whose
/// variation is slow, by centered differences of order 2, 4 or 6 depending
/// on the number of samples; the estimate compares against the next lower
/// order. Requires >= 3 uniformly spaced samples.
ResidualReport pde_residual(const Trajectory& traj, const Forcing& forcing = {});

/// Exact physical-space L^2 norm of a spectrum, (1/lambda sum |a|^2)^{1/2}.
double l2_norm(const SpatialSpectrum& spec);

}  // namespace dcl
