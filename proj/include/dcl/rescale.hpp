#pragma once

// Scaling u^mu(x, t) = mu^{-2j} u(x / mu, t / mu^{2j+1}) from the circle of
// period 2 pi lambda to that of period 2 pi lambda mu. On the Fourier side the
// lattice index is unchanged (k -> k / mu) and amplitudes pick up mu^{1-2j}:
// mu^{-2j} from the field and mu from the dilated integral.
//
// u^mu solves the rescaled equation
//   u_t + d_x^{2j+1} u + 1/2 d_x(u^2) + d_x (1 - mu^2 d_x^2)^{-1} [u^2 + mu^2/2 u_x^2] = 0.

#include "dcl/evolve.hpp"

namespace dcl {

struct ScalingTransform {
  double mu = 1.0;

  void validate() const;
  double amplitude_factor(int j) const;  ///< mu^{1-2j}
  double field_factor(int j) const;      ///< mu^{-2j}, also the mean factor
  double time_factor(int j) const;       ///< mu^{2j+1}
};

SpatialSpectrum rescale_field(const SpatialSpectrum& u0, double mu);

/// Rescales every state and the clock; the equation picks up mu.
Trajectory rescale_trajectory(const Trajectory& traj, double mu);

/// pde_residual of the rescaled equation (Helmholtz scale mu) on a trajectory
/// already living on the dilated circle.
ResidualReport rescaled_residual(const Trajectory& traj_mu, double mu);

}  // namespace dcl
