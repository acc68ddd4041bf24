#include "dcl/rescale.hpp"

#include "dcl/error.hpp"

namespace dcl {

void ScalingTransform::validate() const {
  require(std::isfinite(mu) && mu >= 1.0, "scaling parameter mu must be >= 1");
}

double ScalingTransform::amplitude_factor(int j) const { return std::pow(mu, 1.0 - 2.0 * j); }
double ScalingTransform::field_factor(int j) const { return std::pow(mu, -2.0 * j); }
double ScalingTransform::time_factor(int j) const { return std::pow(mu, 2.0 * j + 1.0); }

SpatialSpectrum rescale_field(const SpatialSpectrum& u0, double mu) {
  const ScalingTransform st{mu};
  st.validate();
  ModelParams p = u0.params();
  p.lambda *= mu;
  SpatialSpectrum out(p);
  const double a = st.amplitude_factor(p.j);
  for (int n = -p.modes; n <= p.modes; ++n)
    if (n != 0) out.at(n) = a * u0[n];
  return out;
}

Trajectory rescale_trajectory(const Trajectory& traj, double mu) {
  const ScalingTransform st{mu};
  st.validate();
  Trajectory out = traj;
  out.params.lambda *= mu;
  out.eq.mu = traj.eq.mu * mu;
  const int j = traj.params.j;
  const double tf = st.time_factor(j), ff = st.field_factor(j);
  out.dt = traj.dt * tf;
  for (auto& s : out.states) {
    s.spec = rescale_field(s.spec, mu);
    s.t *= tf;
    s.mean *= ff;
  }
  out.diagnostics.clear();
  for (const auto& s : out.states) out.diagnostics.push_back(diagnose(s, 0.0));
  return out;
}

ResidualReport rescaled_residual(const Trajectory& traj_mu, double mu) {
  ScalingTransform{mu}.validate();
  Trajectory t = traj_mu;
  t.eq.mu = mu;
  return pde_residual(t);
}

}  // namespace dcl
