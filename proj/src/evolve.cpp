#include "dcl/evolve.hpp"

#include "dcl/error.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace dcl {

namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

// Drift coefficient kappa(k) of the mean interaction: 2 F(c, w)^ = 2 c i kappa w^.
double kappa(double k, const Equation& eq) {
  double r = 0.5 * k;
  if (eq.nonlocal) r += k * helmholtz(k, eq.mu);
  return r;
}

// exp(i omega h) with omega = P(k) - 2 c kappa(k), reduced in extended precision.
std::vector<cplx> propagator(const ModelParams& p, const Equation& eq, double mean, double h) {
  std::vector<cplx> e(2 * static_cast<std::size_t>(p.modes) + 1);
  for (int n = -p.modes; n <= p.modes; ++n) {
    if (n == 0) continue;
    const double k = p.frequency(n);
    long double k2 = static_cast<long double>(k) * k, pk = k;
    for (int i = 0; i < p.j; ++i) pk *= k2;
    if (p.j % 2 == 0) pk = -pk;
    long double omega = pk;
    if (eq.nonlinear) omega -= 2.0L * mean * kappa(k, eq);
    long double arg = std::fmod(omega * static_cast<long double>(h), kTwoPiL);
    e[static_cast<std::size_t>(n + p.modes)] = {static_cast<double>(std::cos(arg)),
                                                static_cast<double>(std::sin(arg))};
  }
  return e;
}

bool all_finite(const SpatialSpectrum& s) {
  return std::all_of(s.data().begin(), s.data().end(),
                     [](cplx a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); });
}

}  // namespace

double l2_norm(const SpatialSpectrum& spec) { return hs_norm(spec, 0.0); }

double energy(const SpatialSpectrum& spec, double mean) {
  const auto& p = spec.params();
  double sum = 0.0;
  for (int n = -p.modes; n <= p.modes; ++n) {
    if (n == 0) continue;
    const double k = p.frequency(n);
    sum += (1.0 + k * k) * std::norm(spec[n]);
  }
  return sum / p.lambda + p.period() * mean * mean;
}

Diagnostics diagnose(const SolverState& state, double s) {
  const auto& p = state.spec.params();
  const double mean_sq = p.period() * state.mean * state.mean;
  Diagnostics d;
  d.t = state.t;
  d.energy = energy(state.spec, state.mean);
  d.mean = state.mean;
  const double l2 = l2_norm(state.spec);
  d.l2 = std::sqrt(l2 * l2 + mean_sq);
  const double hs = hs_norm(state.spec, s);
  d.hs = std::sqrt(hs * hs + mean_sq);
  for (cplx a : state.spec.data()) d.max_mode = std::max(d.max_mode, std::abs(a));
  return d;
}

SpatialSpectrum total_nonlinearity(const SpatialSpectrum& w, double mean, const Equation& eq) {
  SpatialSpectrum f = nonlinearity_F(w, w, eq);
  if (eq.nonlinear && mean != 0.0) f += 2.0 * mean_interaction(mean, w, eq);
  return f;
}

Stepper::Stepper(const ModelParams& params, const Equation& eq, double dt, double mean,
                 Forcing forcing)
    : params_(params), eq_(eq), dt_(dt), mean_(mean), forcing_(std::move(forcing)) {
  require(std::isfinite(dt) && dt > 0.0, "time step must be positive and finite");
  half_ = propagator(params, eq, mean, 0.5 * dt);
  full_ = propagator(params, eq, mean, dt);
}

SpatialSpectrum Stepper::rotate(const SpatialSpectrum& w, const std::vector<cplx>& e) const {
  SpatialSpectrum out(w.params());
  for (int n = -params_.modes; n <= params_.modes; ++n)
    if (n != 0) out.at(n) = e[static_cast<std::size_t>(n + params_.modes)] * w[n];
  return out;
}

SpatialSpectrum Stepper::rhs(const SpatialSpectrum& w, double t) const {
  SpatialSpectrum r = nonlinearity_F(w, w, eq_);
  r *= -1.0;
  if (forcing_) r += forcing_(t);
  return r;
}

SolverState Stepper::step(const SolverState& state) const {
  require(state.spec.params().same_lattice(params_), "stepper built for a different lattice");
  const double h = dt_;
  const double t = state.t;
  const SpatialSpectrum& u = state.spec;

  SpatialSpectrum out = rotate(u, full_);
  if (eq_.nonlinear || forcing_) {
    const SpatialSpectrum k1 = rhs(u, t);
    const SpatialSpectrum k2 = rhs(rotate(u + (0.5 * h) * k1, half_), t + 0.5 * h);
    const SpatialSpectrum eu = rotate(u, half_);
    const SpatialSpectrum k3 = rhs(eu + (0.5 * h) * k2, t + 0.5 * h);
    const SpatialSpectrum k4 = rhs(out + h * rotate(k3, half_), t + h);
    SpatialSpectrum incr = rotate(k1, full_);
    incr += 2.0 * rotate(k2 + k3, half_);
    incr += k4;
    out += (h / 6.0) * incr;
  }
  if (!all_finite(out)) {
    std::ostringstream msg;
    msg << "non-finite amplitude after step at t = " << t << " (dt = " << h
        << "); last finite H^1 norm " << hs_norm(u, 1.0);
    throw NumericalError(msg.str());
  }
  return {t + h, std::move(out), state.mean};
}

SolverState step(const SolverState& state, double dt, const Equation& eq, const Forcing& forcing) {
  return Stepper(state.spec.params(), eq, dt, state.mean, forcing).step(state);
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowUp: return "blow-up";
    case RunStatus::Aborted: return "aborted";
  }
  return "unknown";
}

Trajectory simulate(const SpatialSpectrum& u0, double mean, double T, double dt,
                    const SimulateConfig& cfg) {
  const auto& p = u0.params();
  p.validate();
  require(std::isfinite(T) && T >= 0.0, "final time T must be >= 0");
  require(std::isfinite(dt) && dt > 0.0, "time step dt must be > 0");
  require(cfg.stride >= 1, "stride must be >= 1");
  require(std::isfinite(mean), "mean must be finite");

  Trajectory traj{p, cfg.eq, 0.0, {}, {}, RunStatus::Completed, {}, 0.0};
  SolverState state{0.0, u0, mean};
  traj.states.push_back(state);
  traj.diagnostics.push_back(diagnose(state, cfg.diag_s));
  if (T == 0.0) return traj;

  const auto nsteps = static_cast<long>(std::ceil(T / dt - 1e-12));
  traj.dt = T / static_cast<double>(nsteps);
  traj.phase_per_step =
      traj.dt * std::abs(dispersion_symbol(p.kmax(), p.j)) / (2.0 * std::numbers::pi);

  const Stepper stepper(p, cfg.eq, traj.dt, mean, cfg.forcing);
  const double h1_0 = hs_norm(u0, 1.0);
  for (long i = 1; i <= nsteps; ++i) {
    try {
      state = stepper.step(state);
    } catch (const NumericalError& e) {
      traj.status = RunStatus::Aborted;
      traj.message = e.what();
      return traj;
    }
    // Rounding drift: pin the clock to the grid.
    state.t = traj.dt * static_cast<double>(i);
    const bool last = i == nsteps;
    const double h1 = hs_norm(state.spec, 1.0);
    const bool blown = h1_0 > 0.0 ? h1 > cfg.blowup_factor * h1_0 : false;
    if (last || blown || i % cfg.stride == 0) {
      traj.states.push_back(state);
      traj.diagnostics.push_back(diagnose(state, cfg.diag_s));
    }
    if (blown) {
      std::ostringstream msg;
      msg << "H^1 norm grew by more than " << cfg.blowup_factor << "x (to " << h1 << ") at t = "
          << state.t << "; stopped early";
      traj.status = RunStatus::BlowUp;
      traj.message = msg.str();
      return traj;
    }
  }
  return traj;
}

ResidualReport pde_residual(const Trajectory& traj, const Forcing& forcing) {
  const auto& st = traj.states;
  const std::size_t n = st.size();
  require(n >= 3, "pde_residual needs at least 3 recorded states (have " + std::to_string(n) +
                      "); record with a smaller stride or run longer");
  const double h = st[1].t - st[0].t;
  require(h > 0.0, "recorded times must increase");
  for (std::size_t i = 0; i < n; ++i) {
    const double expect = st[0].t + h * static_cast<double>(i);
    if (std::abs(st[i].t - expect) > 1e-9 * std::max({1.0, std::abs(expect), h}))
      throw ValidationError("pde_residual needs uniformly spaced samples; the trajectory "
                            "was recorded with a non-uniform stride");
  }

  // Centered first-derivative weights on offsets -half..half.
  static const std::vector<double> w2 = {-0.5, 0.0, 0.5};
  static const std::vector<double> w4 = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  static const std::vector<double> w6 = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0,
                                         3.0 / 4,   -3.0 / 20, 1.0 / 60};
  const std::vector<double>* high = n >= 7 ? &w6 : n >= 5 ? &w4 : &w2;
  const std::vector<double>* low = n >= 7 ? &w4 : n >= 5 ? &w2 : nullptr;
  const int half = static_cast<int>(high->size() / 2);

  std::vector<SpatialSpectrum> v;
  v.reserve(n);
  double umax = 0.0;
  for (const auto& s : st) {
    v.push_back(free_evolution(s.spec, -s.t));
    umax = std::max(umax, l2_norm(s.spec));
  }

  auto stencil = [&](const std::vector<double>& w, std::size_t i) {
    const int hw = static_cast<int>(w.size() / 2);
    SpatialSpectrum d(traj.params);
    for (int o = -hw; o <= hw; ++o)
      if (w[static_cast<std::size_t>(o + hw)] != 0.0)
        d += (w[static_cast<std::size_t>(o + hw)] / h) * v[static_cast<std::size_t>(static_cast<int>(i) + o)];
    return d;
  };

  ResidualReport rep;
  rep.order = n >= 7 ? 6 : n >= 5 ? 4 : 2;
  double vdot_max = 0.0, f_max = 0.0;
  for (std::size_t i = static_cast<std::size_t>(half); i + static_cast<std::size_t>(half) < n; ++i) {
    const SpatialSpectrum dh = stencil(*high, i);
    SpatialSpectrum dl = low ? stencil(*low, i)
                             : (1.0 / h) * (v[i + 1] - v[i]);  // one-sided first order
    const double est = l2_norm(dh - dl);
    SpatialSpectrum r = free_evolution(dh, st[i].t);
    const SpatialSpectrum f = total_nonlinearity(st[i].spec, st[i].mean, traj.eq);
    r += f;
    if (forcing) r -= forcing(st[i].t);
    const double res = l2_norm(r);
    if (res > rep.residual) {
      rep.residual = res;
      rep.t_at_max = st[i].t;
    }
    rep.differencing_error = std::max(rep.differencing_error, est);
    vdot_max = std::max(vdot_max, l2_norm(dh));
    f_max = std::max(f_max, l2_norm(f));
    ++rep.times_evaluated;
  }
  // Round-off in differences of v is ~ eps |u| / h; below that the estimate is noise.
  const double noise = 1e-10 * umax / h;
  if (rep.differencing_error > 0.5 * vdot_max && rep.differencing_error > noise) {
    std::ostringstream msg;
    msg << "sampling too coarse for time differencing: estimated derivative error "
        << rep.differencing_error << " exceeds half of |v_t| = " << vdot_max
        << "; record states more often (smaller stride or dt)";
    throw ValidationError(msg.str());
  }
  rep.relative = f_max > 0.0 ? rep.residual / f_max : 0.0;
  return rep;
}

}  // namespace dcl
