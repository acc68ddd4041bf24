#include "dcl/error.hpp"
#include "dcl/evolve.hpp"

#include <doctest.h>

#include <limits>
#include <numbers>
#include <random>

using namespace dcl;

namespace {

const double kPi = std::numbers::pi;

SpatialSpectrum cosine(const ModelParams& p, double A, int n = 1) {
  SpatialSpectrum u(p);
  u.at(n) = u.at(-n) = A * p.lambda * std::sqrt(kPi / 2.0);
  return u;
}

SpatialSpectrum random_real_spectrum(const ModelParams& p, std::uint64_t seed, int band, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SpatialSpectrum u(p);
  for (int n = 1; n <= band; ++n) {
    cplx a = scale * cplx{g(rng), g(rng)};
    u.at(n) = a;
    u.at(-n) = std::conj(a);
  }
  return u;
}

double distance(const SpatialSpectrum& a, const SpatialSpectrum& b) { return l2_norm(a - b); }

// int (u^2 + u_x^2) by the rectangle rule on a fine grid (exact for trig polynomials).
double energy_quadrature(const SpatialSpectrum& s) {
  const auto& p = s.params();
  const std::size_t N = 4 * static_cast<std::size_t>(p.modes) + 4;
  const double L = p.period();
  double acc = 0.0;
  for (std::size_t m = 0; m < N; ++m) {
    const double x = L * static_cast<double>(m) / static_cast<double>(N);
    cplx u{}, ux{};
    for (int n = -p.modes; n <= p.modes; ++n) {
      if (s[n] == cplx{}) continue;
      const double k = p.frequency(n);
      cplx e = std::polar(1.0, k * x) * s[n] / (std::sqrt(2.0 * kPi) * p.lambda);
      u += e;
      ux += cplx(0.0, k) * e;
    }
    acc += std::norm(u) + std::norm(ux);
  }
  return acc * L / static_cast<double>(N);
}

}  // namespace

TEST_CASE("energy") {
  auto p = ModelParams::with_kmax(2, 1.0, 8);
  CHECK(energy(cosine(p, 1.0)) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(energy(SpatialSpectrum(p)) == 0.0);
  auto q = ModelParams::with_kmax(2, 2.0, 6);
  auto u = random_real_spectrum(q, 3, 12, 0.2);
  CHECK(std::abs(energy(u) - energy_quadrature(u)) < 1e-10 * energy(u));
  // the mean adds 2 pi lambda c^2
  CHECK(energy(u, 0.5) - energy(u) == doctest::Approx(q.period() * 0.25).epsilon(1e-12));
}

TEST_CASE("linear flow is exact") {
  auto p = ModelParams::with_kmax(2, 1.0, 32);
  auto u = random_real_spectrum(p, 7, 32, 1.0);
  Equation lin{false, true, 1.0};
  SolverState s{0.0, u, 0.0};
  for (double dt : {1e-3, 0.1, 0.77}) {
    auto next = step(s, dt, lin);
    CHECK(distance(next.spec, free_evolution(u, dt)) < 1e-14 * l2_norm(u));
  }
  auto traj = simulate(u, 0.0, 1.0, 0.01, {lin, 10, 0.0, 1e6, {}});
  for (const auto& st : traj.states)
    for (double sv : {-1.0, 0.0, 2.0})
      CHECK(std::abs(hs_norm(st.spec, sv) - hs_norm(u, sv)) < 1e-14 * hs_norm(u, sv));
}

TEST_CASE("zero data and zero time") {
  auto p = ModelParams::with_kmax(2, 1.0, 16);
  auto traj = simulate(SpatialSpectrum(p), 0.0, 0.5, 0.01);
  CHECK(traj.status == RunStatus::Completed);
  for (const auto& st : traj.states) CHECK(st.spec.is_zero());
  auto u = cosine(p, 0.01);
  auto t0 = simulate(u, 0.0, 0.0, 0.01);
  REQUIRE(t0.states.size() == 1);
  CHECK(distance(t0.states[0].spec, u) == 0.0);
  CHECK_THROWS_AS(simulate(u, 0.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(simulate(u, 0.0, -1.0, 0.1), ValidationError);
}

TEST_CASE("stride keeps the final step and pins the clock") {
  auto p = ModelParams::with_kmax(2, 1.0, 8);
  auto traj = simulate(cosine(p, 0.01), 0.0, 0.1, 0.003, {{}, 7, 0.0, 1e6, {}});
  // ceil(0.1 / 0.003) = 34 steps, records at 0, 7, 14, 21, 28, 34
  REQUIRE(traj.states.size() == 6);
  CHECK(traj.states.back().t == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(traj.dt == doctest::Approx(0.1 / 34));
  CHECK(traj.diagnostics.size() == traj.states.size());
}

TEST_CASE("conservation on a small-data run") {
  auto p = ModelParams::with_kmax(2, 1.0, 32);
  auto u = random_real_spectrum(p, 5, 4, 0.01);
  auto traj = simulate(u, 0.0, 0.5, 1e-3);
  const auto& d0 = traj.diagnostics.front();
  const auto& d1 = traj.diagnostics.back();
  CHECK(std::abs(d1.energy - d0.energy) <= 1e-6 * d0.energy);
  CHECK(d1.mean == 0.0);

  // nonzero mean: carried exactly, total energy still conserved and the drift
  // is a fourth-order time-stepping error
  auto w = random_real_spectrum(p, 5, 1, 0.05);
  auto drift = [&](double dt) {
    auto tm = simulate(w, 0.2, 0.5, dt);
    for (const auto& st : tm.states) REQUIRE(st.mean == 0.2);
    return std::abs(tm.diagnostics.back().energy - tm.diagnostics.front().energy) /
           tm.diagnostics.front().energy;
  };
  const double d_coarse = drift(0.02), d_fine = drift(0.01);
  CHECK(d_fine <= 1e-6);
  CHECK(d_coarse / d_fine > 8.0);

  // KdV mode: int u^2 conserved
  auto q = ModelParams::with_kmax(1, 1.0, 32);
  auto v = random_real_spectrum(q, 6, 4, 0.05);
  auto tk = simulate(v, 0.0, 1.0, 1e-3, {{true, false, 1.0}, 1, 0.0, 1e6, {}});
  CHECK(std::abs(tk.diagnostics.back().l2 - tk.diagnostics.front().l2) <= 1e-6 * tk.diagnostics.front().l2);
}

TEST_CASE("fourth-order global convergence") {
  auto p = ModelParams::with_kmax(2, 1.0, 16);
  // a single random-phase mode; with two modes the resonant frequency 210 of
  // the (1, 2) -> 3 interaction keeps these steps out of the asymptotic range
  auto u = random_real_spectrum(p, 8, 1, 0.05);
  auto final_at = [&](double dt) { return simulate(u, 0.0, 0.5, dt).states.back().spec; };
  auto a = final_at(0.01), b = final_at(0.005), c = final_at(0.0025);
  const double ratio = distance(a, b) / distance(b, c);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("manufactured solution") {
  // u* = A cos(x - t) is a free solution for j = 2 (P(1) = -1), so the forcing
  // is F(u*, u*) = -(3/5) A^2 sin(2(x - t)), by hand.
  auto p = ModelParams::with_kmax(2, 1.0, 16);
  const double A = 0.01;
  auto exact = [&](double t) {
    SpatialSpectrum u(p);
    u.at(1) = A * std::sqrt(kPi / 2.0) * std::polar(1.0, -t);
    u.at(-1) = std::conj(u[1]);
    return u;
  };
  Forcing f = [&](double t) {
    SpatialSpectrum g(p);
    g.at(2) = cplx(0.0, 0.6) * A * A * std::sqrt(kPi / 2.0) * std::polar(1.0, -2.0 * t);
    g.at(-2) = std::conj(g[2]);
    return g;
  };
  SimulateConfig cfg;
  cfg.forcing = f;
  auto traj = simulate(exact(0.0), 0.0, 1.0, 1e-2, cfg);
  for (const auto& st : traj.states) CHECK(distance(st.spec, exact(st.t)) < 1e-12);
  auto rr = pde_residual(traj, f);
  CHECK(rr.residual <= 1e-8);
  CHECK(rr.order == 6);

  // unforced trajectory of the same data has an O(A^2) residual under the forced equation
  auto free = simulate(exact(0.0), 0.0, 1.0, 1e-2);
  const double forced = pde_residual(free, f).residual;
  CHECK(forced > 1e-6);
  CHECK(pde_residual(free).residual < 1e-2 * forced);
}

TEST_CASE("pde residual shrinks under refinement") {
  auto p = ModelParams::with_kmax(2, 1.0, 8);
  auto u = random_real_spectrum(p, 12, 1, 0.01);
  double prev = std::numeric_limits<double>::infinity();
  for (double dt : {0.02, 0.01, 0.005}) {
    auto rr = pde_residual(simulate(u, 0.0, 0.4, dt));
    CHECK(rr.residual < prev);
    prev = rr.residual;
  }
  // linear exact solution: residual at the differencing-error level
  Equation lin{false, true, 1.0};
  auto tl = simulate(u, 0.0, 0.4, 0.01, {lin, 1, 0.0, 1e6, {}});
  auto rl = pde_residual(tl);
  CHECK(rl.residual <= rl.differencing_error + 1e-12);
}

TEST_CASE("pde residual refuses unusable sampling") {
  auto p = ModelParams::with_kmax(2, 1.0, 16);
  auto u = random_real_spectrum(p, 13, 3, 0.05);
  auto two = simulate(u, 0.0, 0.1, 0.05);
  CHECK_THROWS_AS(pde_residual(two), ValidationError);
  // a large nonlinear rate sampled once per unit time
  auto big = random_real_spectrum(p, 14, 6, 3.0);
  auto coarse = simulate(big, 0.0, 6.0, 1e-3, {{}, 1000, 0.0, 1e12, {}});
  if (coarse.status == RunStatus::Completed) CHECK_THROWS_AS(pde_residual(coarse), ValidationError);
}

TEST_CASE("abort and blow-up reporting") {
  auto p = ModelParams::with_kmax(2, 1.0, 8);
  auto u = cosine(p, 1e-6);
  SimulateConfig nan_cfg;
  nan_cfg.forcing = [&](double t) {
    SpatialSpectrum g(p);
    if (t > 0.05) g.at(1) = g.at(-1) = std::numeric_limits<double>::quiet_NaN();
    return g;
  };
  auto ta = simulate(u, 0.0, 1.0, 0.01, nan_cfg);
  CHECK(ta.status == RunStatus::Aborted);
  CHECK_FALSE(ta.message.empty());
  CHECK(ta.states.size() >= 2);
  CHECK(ta.states.back().t < 0.1);

  SimulateConfig grow;
  grow.blowup_factor = 100.0;
  grow.forcing = [&](double) {
    SpatialSpectrum g(p);
    g.at(1) = g.at(-1) = 1e-3;
    return g;
  };
  auto tb = simulate(u, 0.0, 10.0, 0.01, grow);
  CHECK(tb.status == RunStatus::BlowUp);
  CHECK(tb.states.back().t < 10.0);
  CHECK(hs_norm(tb.states.back().spec, 1.0) > 100.0 * hs_norm(u, 1.0));
}
