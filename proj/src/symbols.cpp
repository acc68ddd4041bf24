#include "dcl/symbols.hpp"

#include "dcl/error.hpp"

#include <numbers>

namespace dcl {

namespace {

long double odd_power(long double k, int j) {
  long double r = k;
  const long double k2 = k * k;
  for (int i = 0; i < j; ++i) r *= k2;
  return r;
}

}  // namespace

double dispersion_symbol(double k, int j) {
  require(j >= 1, "dispersion order j must be >= 1");
  long double r = odd_power(k, j);
  return static_cast<double>(j % 2 == 1 ? r : -r);
}

BigInt dispersion_symbol_exact(std::int64_t n, int j) {
  require(j >= 1, "dispersion order j must be >= 1");
  BigInt r = big_pow(n, 2 * j + 1);
  return j % 2 == 1 ? r : BigInt(-r);
}

cplx dispersion_phase(double k, int j, double t) {
  long double p = odd_power(k, j);
  if (j % 2 == 0) p = -p;
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double arg = std::fmod(p * static_cast<long double>(t), two_pi);
  return {static_cast<double>(std::cos(arg)), static_cast<double>(std::sin(arg))};
}

cplx nonlocal_multiplier(double k) { return {0.0, k / (1.0 + k * k)}; }

double helmholtz(double k, double mu) { return 1.0 / (1.0 + mu * mu * k * k); }

cplx pair_symbol(double k1, double k2, const NonlinearityForm& form) {
  if (!form.nonlinear) return {};
  const double k = k1 + k2;
  cplx m{0.0, 0.5 * k};
  if (form.nonlocal) {
    const double mu2 = form.mu * form.mu;
    m += cplx(0.0, k * helmholtz(k, form.mu) * (1.0 - 0.5 * mu2 * k1 * k2));
  }
  return m;
}

MultiplierSet::MultiplierSet(const ModelParams& params, double mu) : params_(params), mu_(mu) {
  const int M = params.modes;
  const std::size_t size = 2 * static_cast<std::size_t>(M) + 1;
  p_.resize(size);
  ik_.resize(size);
  nonlocal_.resize(size);
  helm_.resize(size);
  for (int n = -M; n <= M; ++n) {
    const auto i = static_cast<std::size_t>(n + M);
    if (n == 0) continue;
    const double k = params.frequency(n);
    p_[i] = dispersion_symbol(k, params.j);
    ik_[i] = {0.0, k};
    nonlocal_[i] = nonlocal_multiplier(k);
    helm_[i] = dcl::helmholtz(k, mu);
  }
}

std::vector<cplx> MultiplierSet::phases(double t) const {
  const int M = params_.modes;
  std::vector<cplx> out(p_.size());
  for (int n = -M; n <= M; ++n)
    if (n != 0)
      out[static_cast<std::size_t>(n + M)] = dispersion_phase(params_.frequency(n), params_.j, t);
  return out;
}

SpatialSpectrum free_evolution(const SpatialSpectrum& spec, double t) {
  const int j = spec.params().j;
  return apply_symbol(spec, [j, t](double k) { return dispersion_phase(k, j, t); });
}

SpatialSpectrum nonlinearity_F(const SpatialSpectrum& u1, const SpatialSpectrum& u2,
                               const NonlinearityForm& form) {
  require(u1.params().same_lattice(u2.params()), "nonlinearity_F: inputs on different lattices");
  SpatialSpectrum out(u1.params());
  if (!form.nonlinear) return out;
  const auto& p = u1.params();
  const SpatialSpectrum prod = multiply(u1, u2).spectrum;
  if (!form.nonlocal) {
    for (int n = -p.modes; n <= p.modes; ++n)
      if (n != 0) out.at(n) = cplx(0.0, 0.5 * p.frequency(n)) * prod[n];
    return out;
  }
  const SpatialSpectrum grad = multiply(derivative(u1), derivative(u2)).spectrum;
  const double mu2 = form.mu * form.mu;
  for (int n = -p.modes; n <= p.modes; ++n) {
    if (n == 0) continue;
    const double k = p.frequency(n);
    const cplx ik(0.0, k);
    out.at(n) = 0.5 * ik * prod[n] + ik * helmholtz(k, form.mu) * (prod[n] + 0.5 * mu2 * grad[n]);
  }
  return out;
}

SpatialSpectrum mean_interaction(double c, const SpatialSpectrum& w, const NonlinearityForm& form) {
  if (!form.nonlinear || c == 0.0) return SpatialSpectrum(w.params());
  // Only the product terms see a constant; (d_x c) = 0 kills the gradient term.
  // F(c, w) = 1/2 d_x(c w) + d_x (1 - mu^2 d_x^2)^{-1} (c w); under the
  // transform convention multiplying by a constant c is plain scaling.
  const bool nonlocal = form.nonlocal;
  const double mu = form.mu;
  return apply_symbol(w, [=](double k) {
    cplx m(0.0, 0.5 * k);
    if (nonlocal) m += cplx(0.0, k * helmholtz(k, mu));
    return c * m;
  });
}

SpatialSpectrum local_form_rhs(const SpatialSpectrum& u) {
  const auto& p = u.params();
  const SpatialSpectrum m = apply_symbol(u, [](double k) { return cplx(1.0 + k * k, 0.0); });
  const SpatialSpectrum mx = derivative(m);
  const SpatialSpectrum ux = derivative(u);
  const SpatialSpectrum a = multiply(u, mx).spectrum;
  const SpatialSpectrum b = multiply(ux, m).spectrum;
  SpatialSpectrum out = derivative(m, 2 * p.j + 1);
  out += a;
  out += 2.0 * b;
  out *= -1.0;
  return out;
}

}  // namespace dcl
