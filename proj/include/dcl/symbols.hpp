#pragma once

// Fourier multipliers of the model: the odd dispersion relation P(k), the
// free group S(t) = exp(i t P(k)), the Helmholtz smoothing and the symmetric
// bilinear nonlinearity
//
//   F(u1, u2) = 1/2 d_x(u1 u2) + d_x (1 - mu^2 d_x^2)^{-1} [u1 u2 + mu^2/2 (d_x u1)(d_x u2)],
//
// so the equation reads u_t + d_x^{2j+1} u + F(u, u) = 0 (mu = 1 unscaled).

#include "dcl/lattice.hpp"
#include "dcl/wide_int.hpp"

#include <vector>

namespace dcl {

/// (-1)^{j+1} k^{2j+1} in floating point.
double dispersion_symbol(double k, int j);

/// Exact P(n) for an integer frequency n; falls back to arbitrary precision.
BigInt dispersion_symbol_exact(std::int64_t n, int j);

/// Oscillation phase exp(i t P(k)), with the argument reduced mod 2 pi in
/// extended precision since t P(K) is routinely in the 1e10 range.
cplx dispersion_phase(double k, int j, double t);

/// i k / (1 + k^2).
cplx nonlocal_multiplier(double k);

/// 1 / (1 + mu^2 k^2).
double helmholtz(double k, double mu = 1.0);

/// Which parts of the nonlinearity are active.
struct NonlinearityForm {
  bool nonlinear = true;   ///< false: linear flow only
  bool nonlocal = true;    ///< false: higher-order KdV, F = 1/2 d_x(u1 u2)
  double mu = 1.0;         ///< Helmholtz scale of the rescaled equation
};

/// Bilinear symbol of F acting on e^{i k1 x}, e^{i k2 x}, k = k1 + k2,
/// relative to the product: F(e^{ik1x}, e^{ik2x}) = m(k1, k2) e^{ikx}.
cplx pair_symbol(double k1, double k2, const NonlinearityForm& form = {});

/// Cached per-lattice multiplier arrays, indexed by n + M.
class MultiplierSet {
 public:
  explicit MultiplierSet(const ModelParams& params, double mu = 1.0);

  const ModelParams& params() const { return params_; }
  double mu() const { return mu_; }
  const std::vector<double>& dispersion() const { return p_; }
  const std::vector<cplx>& derivative() const { return ik_; }
  const std::vector<cplx>& nonlocal() const { return nonlocal_; }
  const std::vector<double>& helmholtz() const { return helm_; }

  /// exp(i t P(k)) for every lattice point.
  std::vector<cplx> phases(double t) const;

 private:
  ModelParams params_;
  double mu_;
  std::vector<double> p_;
  std::vector<cplx> ik_, nonlocal_;
  std::vector<double> helm_;
};

/// S(t): amps(k) <- exp(i t P(k)) amps(k).
SpatialSpectrum free_evolution(const SpatialSpectrum& spec, double t);

/// The symmetric bilinear map F evaluated pseudospectrally (dealiased per params).
SpatialSpectrum nonlinearity_F(const SpatialSpectrum& u1, const SpatialSpectrum& u2,
                               const NonlinearityForm& form = {});

/// F(c, w) for a constant c (the field mean) against a lattice spectrum: the
/// diagonal multiplier c (i k / 2 + i k / (1 + mu^2 k^2)), or c i k / 2 in KdV mode.
SpatialSpectrum mean_interaction(double c, const SpatialSpectrum& w,
                                 const NonlinearityForm& form = {});

/// Independent right-hand side from the local form with m = u - u_xx:
///   m_t = -d_x^{2j+1} m - (u m_x + 2 u_x m).
/// Returns m_t for mean-zero u.
SpatialSpectrum local_form_rhs(const SpatialSpectrum& u);

}  // namespace dcl
