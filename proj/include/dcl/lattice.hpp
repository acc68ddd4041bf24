#pragma once

// Frequency lattice Z_lambda = (Z \ {0}) / lambda truncated at |k| <= K, with
// the symmetric 1/sqrt(2 pi) Fourier convention and the normalized counting
// measure (dk)_lambda (each lattice point carries weight 1/lambda).
//
//   F_x f(k) = (2 pi)^{-1/2} int_0^{2 pi lambda} e^{-ikx} f(x) dx
//   f(x)     = (2 pi)^{-1/2} (1/lambda) sum_k e^{ikx} F_x f(k)
//
// Frequencies are addressed by their integer lattice index n, k = n / lambda.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dcl {

using cplx = std::complex<double>;

/// Upper limit for the small parameter: 0 < epsilon < 1 / (100 j^5).
double epsilon_limit(int j);

struct ModelParams {
  int j = 2;               ///< dispersion order, P(k) = (-1)^{j+1} k^{2j+1}
  double lambda = 1.0;     ///< period scale, domain [0, 2 pi lambda)
  double epsilon = 1.0 / 6400.0;
  int modes = 256;         ///< M = K lambda, number of positive lattice indices kept
  bool dealias = true;     ///< 2/3-rule padding for physical-space products

  double kmax() const { return modes / lambda; }
  double frequency(int n) const { return n / lambda; }
  double period() const;

  /// Throws ValidationError on a violated invariant.
  void validate() const;

  /// Builds params from a truncation frequency K; K lambda must be an integer.
  static ModelParams with_kmax(int j, double lambda, double kmax, double epsilon = 0.0,
                               bool dealias = true);

  bool same_lattice(const ModelParams& other) const;
};

/// Complex amplitudes on the truncated lattice; the zero mode is never stored.
class SpatialSpectrum {
 public:
  SpatialSpectrum() : SpatialSpectrum(ModelParams{}) {}
  explicit SpatialSpectrum(ModelParams params);

  const ModelParams& params() const { return params_; }
  int modes() const { return params_.modes; }

  /// Amplitude at lattice index n; zero for n == 0 or |n| > M.
  cplx operator[](int n) const;
  /// Mutable amplitude at lattice index n, 0 < |n| <= M.
  cplx& at(int n);

  /// Storage indexed by n + M; entry M (the zero mode) is always zero.
  std::span<const cplx> data() const { return amps_; }

  bool is_hermitian(double tol = 0.0) const;
  bool is_zero() const;
  std::size_t nonzero_count() const;

  SpatialSpectrum& operator+=(const SpatialSpectrum& o);
  SpatialSpectrum& operator-=(const SpatialSpectrum& o);
  SpatialSpectrum& operator*=(cplx c);

  friend SpatialSpectrum operator+(SpatialSpectrum a, const SpatialSpectrum& b) { return a += b; }
  friend SpatialSpectrum operator-(SpatialSpectrum a, const SpatialSpectrum& b) { return a -= b; }
  friend SpatialSpectrum operator*(cplx c, SpatialSpectrum a) { return a *= c; }

 private:
  ModelParams params_;
  std::vector<cplx> amps_;
};

/// Samples of a field on the uniform grid x_m = 2 pi lambda m / count.
struct FieldSamples {
  double lambda = 1.0;
  std::vector<double> x;
  std::vector<cplx> values;

  static FieldSamples uniform(double lambda, std::size_t count);
  bool is_real(double tol) const;
};

struct ForwardResult {
  SpatialSpectrum spectrum;
  cplx zero_mode{0.0, 0.0};        ///< F_x f(0), reported separately
  double aliased_fraction = 0.0;   ///< energy above K relative to total
  std::vector<std::string> warnings;
};

ForwardResult forward_transform(const FieldSamples& field, const ModelParams& params);

/// Samples on `count` uniform points (default: smallest FFT-friendly size >= 2M+1).
/// `zero_mode` is added back as the value of F_x f(0).
FieldSamples inverse_transform(const SpatialSpectrum& spec, std::size_t count = 0,
                               cplx zero_mode = {0.0, 0.0});

struct ConvolveResult {
  SpatialSpectrum spectrum;
  cplx zero_mode{0.0, 0.0};
  double truncation_loss = 0.0;  ///< (dk)_lambda L^2 energy of output modes beyond K
};

/// Normalized discrete convolution (1/lambda) sum_{k1} a(k - k1) b(k1), direct sum.
ConvolveResult convolve(const SpatialSpectrum& a, const SpatialSpectrum& b);

/// Spectrum of the pointwise product of the fields of a and b. Under the
/// symmetric convention this is convolve(a, b) / sqrt(2 pi). Evaluated by FFT
/// with 2/3-rule padding when params.dealias is set; the truncation loss is
/// then the energy found in the discarded padded modes.
ConvolveResult multiply(const SpatialSpectrum& a, const SpatialSpectrum& b);

/// Japanese bracket <x> = (1 + x^2)^{1/2}.
inline double bracket(double x) { return std::hypot(1.0, x); }

double hs_norm(const SpatialSpectrum& spec, double s);

/// Applies amps(k) <- m(k) amps(k) for a symbol given as a function of k.
template <class Symbol>
SpatialSpectrum apply_symbol(SpatialSpectrum spec, Symbol&& m) {
  const auto& p = spec.params();
  for (int n = -p.modes; n <= p.modes; ++n)
    if (n != 0) spec.at(n) *= m(p.frequency(n));
  return spec;
}

/// Spectrum of d/dx.
SpatialSpectrum derivative(const SpatialSpectrum& spec, int order = 1);

}  // namespace dcl
