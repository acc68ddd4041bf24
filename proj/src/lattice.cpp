#include "dcl/lattice.hpp"

#include "dcl/error.hpp"
#include "dcl/fft.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace dcl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrtTwoPi = std::sqrt(kTwoPi);

std::size_t bin_of(int n, std::size_t count) {
  auto c = static_cast<long>(count);
  return static_cast<std::size_t>(((n % c) + c) % c);
}

// Signed frequency index of DFT bin b.
long signed_bin(std::size_t b, std::size_t count) {
  auto sb = static_cast<long>(b);
  auto c = static_cast<long>(count);
  return sb <= c / 2 ? sb : sb - c;
}

}  // namespace

double epsilon_limit(int j) {
  double j5 = std::pow(static_cast<double>(j), 5);
  return 1.0 / (100.0 * j5);
}

double ModelParams::period() const { return kTwoPi * lambda; }

void ModelParams::validate() const {
  require(j >= 1, "j must be >= 1 (got " + std::to_string(j) + ")");
  require(std::isfinite(lambda) && lambda >= 1.0, "lambda must be >= 1");
  require(modes >= 1, "truncation K*lambda must be a positive integer");
  require(epsilon > 0.0 && epsilon < epsilon_limit(j),
          "epsilon must satisfy 0 < epsilon < 1/(100 j^5) = " + std::to_string(epsilon_limit(j)));
}

ModelParams ModelParams::with_kmax(int j, double lambda, double kmax, double epsilon, bool dealias) {
  ModelParams p;
  p.j = j;
  p.lambda = lambda;
  p.dealias = dealias;
  p.epsilon = epsilon > 0.0 ? epsilon : 0.5 * epsilon_limit(std::max(j, 1));
  double m = kmax * lambda;
  require(std::isfinite(m) && m >= 1.0 - 1e-9 && std::abs(m - std::round(m)) <= 1e-9 * std::max(1.0, m),
          "kmax * lambda must be a positive integer");
  p.modes = static_cast<int>(std::lround(m));
  p.validate();
  return p;
}

bool ModelParams::same_lattice(const ModelParams& o) const {
  return j == o.j && lambda == o.lambda && modes == o.modes;
}

SpatialSpectrum::SpatialSpectrum(ModelParams params)
    : params_(params), amps_(2 * static_cast<std::size_t>(params.modes) + 1) {
  require(params.modes >= 1, "spectrum needs at least one mode");
}

cplx SpatialSpectrum::operator[](int n) const {
  if (n == 0 || n > params_.modes || n < -params_.modes) return {0.0, 0.0};
  return amps_[static_cast<std::size_t>(n + params_.modes)];
}

cplx& SpatialSpectrum::at(int n) {
  if (n == 0 || n > params_.modes || n < -params_.modes)
    throw ValidationError("lattice index " + std::to_string(n) + " outside 0 < |n| <= " +
                          std::to_string(params_.modes));
  return amps_[static_cast<std::size_t>(n + params_.modes)];
}

bool SpatialSpectrum::is_hermitian(double tol) const {
  double scale = 0.0;
  for (const auto& a : amps_) scale = std::max(scale, std::abs(a));
  for (int n = 1; n <= params_.modes; ++n)
    if (std::abs((*this)[n] - std::conj((*this)[-n])) > tol * std::max(scale, 1e-300)) return false;
  return true;
}

bool SpatialSpectrum::is_zero() const {
  return std::all_of(amps_.begin(), amps_.end(), [](cplx a) { return a == cplx{}; });
}

std::size_t SpatialSpectrum::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(amps_.begin(), amps_.end(), [](cplx a) { return a != cplx{}; }));
}

SpatialSpectrum& SpatialSpectrum::operator+=(const SpatialSpectrum& o) {
  require(params_.same_lattice(o.params_), "spectrum lattices differ");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
  return *this;
}

SpatialSpectrum& SpatialSpectrum::operator-=(const SpatialSpectrum& o) {
  require(params_.same_lattice(o.params_), "spectrum lattices differ");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
  return *this;
}

SpatialSpectrum& SpatialSpectrum::operator*=(cplx c) {
  for (auto& a : amps_) a *= c;
  return *this;
}

FieldSamples FieldSamples::uniform(double lambda, std::size_t count) {
  FieldSamples f;
  f.lambda = lambda;
  f.x.resize(count);
  f.values.assign(count, cplx{});
  for (std::size_t m = 0; m < count; ++m)
    f.x[m] = kTwoPi * lambda * static_cast<double>(m) / static_cast<double>(count);
  return f;
}

bool FieldSamples::is_real(double tol) const {
  return std::all_of(values.begin(), values.end(),
                     [tol](cplx v) { return std::abs(v.imag()) <= tol; });
}

ForwardResult forward_transform(const FieldSamples& field, const ModelParams& params) {
  params.validate();
  const std::size_t count = field.values.size();
  const int M = params.modes;
  require(field.lambda == params.lambda, "field period does not match params.lambda");
  require(count >= 2 * static_cast<std::size_t>(M) + 1,
          "forward_transform needs at least 2*K*lambda+1 samples (have " + std::to_string(count) +
              ", need " + std::to_string(2 * M + 1) + ")");
  if (!field.x.empty()) {
    require(field.x.size() == count, "sample coordinates and values differ in length");
    const double h = params.period() / static_cast<double>(count);
    for (std::size_t m = 0; m < count; ++m) {
      if (std::abs(field.x[m] - h * static_cast<double>(m)) > 1e-9 * params.period())
        throw ValidationError("forward_transform requires the uniform grid x_m = 2 pi lambda m / N; "
                              "sample " + std::to_string(m) + " is off-grid");
    }
  }

  std::vector<cplx> hat(count);
  fft::forward(field.values, hat);
  const double scale = kSqrtTwoPi * params.lambda / static_cast<double>(count);

  ForwardResult out{SpatialSpectrum(params), {}, 0.0, {}};
  double total = 0.0, aliased = 0.0;
  for (std::size_t b = 0; b < count; ++b) {
    double e = std::norm(hat[b]);
    total += e;
    long n = signed_bin(b, count);
    if (n == 0) {
      out.zero_mode = scale * hat[b];
    } else if (std::abs(n) <= M) {
      out.spectrum.at(static_cast<int>(n)) = scale * hat[b];
    } else {
      aliased += e;
    }
  }
  // Energy fractions below ~1e-20 are round-off from a band-limited input.
  out.aliased_fraction = total > 0.0 ? aliased / total : 0.0;
  if (out.aliased_fraction > 1e-20) {
    std::ostringstream msg;
    msg << "input carries energy above K (fraction " << out.aliased_fraction
        << "); the spectrum is aliased";
    out.warnings.push_back(msg.str());
  }
  return out;
}

FieldSamples inverse_transform(const SpatialSpectrum& spec, std::size_t count, cplx zero_mode) {
  const auto& p = spec.params();
  const int M = p.modes;
  if (count == 0) count = fft::good_size(2 * static_cast<std::size_t>(M) + 1);
  require(count >= 2 * static_cast<std::size_t>(M) + 1, "inverse_transform needs >= 2*K*lambda+1 samples");
  std::vector<cplx> hat(count);
  for (int n = -M; n <= M; ++n)
    if (n != 0) hat[bin_of(n, count)] = spec[n];
  hat[0] = zero_mode;
  FieldSamples f = FieldSamples::uniform(p.lambda, count);
  fft::backward(hat, f.values);
  const double scale = 1.0 / (kSqrtTwoPi * p.lambda);
  for (auto& v : f.values) v *= scale;
  return f;
}

ConvolveResult convolve(const SpatialSpectrum& a, const SpatialSpectrum& b) {
  const auto& p = a.params();
  require(p.same_lattice(b.params()), "convolve: inputs live on different lattices (lambda or K differ)");
  const int M = p.modes;
  std::vector<int> supp_a, supp_b;
  for (int n = -M; n <= M; ++n) {
    if (a[n] != cplx{}) supp_a.push_back(n);
    if (b[n] != cplx{}) supp_b.push_back(n);
  }
  std::vector<cplx> full(4 * static_cast<std::size_t>(M) + 1);
  for (int n1 : supp_b)
    for (int n2 : supp_a) full[static_cast<std::size_t>(n1 + n2 + 2 * M)] += a[n2] * b[n1];

  ConvolveResult out{SpatialSpectrum(p), {}, 0.0};
  const double w = 1.0 / p.lambda;
  for (int n = -2 * M; n <= 2 * M; ++n) {
    cplx v = w * full[static_cast<std::size_t>(n + 2 * M)];
    if (n == 0)
      out.zero_mode = v;
    else if (std::abs(n) <= M)
      out.spectrum.at(n) = v;
    else
      out.truncation_loss += w * std::norm(v);
  }
  return out;
}

ConvolveResult multiply(const SpatialSpectrum& a, const SpatialSpectrum& b) {
  const auto& p = a.params();
  require(p.same_lattice(b.params()), "multiply: inputs live on different lattices (lambda or K differ)");
  const auto M = static_cast<std::size_t>(p.modes);
  const std::size_t count = fft::good_size(p.dealias ? 3 * M + 1 : 2 * M + 1);

  thread_local std::vector<cplx> ha, hb, fa, fb;
  ha.assign(count, cplx{});
  hb.assign(count, cplx{});
  fa.resize(count);
  fb.resize(count);
  for (int n = -p.modes; n <= p.modes; ++n) {
    if (n == 0) continue;
    ha[bin_of(n, count)] = a[n];
    hb[bin_of(n, count)] = b[n];
  }
  fft::backward(ha, fa);
  fft::backward(hb, fb);
  for (std::size_t m = 0; m < count; ++m) fa[m] *= fb[m];
  fft::forward(fa, ha);

  // c^2 * sqrt(2 pi) lambda / count with c = 1 / (sqrt(2 pi) lambda)
  const double scale = 1.0 / (kSqrtTwoPi * p.lambda * static_cast<double>(count));
  ConvolveResult out{SpatialSpectrum(p), {}, 0.0};
  for (std::size_t bIdx = 0; bIdx < count; ++bIdx) {
    long n = signed_bin(bIdx, count);
    cplx v = scale * ha[bIdx];
    if (n == 0)
      out.zero_mode = v;
    else if (std::abs(n) <= p.modes)
      out.spectrum.at(static_cast<int>(n)) = v;
    else
      out.truncation_loss += std::norm(v) / p.lambda;
  }
  return out;
}

double hs_norm(const SpatialSpectrum& spec, double s) {
  const auto& p = spec.params();
  double sum = 0.0;
  for (int n = -p.modes; n <= p.modes; ++n) {
    if (n == 0) continue;
    double e = std::norm(spec[n]);
    if (e == 0.0) continue;
    sum += std::pow(bracket(p.frequency(n)), 2.0 * s) * e;
  }
  return std::sqrt(sum / p.lambda);
}

SpatialSpectrum derivative(const SpatialSpectrum& spec, int order) {
  require(order >= 0, "derivative order must be non-negative");
  // Exact powers of i; std::pow on complex goes through exp/log.
  static const cplx ipow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const cplx unit = ipow[order % 4];
  return apply_symbol(spec, [order, unit](double k) {
    double r = 1.0;
    for (int i = 0; i < order; ++i) r *= k;
    return unit * r;
  });
}

}  // namespace dcl
