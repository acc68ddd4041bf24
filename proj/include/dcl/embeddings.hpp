#pragma once

// Pointwise-weight scans for the embedding chain
//
//   X_{s,1/(2j)} <= C Z^s <= C X_{s,(2j-1)/(2j)},   X_{s,1/2}(D1 u D2) <= C Z^s(D1 u D2),
//
// and empirical probes of the bilinear estimates in Z^s.

#include "dcl/bourgain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dcl {

/// Admissible regularity window -j + 3/2 + j eps <= s <= 1 - j/2 - j eps.
struct SWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double s) const { return s >= lo && s <= hi; }
};

SWindow admissible_window(int j, double epsilon);

struct TrendPoint {
  int bound = 0;          ///< scan box |k| <= bound
  double max_ratio = 0.0;
  double argmax_k = 0.0;
  double argmax_sigma = 0.0;
};

struct EmbeddingCheck {
  std::string name;       ///< e.g. "lower X_{s,1/(2j)} <= Z"
  std::string regions;    ///< e.g. "D2" or "D1+D5"
  std::vector<TrendPoint> trend;
  double growth = 0.0;    ///< largest ratio between consecutive trend maxima
  bool pass = false;
};

struct EmbeddingReport {
  int j = 0;
  double s = 0.0;
  double epsilon = 0.0;
  SWindow window;
  bool in_window = false;
  std::vector<EmbeddingCheck> checks;
  bool pass = false;
};

struct EmbeddingScan {
  std::vector<int> bounds = {128, 256, 512};
  double growth_tolerance = 1.01;   ///< allowed max-ratio growth per doubling
  bool force = false;               ///< run even outside the admissible window
};

/// Scans (k, sigma) with 0 < k <= bound on the lattice of params.lambda and
/// sigma >= 0 on a log grid plus every region boundary and its neighbours.
/// A check passes iff every maximum is finite and the maxima stop growing.
EmbeddingReport verify_embeddings(double s, const ModelParams& params, const EmbeddingScan& scan = {});

// ---------------------------------------------------------------------------
// Bilinear probes

enum class BilinearForm { DxDxSmoothed, ProductDx, ProductSmoothed };

std::string to_string(BilinearForm f);
BilinearForm parse_bilinear_form(const std::string& name);

/// Symbol of the product operator before the <sigma>^{-1} weight:
///   dxdx_smoothed:    ik/(1+k^2) (i k1)(i k2)
///   product_dx:       ik
///   product_smoothed: ik/(1+k^2)
cplx bilinear_symbol(BilinearForm f, double k1, double k2);

/// <sigma>^{-1} applied to the space-time product of u, v under the form.
SpaceTimeSpectrum bilinear_output(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v,
                                  BilinearForm form);

struct ProbeResult {
  bool defined = false;   ///< false when an input has zero Z^s norm
  double ratio = 0.0;     ///< Z(out) / (Z(u) Z(v))
  double zs_out = 0.0, zs_u = 0.0, zs_v = 0.0;
};

ProbeResult bilinear_probe(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v, double s,
                           BilinearForm form);

struct ProbeBatchConfig {
  int j = 2;
  double s = -0.25;
  double epsilon = 0.0;      ///< 0: default for j
  int data_modes = 32;       ///< random data on 0 < |k| <= data_modes (lambda = 1)
  double sigma_width = 2.0;  ///< random data on |sigma| <= sigma_width
  double dtau = 0.25;
  int pairs = 100;
  std::uint64_t seed = 1;
  BilinearForm form = BilinearForm::DxDxSmoothed;
  bool force = false;        ///< skip the s-window check
};

struct ProbeBatch {
  ProbeBatchConfig cfg;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

/// Real-field random spectrum with unit Z^s norm, seeded deterministically.
SpaceTimeSpectrum random_spectrum(const ModelParams& params, int data_modes, double sigma_width,
                                  double dtau, double s, std::uint64_t seed);

ProbeBatch bilinear_probe_batch(const ProbeBatchConfig& cfg);

}  // namespace dcl
