#pragma once

// Discrete space-time spectra and the restriction-type norms built on them.
//
// Each lattice row k carries cells in the modulation variable sigma = tau - P(k):
// cell m is centred at sigma = m dtau and covers [(m - 1/2) dtau, (m + 1/2) dtau).
// In tau these are uniform grids shifted by P(k); for lambda = 1 and dtau = 1/q
// (q integer) they are all the same global grid tau in (1/q) Z.
//
// Measures: (dk)_lambda gives each row weight 1/lambda; L^2(dtau) is
// (sum |a|^2 dtau)^{1/2} and L^1(dtau) is sum |a| dtau.

#include "dcl/lattice.hpp"
#include "dcl/wide_int.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dcl {

/// Run of consecutive sigma cells starting at cell index `start`.
struct Block {
  i128 start = 0;
  std::vector<cplx> amps;
  i128 end() const { return start + static_cast<i128>(amps.size()); }
};

class SpaceTimeSpectrum {
 public:
  SpaceTimeSpectrum(ModelParams params, double dtau);

  const ModelParams& params() const { return params_; }
  int modes() const { return params_.modes; }
  double dtau() const { return dtau_; }

  /// Sorted, non-overlapping blocks of row n (empty for n = 0 or |n| > M).
  const std::vector<Block>& row(int n) const;
  /// Replaces row n; blocks must be sorted and disjoint.
  void set_row(int n, std::vector<Block> blocks);

  cplx get(int n, i128 m) const;
  void set(int n, i128 m, cplx a);
  void add(int n, i128 m, cplx a);

  double sigma(i128 m) const { return to_double(m) * dtau_; }
  /// tau = P(k) + sigma at the cell centre.
  double tau(int n, i128 m) const;

  std::size_t cell_count() const;
  bool is_zero() const;

  /// Calls f(n, m, amplitude) for every stored cell, rows in increasing n.
  void for_each(const std::function<void(int, i128, cplx)>& f) const;

  SpaceTimeSpectrum& operator*=(cplx c);
  SpaceTimeSpectrum& operator+=(const SpaceTimeSpectrum& o);
  friend SpaceTimeSpectrum operator+(SpaceTimeSpectrum a, const SpaceTimeSpectrum& b) { return a += b; }
  friend SpaceTimeSpectrum operator*(cplx c, SpaceTimeSpectrum a) { return a *= c; }

 private:
  std::vector<Block>& row_ref(int n);

  ModelParams params_;
  double dtau_;
  std::vector<std::vector<Block>> rows_;
};

// ---------------------------------------------------------------------------
// Regions

enum class RegionLabel { D1, D2, D3, D4, D5, Excluded };

std::string to_string(RegionLabel r);

/// c_j = (2j + 1) 4^{-j} / 3.
double region_constant(int j);

/// sigma = tau - P(k).
double sigma(double k, double tau, const ModelParams& params);

/// Bit i set iff the literal defining predicate of D_{i+1} holds at (n, sigma).
/// Points outside 1/lambda <= |k| <= K have mask 0.
unsigned region_membership(int n, double sigma, const ModelParams& params);

/// Region of (n, sigma): lowest set bit of the membership mask, so the |k| = 1
/// overlaps go to the |k| >= 1 family.
RegionLabel classify_sigma(int n, double sigma, const ModelParams& params);

/// Region of the lattice point k = n / lambda at time frequency tau.
RegionLabel classify_region(int n, double tau, const ModelParams& params);

struct PartitionReport {
  int j = 0;
  double lambda = 1.0;
  double dtau = 0.0;
  double sigma_bound = 0.0;
  int kmax_index = 0;
  std::uint64_t points = 0;
  std::uint64_t uncovered = 0;        ///< no predicate holds
  std::uint64_t overlaps = 0;         ///< several predicates hold away from |k| = 1
  std::uint64_t tie_points = 0;       ///< overlaps at |k| = 1, resolved by the tie rule
  std::uint64_t per_region[5] = {0, 0, 0, 0, 0};
  bool pass = false;
};

/// Exhaustive scan over sigma = m dtau, |sigma| <= sigma_bound, 0 < |n| <= M.
PartitionReport verify_partition(const ModelParams& params, double dtau, double sigma_bound);

// ---------------------------------------------------------------------------
// Norms

enum class NormKind { Hs, Xsb, Ys, Zs, Ws };

struct NormSpec {
  NormKind kind = NormKind::Xsb;
  double s = 0.0;
  double b = 0.0;
};

double xsb_norm(const SpaceTimeSpectrum& u, double s, double b);
double ys_norm(const SpaceTimeSpectrum& u, double s);
/// Requires j >= 2.
double zs_norm(const SpaceTimeSpectrum& u, double s);
double ws_norm(const SpaceTimeSpectrum& u, double s);
/// Hs is the X_{s,0} norm here. Throws for Zs when j < 2.
double norm(const SpaceTimeSpectrum& u, const NormSpec& spec);

/// Restriction of u to the cells whose centre lies in one of the given regions.
SpaceTimeSpectrum project(const SpaceTimeSpectrum& u, std::initializer_list<RegionLabel> regions);

// ---------------------------------------------------------------------------
// Space-time products

/// Bilinear symbol m(k1, k2) of a product-type operator.
using PairSymbol = std::function<cplx(double k1, double k2)>;

struct SpaceTimeProduct {
  SpaceTimeSpectrum spectrum;
  bool exact_binning = true;  ///< cell shifts were exact integers
};

/// Out(k, tau) = (1 / 2 pi) int int m(k1, k2) u(k1, tau1) v(k2, tau - tau1) (dk1)_lambda dtau1,
/// k = k1 + k2, with the output spectrum on rows |n| <= out_modes (default: sum of inputs).
/// Cell of the output: m1 + m2 + (P(k1) + P(k2) - P(k)) / dtau, exact when lambda = 1 and
/// 1/dtau is an integer, otherwise rounded to the nearest cell.
SpaceTimeProduct spacetime_product(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v,
                                   const PairSymbol& m, int out_modes = 0);

/// Multiplies every cell by <sigma>^{-1} at the cell centre.
SpaceTimeSpectrum inverse_modulation(SpaceTimeSpectrum u);

}  // namespace dcl
