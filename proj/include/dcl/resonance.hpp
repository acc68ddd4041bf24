#pragma once

// Exhaustive integer certificate for the resonance bound
//
//   |k^{2j+1} - k1^{2j+1} - k2^{2j+1}| >= (2j+1) 4^{-j} kmin kmax^{2j},   k = k1 + k2,
//
// and for its consequence 3 max(|sigma|, |sigma1|, |sigma2|) >= |sigma - sigma1 - sigma2|.

#include "dcl/wide_int.hpp"

#include <cstdint>
#include <string>

namespace dcl {

struct Triple {
  std::int64_t k = 0, k1 = 0, k2 = 0;

  static Triple from_pair(std::int64_t k1, std::int64_t k2) { return {k1 + k2, k1, k2}; }
  std::int64_t kmin() const;
  std::int64_t kmax() const;
  /// k = k1 + k2 with all three nonzero.
  bool admissible() const { return k == k1 + k2 && k != 0 && k1 != 0 && k2 != 0; }
};

/// |k^{2j+1} - k1^{2j+1} - k2^{2j+1}|, exact.
BigInt resonance_magnitude(const Triple& t, int j);

/// The same on the lattice Z/lambda: |.| / lambda^{2j+1} for integer indices.
double lattice_resonance(const Triple& indices, int j, double lambda);

/// (2j+1) 4^{-j} kmin kmax^{2j} on the lattice Z/lambda.
double lattice_resonance_bound(const Triple& indices, int j, double lambda);

enum class MaxCase { A, B, C };  ///< |sigma|, |sigma1| or |sigma2| is the largest

char to_char(MaxCase c);

/// Which modulus attains max(|sigma|, |sigma1|, |sigma2|); ties go to the lowest label.
MaxCase classify_max_case(const BigInt& sigma, const BigInt& sigma1, const BigInt& sigma2);

struct ResonanceCertificate {
  int j = 0;
  std::int64_t kmax = 0;
  std::uint64_t triples_checked = 0;
  std::uint64_t violations = 0;
  double min_slack = 0.0;          ///< min of resonance / bound
  Triple argmin;
  std::uint64_t identity_checks = 0;
  std::uint64_t identity_failures = 0;
  std::uint64_t max_case_failures = 0;
  std::uint64_t case_counts[3] = {0, 0, 0};
  std::uint64_t seed = 0;
  bool wide_fallback = false;      ///< some powers exceeded 128 bits
};

/// Every admissible triple with |k|, |k1|, |k2| <= kmax. For each triple a pair
/// of random integer tau1, tau2 (tau = tau1 + tau2) checks the identity
/// sigma - sigma1 - sigma2 = -(P(k) - P(k1) - P(k2)) and the max-case bound.
ResonanceCertificate verify_resonance(std::int64_t kmax, int j, std::uint64_t seed = 1);

}  // namespace dcl
