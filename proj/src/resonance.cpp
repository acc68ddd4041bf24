#include "dcl/resonance.hpp"

#include "dcl/error.hpp"
#include "dcl/parallel.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

namespace dcl {

std::int64_t Triple::kmin() const {
  return std::min({std::abs(k), std::abs(k1), std::abs(k2)});
}

std::int64_t Triple::kmax() const {
  return std::max({std::abs(k), std::abs(k1), std::abs(k2)});
}

BigInt resonance_magnitude(const Triple& t, int j) {
  require(j >= 1, "j must be >= 1");
  const int e = 2 * j + 1;
  BigInt r = big_pow(t.k, e) - big_pow(t.k1, e) - big_pow(t.k2, e);
  return abs(r);
}

double lattice_resonance(const Triple& t, int j, double lambda) {
  return static_cast<double>(resonance_magnitude(t, j).convert_to<long double>() /
                             std::pow(static_cast<long double>(lambda), 2 * j + 1));
}

double lattice_resonance_bound(const Triple& t, int j, double lambda) {
  const long double kmin = t.kmin() / static_cast<long double>(lambda);
  const long double kmax = t.kmax() / static_cast<long double>(lambda);
  return static_cast<double>((2.0L * j + 1.0L) * std::pow(4.0L, -j) * kmin * std::pow(kmax, 2 * j));
}

char to_char(MaxCase c) { return static_cast<char>('a' + static_cast<int>(c)); }

MaxCase classify_max_case(const BigInt& s, const BigInt& s1, const BigInt& s2) {
  const BigInt a = abs(s), b = abs(s1), c = abs(s2);
  if (a >= b && a >= c) return MaxCase::A;
  if (b >= c) return MaxCase::B;
  return MaxCase::C;
}

namespace {

struct Partial {
  std::uint64_t triples = 0, violations = 0, id_checks = 0, id_fail = 0, case_fail = 0;
  std::uint64_t cases[3] = {0, 0, 0};
  double min_slack = std::numeric_limits<double>::infinity();
  Triple argmin;
  bool wide = false;
};

// Fast path: all quantities fit comfortably in 128 bits.
struct Fast {
  int e;
  std::vector<i128> pow_table;  // n^e for n in [-K, K], index n + K
  std::int64_t K;
  i128 at(std::int64_t n) const { return pow_table[static_cast<std::size_t>(n + K)]; }
};

}  // namespace

ResonanceCertificate verify_resonance(std::int64_t kmax, int j, std::uint64_t seed) {
  require(kmax >= 2, "resonance certificate needs Kmax >= 2");
  require(j >= 1, "j must be >= 1");
  const int e = 2 * j + 1;
  const std::int64_t four_j_factor = std::int64_t{1} << (2 * j);  // 4^j

  // Fast path needs 4^j * res and (2j+1) kmin kmax^{2j} below 2^126.
  std::optional<i128> top = checked_pow(kmax, e);
  const bool fast = j <= 30 && top && abs128(*top) < (static_cast<i128>(1) << 118) / (4 * four_j_factor);
  Fast table{e, {}, kmax};
  if (fast) {
    table.pow_table.resize(static_cast<std::size_t>(2 * kmax + 1));
    for (std::int64_t n = -kmax; n <= kmax; ++n) table.pow_table[static_cast<std::size_t>(n + kmax)] = *checked_pow(n, e);
  }
  const bool neg = j % 2 == 0;  // P(k) = (-1)^{j+1} k^e

  const auto rows = static_cast<std::size_t>(2 * kmax + 1);
  const std::size_t nchunks = std::min<std::size_t>(thread_count(), rows);
  std::vector<Partial> parts(std::max<std::size_t>(1, nchunks));
  parallel_chunks(
      rows,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Partial& P = parts[chunk];
        P.wide = !fast;
        for (std::size_t idx = begin; idx < end; ++idx) {
          const std::int64_t k1 = static_cast<std::int64_t>(idx) - kmax;
          if (k1 == 0) continue;
          // Per-row stream: results independent of the chunking.
          std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(idx));
          std::uniform_int_distribution<std::int64_t> tau_dist(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
          const std::int64_t lo = std::max(-kmax, -kmax - k1), hi = std::min(kmax, kmax - k1);
          for (std::int64_t k2 = lo; k2 <= hi; ++k2) {
            const std::int64_t k = k1 + k2;
            if (k2 == 0 || k == 0) continue;
            const Triple t{k, k1, k2};
            ++P.triples;
            const std::int64_t mn = t.kmin(), mx = t.kmax();
            const std::int64_t tau1 = tau_dist(rng), tau2 = tau_dist(rng);
            const std::int64_t tau = tau1 + tau2;
            double slack;
            bool ok, id_ok, case_ok;
            MaxCase mc;
            if (fast) {
              const i128 pk = table.at(k), p1 = table.at(k1), p2 = table.at(k2);
              const i128 res = abs128(pk - p1 - p2);
              const i128 rhs = static_cast<i128>(e) * mn * *checked_pow(mx, 2 * j);
              ok = res * four_j_factor >= rhs;
              slack = to_double(res * four_j_factor) / to_double(rhs);
              const i128 P_k = neg ? -pk : pk, P_1 = neg ? -p1 : p1, P_2 = neg ? -p2 : p2;
              const i128 s = tau - P_k, s1 = tau1 - P_1, s2 = tau2 - P_2;
              id_ok = (s - s1 - s2) == -(P_k - P_1 - P_2);
              const BigInt bs = static_cast<BigInt>(s), bs1 = static_cast<BigInt>(s1), bs2 = static_cast<BigInt>(s2);
              mc = classify_max_case(bs, bs1, bs2);
              const i128 mval = std::max({abs128(s), abs128(s1), abs128(s2)});
              // max >= bound / 3  <=>  3 * 4^j * max >= (2j+1) kmin kmax^{2j}
              case_ok = 3 * four_j_factor * mval >= rhs;
            } else {
              const BigInt pk = big_pow(k, e), p1 = big_pow(k1, e), p2 = big_pow(k2, e);
              const BigInt res = abs(BigInt(pk - p1 - p2));
              const BigInt rhs = BigInt(e) * mn * big_pow(mx, 2 * j);
              ok = res * four_j_factor >= rhs;
              slack = static_cast<double>(res.convert_to<long double>() * four_j_factor /
                                          rhs.convert_to<long double>());
              const BigInt P_k = neg ? BigInt(-pk) : pk, P_1 = neg ? BigInt(-p1) : p1, P_2 = neg ? BigInt(-p2) : p2;
              const BigInt s = BigInt(tau) - P_k, s1 = BigInt(tau1) - P_1, s2 = BigInt(tau2) - P_2;
              id_ok = BigInt(s - s1 - s2) == BigInt(-(P_k - P_1 - P_2));
              mc = classify_max_case(s, s1, s2);
              const BigInt mval = std::max({BigInt(abs(s)), BigInt(abs(s1)), BigInt(abs(s2))});
              case_ok = BigInt(3 * four_j_factor) * mval >= rhs;
            }
            if (!ok) ++P.violations;
            if (slack < P.min_slack) {
              P.min_slack = slack;
              P.argmin = t;
            }
            ++P.id_checks;
            if (!id_ok) ++P.id_fail;
            if (!case_ok) ++P.case_fail;
            ++P.cases[static_cast<int>(mc)];
          }
        }
      },
      nchunks);

  ResonanceCertificate cert;
  cert.j = j;
  cert.kmax = kmax;
  cert.seed = seed;
  cert.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& P : parts) {
    cert.triples_checked += P.triples;
    cert.violations += P.violations;
    cert.identity_checks += P.id_checks;
    cert.identity_failures += P.id_fail;
    cert.max_case_failures += P.case_fail;
    for (int c = 0; c < 3; ++c) cert.case_counts[c] += P.cases[c];
    cert.wide_fallback = cert.wide_fallback || P.wide;
    if (P.min_slack < cert.min_slack) {
      cert.min_slack = P.min_slack;
      cert.argmin = P.argmin;
    }
  }
  return cert;
}

}  // namespace dcl
