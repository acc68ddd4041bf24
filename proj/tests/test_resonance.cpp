#include "dcl/error.hpp"
#include "dcl/resonance.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace dcl;

namespace {

BigInt ipow(std::int64_t b, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

struct Brute {
  std::uint64_t triples = 0, violations = 0;
  double min_slack = 1e300;
};

// Nested-loop reference over every admissible triple, in arbitrary precision.
Brute brute(std::int64_t K, int j) {
  Brute b;
  const int e = 2 * j + 1;
  for (std::int64_t k1 = -K; k1 <= K; ++k1)
    for (std::int64_t k2 = -K; k2 <= K; ++k2) {
      const std::int64_t k = k1 + k2;
      if (!k1 || !k2 || !k || std::abs(k) > K) continue;
      ++b.triples;
      const std::int64_t mn = std::min({std::abs(k), std::abs(k1), std::abs(k2)});
      const std::int64_t mx = std::max({std::abs(k), std::abs(k1), std::abs(k2)});
      const BigInt lhs = abs(BigInt(ipow(k, e) - ipow(k1, e) - ipow(k2, e))) * ipow(4, j);
      const BigInt rhs = BigInt(e) * mn * ipow(mx, 2 * j);
      if (lhs < rhs) ++b.violations;
      b.min_slack = std::min(b.min_slack, static_cast<double>(lhs.convert_to<long double>() / rhs.convert_to<long double>()));
    }
  return b;
}

}  // namespace

TEST_CASE("resonance magnitudes") {
  CHECK(resonance_magnitude(Triple::from_pair(1, 1), 2) == 30);
  CHECK(resonance_magnitude(Triple{1, 2, -1}, 2) == 30);
  CHECK(resonance_magnitude(Triple::from_pair(1, 1), 3) == 126);
  CHECK(resonance_magnitude(Triple::from_pair(3, -1), 2) == 210);  // 32 - 243 - (-1)
  // symmetric under swapping k1, k2 and under a global sign flip
  for (std::int64_t a = -6; a <= 6; ++a)
    for (std::int64_t b = -6; b <= 6; ++b) {
      if (!a || !b || a + b == 0) continue;
      const auto m = resonance_magnitude(Triple::from_pair(a, b), 3);
      CHECK(m == resonance_magnitude(Triple::from_pair(b, a), 3));
      CHECK(m == resonance_magnitude(Triple::from_pair(-a, -b), 3));
    }
  // beyond 128 bits
  const std::int64_t big = std::int64_t{1} << 20;
  CHECK(resonance_magnitude(Triple::from_pair(big, big), 4) == ipow(2 * big, 9) - 2 * ipow(big, 9));
}

TEST_CASE("kmin and kmax") {
  Triple t{-3, 2, -5};
  CHECK(t.admissible());
  CHECK(t.kmin() == 2);
  CHECK(t.kmax() == 5);
  CHECK_FALSE(Triple({0, 1, -1}).admissible());
  CHECK_FALSE(Triple({3, 1, 1}).admissible());
}

TEST_CASE("lattice scaling") {
  const Triple t = Triple::from_pair(1, 1);
  CHECK(lattice_resonance(t, 2, 1.0) == 30.0);
  CHECK(lattice_resonance(t, 2, 2.0) == doctest::Approx(30.0 / 32.0));
  CHECK(lattice_resonance_bound(t, 2, 1.0) == doctest::Approx(5.0));
  CHECK(lattice_resonance_bound(t, 2, 2.0) == doctest::Approx(5.0 / 32.0));
  // both sides scale by lambda^{-(2j+1)}, so the ratio is lambda-free
  const Triple u = Triple::from_pair(7, -3);
  for (double lam : {1.0, 3.0, 10.0})
    CHECK(lattice_resonance(u, 3, lam) / lattice_resonance_bound(u, 3, lam) ==
          doctest::Approx(lattice_resonance(u, 3, 1.0) / lattice_resonance_bound(u, 3, 1.0)));
}

TEST_CASE("max case") {
  CHECK(classify_max_case(5, -2, 1) == MaxCase::A);
  CHECK(classify_max_case(1, -7, 3) == MaxCase::B);
  CHECK(classify_max_case(1, 2, -3) == MaxCase::C);
  CHECK(classify_max_case(3, -3, 1) == MaxCase::A);
  CHECK(classify_max_case(1, 3, -3) == MaxCase::B);
  CHECK(classify_max_case(0, 0, 0) == MaxCase::A);
  CHECK(to_char(MaxCase::C) == 'c');
}

TEST_CASE("certificate matches a brute-force count") {
  struct Case {
    std::int64_t K;
    int j;
  };
  for (Case c : {Case{12, 2}, Case{12, 3}, Case{10, 4}, Case{16, 12}}) {
    INFO("K = " << c.K << ", j = " << c.j);
    auto cert = verify_resonance(c.K, c.j, 7);
    auto ref = brute(c.K, c.j);
    CHECK(cert.triples_checked == ref.triples);
    CHECK(cert.violations == ref.violations);
    CHECK(cert.violations == 0);
    CHECK(cert.min_slack == doctest::Approx(ref.min_slack).epsilon(1e-12));
    CHECK(cert.identity_checks == cert.triples_checked);
    CHECK(cert.identity_failures == 0);
    CHECK(cert.max_case_failures == 0);
    CHECK(cert.case_counts[0] + cert.case_counts[1] + cert.case_counts[2] == cert.triples_checked);
    CHECK(cert.argmin.admissible());
    CHECK(cert.wide_fallback == (c.j == 12));
  }
  // the tightest triples for j = 2 are (2m, m, m): 30 * 16 / (5 * 16) = 6 (the ratio is scale-free)
  auto c2 = verify_resonance(32, 2);
  CHECK(c2.min_slack == doctest::Approx(6.0));
  CHECK(c2.argmin.kmax() == 2 * c2.argmin.kmin());
  CHECK(lattice_resonance(c2.argmin, 2, 1.0) / lattice_resonance_bound(c2.argmin, 2, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("certificate for j = 3 up to 32 and seed determinism") {
  auto a = verify_resonance(32, 3, 5), b = verify_resonance(32, 3, 5);
  CHECK(a.violations == 0);
  CHECK(a.triples_checked == b.triples_checked);
  for (int i = 0; i < 3; ++i) CHECK(a.case_counts[i] == b.case_counts[i]);
  CHECK_THROWS_AS(verify_resonance(1, 2), ValidationError);
  CHECK_THROWS_AS(verify_resonance(8, 0), ValidationError);
}
