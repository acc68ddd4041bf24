#pragma once

// Exact integer helpers for odd powers of lattice frequencies. Values such as
// k^(2j+1) overflow 64 bits quickly, so the fast path is __int128 with
// explicit overflow detection and the slow path is boost::multiprecision.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace dcl {

using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

/// base^exp, or nullopt if the result does not fit in a signed 128-bit integer.
std::optional<i128> checked_pow(std::int64_t base, int exp);

BigInt big_pow(std::int64_t base, int exp);

i128 abs128(i128 v);

std::string to_string(i128 v);

/// Nearest double; exact for |v| < 2^53.
double to_double(i128 v);

}  // namespace dcl
