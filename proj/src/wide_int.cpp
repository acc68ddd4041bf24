#include "dcl/wide_int.hpp"

#include <algorithm>

namespace dcl {

namespace {
constexpr i128 kI128Max = static_cast<i128>((~static_cast<unsigned __int128>(0)) >> 1);
}

std::optional<i128> checked_pow(std::int64_t base, int exp) {
  i128 result = 1;
  i128 b = base;
  i128 mag = abs128(b);
  for (int i = 0; i < exp; ++i) {
    i128 r = abs128(result);
    if (mag != 0 && r > kI128Max / mag) return std::nullopt;
    result *= b;
  }
  return result;
}

BigInt big_pow(std::int64_t base, int exp) {
  BigInt result = 1;
  BigInt b = base;
  for (int i = 0; i < exp; ++i) result *= b;
  return result;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string out;
  while (u > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

double to_double(i128 v) { return static_cast<double>(v); }

}  // namespace dcl
