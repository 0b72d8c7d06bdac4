// SPDX-License-Identifier: Apache-2.0

#include "odal/rational.hpp"

#include <limits>

namespace odal {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || -num > kMax || den > kMax) {
    throw Error(ErrorCode::kInvalidArgument, "rational overflow");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::string Rational::to_fixed(int digits, bool round_half_up) const {
  __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = num_ < 0;
  const __int128 magnitude = negative ? -static_cast<__int128>(num_) : num_;
  __int128 scaled = magnitude * scale / den_;
  if (round_half_up) {
    const __int128 remainder = magnitude * scale % den_;
    if (remainder * 2 >= den_) ++scaled;
  }
  const __int128 whole = scaled / scale;
  __int128 frac = scaled % scale;
  std::string out = std::to_string(static_cast<long long>(whole));
  if (digits > 0) {
    std::string frac_digits(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
      frac_digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
      frac /= 10;
    }
    out += "." + frac_digits;
  }
  if (negative && scaled != 0) out.insert(out.begin(), '-');
  return out;
}

}  // namespace odal
