#pragma once

// Exact rational carrier used across the library. All quantities that
// describe maps (break points, slopes, ratios, limits) are Rat values kept
// in lowest terms.

#include <gmpxx.h>

#include <cstdint>
#include <iomanip>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plqi {

using Rat = mpq_class;
using Int = mpz_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse "p", "-p", "p/q". Anything else (decimals, spaces, zero
/// denominators) is rejected.
inline Rat parse_rat(std::string_view text)
{
  static const std::regex pattern(R"(^[+-]?[0-9]+(/[0-9]+)?$)");
  std::string s(text);
  if (!std::regex_match(s, pattern))
    throw ParseError("malformed rational: '" + s + "'");
  if (s.front() == '+')
    s.erase(0, 1);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    if (Int(s.substr(slash + 1)) == 0)
      throw ParseError("zero denominator: '" + std::string(text) + "'");
  }
  Rat r(s);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat &r)
{
  if (r.get_den() == 1)
    return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Decimal rendering with a fixed number of digits after the point.
inline std::string to_decimal(const Rat &r, int digits)
{
  Int scale = 1;
  for (int i = 0; i < digits; ++i)
    scale *= 10;
  Rat a = r < 0 ? Rat(-r) : r;
  // Round half away from zero.
  Rat scaled = a * scale + Rat(1, 2);
  Int q = scaled.get_num() / scaled.get_den();
  Int whole = q / scale, frac = q % scale;
  std::string f = frac.get_str();
  if (digits > 0)
    f = std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  std::string out = (r < 0 && q != 0 ? "-" : "") + whole.get_str();
  if (digits > 0)
    out += "." + f;
  return out;
}

inline Rat rat(long num, long den = 1)
{
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rabs(const Rat &r) { return r < 0 ? Rat(-r) : r; }

inline const Rat &rmax(const Rat &a, const Rat &b) { return a < b ? b : a; }
inline const Rat &rmin(const Rat &a, const Rat &b) { return b < a ? b : a; }

/// base^e for e >= 0, with 0^0 = 1.
inline Rat rpow(const Rat &base, long e)
{
  if (e < 0)
    return Rat(1) / rpow(base, -e);
  Rat result = 1;
  Rat b = base;
  while (e > 0) {
    if (e & 1)
      result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

inline int sign(const Rat &r) { return sgn(r); }

/// Largest integer k with ratio^k <= x, for ratio > 1 and x > 0.
inline long floor_log(const Rat &x, const Rat &ratio)
{
  long k = 0;
  Rat p = 1;
  if (x >= 1) {
    while (p * ratio <= x) {
      p *= ratio;
      ++k;
    }
  } else {
    while (p > x) {
      p /= ratio;
      --k;
    }
  }
  return k;
}

} // namespace plqi
