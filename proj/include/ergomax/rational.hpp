#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ergomax {

/// Arbitrary-precision rational scalar for the exact computation mode.
using Rational = boost::multiprecision::cpp_rational;

template <typename T>
inline constexpr bool is_exact_scalar_v = false;
template <>
inline constexpr bool is_exact_scalar_v<Rational> = true;

namespace num {

template <typename T>
inline T abs_value(const T& x) {
  if constexpr (is_exact_scalar_v<T>) {
    return x < 0 ? T(-x) : x;
  } else {
    return std::abs(x);
  }
}

template <typename T>
inline T from_int(std::int64_t k) {
  return T(k);
}

template <typename T>
inline double as_double(const T& x) {
  if constexpr (is_exact_scalar_v<T>) {
    return x.template convert_to<double>();
  } else {
    return static_cast<double>(x);
  }
}

/// base^e for integer e (e < 0 inverts; base must be nonzero then).
template <typename T>
inline T pow_int(T base, long e) {
  if (e < 0) {
    if (base == T(0)) throw std::domain_error("pow_int: zero base with negative exponent");
    base = T(1) / base;
    e = -e;
  }
  T result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// base^p with real exponent p; the exact mode only admits integer p.
template <typename T>
inline T pow_real(const T& base, double p) {
  if constexpr (is_exact_scalar_v<T>) {
    const double rounded = std::nearbyint(p);
    if (p != rounded) throw std::domain_error("pow_real: exact mode requires an integer exponent");
    return pow_int(base, static_cast<long>(rounded));
  } else {
    return std::pow(base, p);
  }
}

template <typename T>
inline std::int64_t ceil_to_int(const T& x) {
  if constexpr (is_exact_scalar_v<T>) {
    using boost::multiprecision::cpp_int;
    const cpp_int n = boost::multiprecision::numerator(x);
    const cpp_int d = boost::multiprecision::denominator(x);  // > 0 canonical
    cpp_int q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q.template convert_to<std::int64_t>();
  } else {
    return static_cast<std::int64_t>(std::ceil(x));
  }
}

}  // namespace num

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r(scaled);
  const int shift = exp - 53;
  using boost::multiprecision::cpp_int;
  const cpp_int two_pow = cpp_int(1) << std::abs(shift);
  if (shift >= 0)
    r *= Rational(two_pow);
  else
    r /= Rational(two_pow);
  return r;
}

namespace detail_rational {

// decimal-only integer parse; cpp_int's own parser would read a leading
// zero as octal
inline boost::multiprecision::cpp_int parse_decimal_int(std::string s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) throw std::invalid_argument("rational_from_string: missing digits");
  boost::multiprecision::cpp_int value = 0;
  for (const char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("rational_from_string: bad digit");
    value = value * 10 + (c - '0');
  }
  return negative ? boost::multiprecision::cpp_int(-value) : value;
}

}  // namespace detail_rational

/// Parses "p/q", "-3", "0.25" style literals into an exact rational.
inline Rational rational_from_string(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("rational_from_string: empty literal");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const auto num = detail_rational::parse_decimal_int(s.substr(0, slash));
    const auto den = detail_rational::parse_decimal_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational_from_string: zero denominator");
    return Rational(num, den);
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(detail_rational::parse_decimal_int(s));
  const std::string frac = s.substr(dot + 1);
  if (frac.empty()) throw std::invalid_argument("rational_from_string: trailing dot");
  using boost::multiprecision::cpp_int;
  cpp_int den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const bool negative = s[0] == '-';
  const cpp_int whole = detail_rational::parse_decimal_int(s.substr(0, dot));
  const cpp_int frac_val = detail_rational::parse_decimal_int(frac);
  const cpp_int magnitude = boost::multiprecision::abs(whole) * den + frac_val;
  return Rational(negative ? cpp_int(-magnitude) : magnitude, den);
}

}  // namespace ergomax
