#pragma once

// Exact rational scalars. Every numeric value in the library is a Rational;
// there is no floating-point path.

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hktlab {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (GMP canonicalizes after every operation).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_zero(const Rational& r) { return r.is_zero(); }

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  const Integer den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

namespace detail {
inline bool parse_integer(std::string_view s, Integer& out) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  out = Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  return true;
}
}  // namespace detail

/// Parses "p/q" or "p" (optional sign on p, q > 0). Returns nullopt on any
/// malformed input, including a zero denominator.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  Integer num, den{1};
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!detail::parse_integer(text, num)) return std::nullopt;
  } else {
    if (!detail::parse_integer(text.substr(0, slash), num)) return std::nullopt;
    auto dtext = text.substr(slash + 1);
    if (dtext.empty() || dtext[0] == '-' || dtext[0] == '+') return std::nullopt;
    if (!detail::parse_integer(dtext, den)) return std::nullopt;
    if (den == 0) return std::nullopt;
  }
  return Rational(num, den);
}

inline Rational parse_rational(std::string_view text) {
  auto r = try_parse_rational(text);
  if (!r) throw Error("malformed rational '" + std::string(text) + "'");
  return *r;
}

/// Exact square root when r is the square of a rational, nullopt otherwise.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const Integer num = numerator_of(r), den = denominator_of(r);
  const Integer sn = boost::multiprecision::sqrt(num);
  const Integer sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

}  // namespace hktlab
