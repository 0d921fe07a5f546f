#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "qencost/errors.hpp"

namespace qencost {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses a plain decimal literal ("0.25", "-3", "1.0") into an exact fraction.
// Exponents and locale-specific separators are rejected.
inline Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt numerator = 0;
  BigInt denominator = 1;
  bool any_digit = false;
  for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
    numerator = numerator * 10 + (text[pos] - '0');
    any_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      numerator = numerator * 10 + (text[pos] - '0');
      denominator *= 10;
      any_digit = true;
    }
  }
  if (!any_digit || pos != text.size()) {
    throw DomainError("not a decimal literal: '" + text + "'");
  }
  if (negative) numerator = -numerator;
  return Rational(numerator) / Rational(denominator);
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace qencost
