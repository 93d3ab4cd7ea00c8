#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dynpat/errors.hpp"

namespace dynpat {

/// Reduced fraction num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  [[nodiscard]] constexpr double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  [[nodiscard]] std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // dens are positive, cross-multiplication preserves order
    return a.num * b.den <=> b.num * a.den;
  }
};

/// Parses "p/q" or an integer string.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text), 1);
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw ValidationError("cannot parse rational '" + text + "'");
  }
}

/// All reduced fractions p/q in [0, 1) with q <= q_max, ordered by (q, p).
inline std::vector<Rational> reduced_fractions(int q_max) {
  std::vector<Rational> out;
  if (q_max < 1) return out;
  out.emplace_back(0, 1);
  for (std::int64_t q = 2; q <= q_max; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    }
  }
  return out;
}

/// Same set as reduced_fractions, in increasing value (Farey order).
inline std::vector<Rational> farey_sequence(int q_max) {
  auto out = reduced_fractions(q_max);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynpat
