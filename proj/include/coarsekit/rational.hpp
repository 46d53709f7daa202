#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace coarsekit {

/// Exact rational arithmetic. Every distance, scale and barycentric
/// coordinate in the toolkit is a Rational; no comparison uses a tolerance.
using Rational = mpq_class;

/// Parses "p/q", "-p/q" or an integer literal. Throws Error(InputInvalid).
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "n" for integers.
std::string to_string(const Rational& q);

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Converts an integer-valued mpz to int64, throwing Error(InputInvalid) on overflow.
std::int64_t to_int64(const mpz_class& z);

/// floor(q) and ceil(q) as int64, saturated to the int64 range.
std::int64_t floor_saturated(const Rational& q);
std::int64_t ceil_saturated(const Rational& q);

/// A value in [0, +inf]. Used where a supremum may be unbounded on a finite
/// space (Lebesgue numbers, co-distances to an empty complement).
struct ExtendedRational {
  Rational value;
  bool infinite = false;

  static ExtendedRational infinity() { return {Rational(0), true}; }
  static ExtendedRational finite(Rational q) { return {std::move(q), false}; }

  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
  bool at_least(const Rational& q) const { return infinite || value >= q; }
};

std::string to_string(const ExtendedRational& q);

}  // namespace coarsekit
