#include "coarsekit/rational.hpp"

#include <limits>

#include "coarsekit/error.hpp"

namespace coarsekit {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

std::string strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string t = strip(text);
  const auto slash = t.find('/');
  std::string num = slash == std::string::npos ? t : strip(std::string_view(t).substr(0, slash));
  std::string den = slash == std::string::npos ? "1" : strip(std::string_view(t).substr(slash + 1));
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-') {
    throw Error(ErrorCode::InputInvalid, "not a rational literal: '" + t + "'");
  }
  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw Error(ErrorCode::InputInvalid, "zero denominator in '" + t + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const ExtendedRational& q) {
  return q.infinite ? std::string("inf") : to_string(q.value);
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InputInvalid, "zero denominator");
  Rational q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  q.canonicalize();
  return q;
}

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) {
    throw Error(ErrorCode::InputInvalid, "integer " + z.get_str() + " exceeds the 64-bit range");
  }
  return static_cast<std::int64_t>(z.get_si());
}

namespace {

std::int64_t saturate(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z > 0 ? std::numeric_limits<std::int64_t>::max() : std::numeric_limits<std::int64_t>::min();
}

}  // namespace

std::int64_t floor_saturated(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return saturate(f);
}

std::int64_t ceil_saturated(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return saturate(c);
}

}  // namespace coarsekit
