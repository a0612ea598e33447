#include "wh/rational.hpp"

#include <cctype>
#include <cmath>

#include "wh/error.hpp"

namespace wh {

namespace {

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp = s.substr(e + 1);
    bool neg_exp = false;
    if (!exp.empty() && (exp.front() == '+' || exp.front() == '-')) {
      neg_exp = exp.front() == '-';
      exp.remove_prefix(1);
    }
    if (!all_digits(exp) || exp.size() > 6) throw ParseError("invalid rational '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp));
    if (neg_exp) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw ParseError("invalid rational '" + std::string(text) + "'");
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw ParseError("invalid rational '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational q(mpz_class(digits, 10));
  if (exponent > 0) q *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) q /= pow10(static_cast<unsigned long>(-exponent));
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash), den = text.substr(slash + 1);
    std::string_view unsigned_num = num;
    if (!unsigned_num.empty() && (unsigned_num.front() == '-' || unsigned_num.front() == '+'))
      unsigned_num.remove_prefix(1);
    if (!all_digits(unsigned_num) || !all_digits(den))
      throw ParseError("invalid rational '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    std::string n(num);
    if (!n.empty() && n.front() == '+') n.erase(0, 1);
    Rational q(mpz_class(n, 10), d);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite value");
  return Rational(x);
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace wh
