#include "permstab/rational.hpp"

#include "permstab/error.hpp"

namespace permstab {

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_string(const BigInt& n) { return n.str(); }

namespace {

// cpp_int's string constructor treats a leading 0 as an octal prefix, so
// validate and strip leading zeros before handing the digits over.
BigInt parse_decimal_int(std::string s) {
  bool negative = !s.empty() && s[0] == '-';
  if (negative || (!s.empty() && s[0] == '+')) s.erase(0, 1);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error("not a base-10 integer");
  size_t nonzero = s.find_first_not_of('0');
  s = nonzero == std::string::npos ? "0" : s.substr(nonzero);
  BigInt v(s);
  return negative ? BigInt(-v) : v;
}

} // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  auto dot = text.find('.');
  try {
    if (slash != std::string::npos) {
      if (dot != std::string::npos) fail(errc::parse_error, "not a rational: '" + text + "'");
      BigInt num = parse_decimal_int(text.substr(0, slash));
      BigInt den = parse_decimal_int(text.substr(slash + 1));
      if (den == 0) fail(errc::invalid_argument, "rational with zero denominator: " + text);
      return Rational(num, den);
    }
    if (dot != std::string::npos) {
      std::string frac = text.substr(dot + 1);
      if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
        fail(errc::parse_error, "not a rational: '" + text + "'");
      std::string head = text.substr(0, dot);
      bool negative = !head.empty() && head[0] == '-';
      if (negative || (!head.empty() && head[0] == '+')) head.erase(0, 1);
      BigInt num = parse_decimal_int((head.empty() ? "0" : head) + frac);
      BigInt den = 1;
      for (size_t i = 0; i < frac.size(); ++i) den *= 10;
      return Rational(negative ? BigInt(-num) : num, den);
    }
    return Rational(parse_decimal_int(text));
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    fail(errc::parse_error, "not a rational: '" + text + "'");
  }
}

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

} // namespace permstab
