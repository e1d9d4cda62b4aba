#ifndef PERMSTAB_RATIONAL_HPP
#define PERMSTAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace permstab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical text form is always "p/q" with q >= 1 and gcd(p, q) = 1,
// including "0/1" and "1/1", so machine consumers never branch on shape.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);

// Accepts "p/q", a bare integer "p", or a finite decimal like "0.99"
// (converted exactly).
Rational parse_rational(const std::string& text);

BigInt factorial(unsigned n);

} // namespace permstab

#endif
