// Exact arbitrary-precision integers and rationals, plus the string forms
// used throughout the file formats ("a/b", never floats).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace valdeg {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline Int rat_num(const Rational& q) { return numerator(q); }
inline Int rat_den(const Rational& q) { return denominator(q); }

inline std::string to_string(const Int& n) { return n.str(); }

// Canonical form: "a" for integers, "a/b" otherwise, b > 0.
inline std::string to_string(const Rational& q) {
  if (rat_den(q) == 1) return rat_num(q).str();
  return rat_num(q).str() + "/" + rat_den(q).str();
}

inline Rational parse_rational(const std::string& s) {
  auto bad = [&]() -> Error { return Error("invalid rational literal '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto check_int = [&](const std::string& t, bool allow_sign) {
    if (t.empty()) throw bad();
    size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) throw bad();
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw bad();
  };
  if (slash == std::string::npos) {
    check_int(s, true);
    return Rational(Int(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num, true);
  check_int(den, false);
  Int d(den);
  if (d == 0) throw bad();
  return Rational(Int(num), d);
}

inline Int gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

inline Int pow_int(const Int& base, unsigned e) {
  Int r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Exact e-th root if n is a perfect e-th power.
inline std::optional<Int> exact_root(const Int& n, unsigned e) {
  if (e == 0) throw Error("zeroth root");
  if (e == 1) return n;
  if (n == 0) return Int(0);
  bool neg = n < 0;
  if (neg && e % 2 == 0) return std::nullopt;
  Int a = abs(n);
  // Newton iteration for floor root, then verify.
  Int x = Int(1) << static_cast<unsigned>(msb(a) / e + 1);
  while (true) {
    Int xe = pow_int(x, e - 1);
    Int next = ((e - 1) * x + a / xe) / e;
    if (next >= x) break;
    x = next;
  }
  if (pow_int(x, e) != a) return std::nullopt;
  return neg ? Int(-x) : x;
}

// q^(a/b) as an exact rational, if the required roots exist.
inline std::optional<Rational> exact_pow(const Rational& q, const Rational& e) {
  Int eb = rat_den(e);
  Int ea = rat_num(e);
  if (q == 0) {
    if (ea <= 0) throw Error("0 raised to a nonpositive power");
    return Rational(0);
  }
  auto rn = exact_root(rat_num(q), static_cast<unsigned>(eb));
  auto rd = exact_root(rat_den(q), static_cast<unsigned>(eb));
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  bool inv = ea < 0;
  Int k = abs(ea);
  Rational num = pow_int(rat_num(root), static_cast<unsigned>(k));
  Rational den = pow_int(rat_den(root), static_cast<unsigned>(k));
  Rational r = num / den;
  if (inv) r = Rational(1) / r;
  return r;
}

}  // namespace valdeg
