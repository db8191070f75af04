// Coefficient fields: exact rationals, or a prime field F_p for coefficient
// growth control. Both satisfy the small field interface the templates use.
#pragma once

#include <cstdint>
#include <string>

#include "valdeg/rational.hpp"

namespace valdeg {

struct FieldDesc {
  enum class Type { Q, Fp } type = Type::Q;
  uint64_t p = 0;

  static FieldDesc rationals() { return FieldDesc{Type::Q, 0}; }
  static FieldDesc prime_field(uint64_t p) {
    if (p < 2) throw Error("prime field modulus must be >= 2");
    for (uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw Error("modulus " + std::to_string(p) + " is not prime");
    return FieldDesc{Type::Fp, p};
  }
  bool operator==(const FieldDesc& o) const { return type == o.type && p == o.p; }
  std::string str() const { return type == Type::Q ? "Q" : "F" + std::to_string(p); }
};

// --- rationals ---

struct QQ {
  Rational v;

  QQ() : v(0) {}
  QQ(int n) : v(n) {}  // NOLINT: implicit from small ints is convenient
  explicit QQ(Rational q) : v(std::move(q)) {}

  static QQ from_rational(const Rational& q, const FieldDesc&) { return QQ(q); }
  static FieldDesc descriptor() { return FieldDesc::rationals(); }
  static constexpr bool is_char_zero = true;

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1; }
  QQ operator-() const { return QQ(Rational(-v)); }
  QQ inv() const {
    if (is_zero()) throw Error("division by zero");
    return QQ(Rational(1) / v);
  }
  friend QQ operator+(const QQ& a, const QQ& b) { return QQ(Rational(a.v + b.v)); }
  friend QQ operator-(const QQ& a, const QQ& b) { return QQ(Rational(a.v - b.v)); }
  friend QQ operator*(const QQ& a, const QQ& b) { return QQ(Rational(a.v * b.v)); }
  friend QQ operator/(const QQ& a, const QQ& b) { return a * b.inv(); }
  friend bool operator==(const QQ& a, const QQ& b) { return a.v == b.v; }
  friend bool operator!=(const QQ& a, const QQ& b) { return a.v != b.v; }

  QQ pow(long e) const {
    if (e == 0) return QQ(1);
    QQ base = e < 0 ? inv() : *this;
    unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : e;
    QQ r(1);
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  std::string str() const { return to_string(v); }
};

// --- prime field, runtime modulus ---
//
// Elements carry their modulus; a default-constructed zero has modulus 0 and
// adopts the other operand's modulus on the first arithmetic operation.
struct GFp {
  uint64_t v = 0;
  uint64_t p = 0;

  GFp() = default;
  GFp(int n) {  // NOLINT: modulus-free small integer, resolved on use
    if (n < 0) throw Error("modulus-free GFp literal must be nonnegative");
    v = static_cast<uint64_t>(n);
  }
  GFp(uint64_t val, uint64_t mod) : v(val % mod), p(mod) {}

  static GFp from_rational(const Rational& q, const FieldDesc& f) {
    if (f.type != FieldDesc::Type::Fp) throw Error("GFp::from_rational needs an Fp descriptor");
    Int num = rat_num(q) % Int(f.p);
    if (num < 0) num += f.p;
    Int den = rat_den(q) % Int(f.p);
    if (den == 0) throw Error("denominator divisible by modulus " + std::to_string(f.p));
    GFp d(static_cast<uint64_t>(den), f.p);
    return GFp(static_cast<uint64_t>(num), f.p) * d.inv();
  }
  static constexpr bool is_char_zero = false;

  bool is_zero() const { return v == 0; }
  bool is_one() const {
    if (p == 0) return v == 1;
    return v % p == 1;
  }

  static uint64_t resolve(const GFp& a, const GFp& b) {
    if (a.p && b.p && a.p != b.p)
      throw Error("mixed moduli " + std::to_string(a.p) + " and " + std::to_string(b.p));
    return a.p ? a.p : b.p;
  }
  uint64_t reduced(uint64_t mod) const { return mod ? v % mod : v; }

  GFp operator-() const {
    if (!p) {
      if (v) throw Error("negation of modulus-free GFp literal");
      return *this;
    }
    return GFp(v ? p - v : 0, p);
  }
  friend GFp operator+(const GFp& a, const GFp& b) {
    uint64_t m = resolve(a, b);
    if (!m) return GFp(a.v + b.v, 0, nocheck{});
    return GFp((a.reduced(m) + b.reduced(m)) % m, m);
  }
  friend GFp operator-(const GFp& a, const GFp& b) {
    uint64_t m = resolve(a, b);
    if (!m) throw Error("subtraction needs a modulus");
    uint64_t av = a.reduced(m), bv = b.reduced(m);
    return GFp((av + m - bv) % m, m);
  }
  friend GFp operator*(const GFp& a, const GFp& b) {
    uint64_t m = resolve(a, b);
    if (!m) return GFp(a.v * b.v, 0, nocheck{});
    unsigned __int128 prod = static_cast<unsigned __int128>(a.reduced(m)) * b.reduced(m);
    return GFp(static_cast<uint64_t>(prod % m), m);
  }
  friend GFp operator/(const GFp& a, const GFp& b) { return a * b.inv(); }
  friend bool operator==(const GFp& a, const GFp& b) {
    uint64_t m = resolve(a, b);
    return a.reduced(m) == b.reduced(m);
  }
  friend bool operator!=(const GFp& a, const GFp& b) { return !(a == b); }

  GFp inv() const {
    if (!p) throw Error("inverse needs a modulus");
    if (v % p == 0) throw Error("division by zero");
    return pow(static_cast<long>(p) - 2);
  }
  GFp pow(long e) const {
    if (!p) throw Error("pow needs a modulus");
    uint64_t k;
    GFp base = *this;
    if (e < 0) {
      base = inv();
      k = static_cast<uint64_t>(-e);
    } else {
      k = static_cast<uint64_t>(e);
    }
    GFp r(1 % p, p);
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  std::string str() const { return std::to_string(p ? v % p : v); }

 private:
  struct nocheck {};
  GFp(uint64_t val, uint64_t mod, nocheck) : v(val), p(mod) {}
};

}  // namespace valdeg
