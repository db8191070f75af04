// Elements of the lex-ordered value group Q^h.
#pragma once

#include <algorithm>
#include <compare>
#include <vector>

#include "valdeg/rational.hpp"

namespace valdeg {

// A value is a vector of exact rationals of length h >= 1, compared
// lexicographically (leftmost coordinate most significant).
class Value {
 public:
  Value() : coords_(1, Rational(0)) {}
  explicit Value(Rational q) : coords_{std::move(q)} {}
  explicit Value(std::vector<Rational> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw Error("Value must have rank >= 1");
  }

  static Value zero(size_t rank) { return Value(std::vector<Rational>(rank, Rational(0))); }

  size_t rank() const { return coords_.size(); }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& operator[](size_t i) const { return coords_[i]; }

  // Rank-1 convenience accessor.
  const Rational& scalar() const {
    if (rank() != 1) throw Error("Value::scalar on rank " + std::to_string(rank()));
    return coords_[0];
  }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
  }
  bool is_positive() const { return cmp(zero(rank())) > 0; }

  int cmp(const Value& o) const {
    check_rank(o);
    for (size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] < o.coords_[i]) return -1;
      if (coords_[i] > o.coords_[i]) return 1;
    }
    return 0;
  }

  Value& operator+=(const Value& o) {
    check_rank(o);
    for (size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Value& operator-=(const Value& o) {
    check_rank(o);
    for (size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  friend Value operator+(Value a, const Value& b) { return a += b; }
  friend Value operator-(Value a, const Value& b) { return a -= b; }
  friend Value operator*(const Int& k, Value v) {
    for (auto& c : v.coords_) c *= k;
    return v;
  }

  friend bool operator==(const Value& a, const Value& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const Value& a, const Value& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const Value& a, const Value& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const Value& a, const Value& b) { return a.cmp(b) >= 0; }

  // Componentwise <=; used for finite bounds in rank > 1 enumerations.
  bool leq_componentwise(const Value& o) const {
    check_rank(o);
    for (size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] > o.coords_[i]) return false;
    return true;
  }

  std::string str() const {
    if (rank() == 1) return to_string(coords_[0]);
    std::string s = "(";
    for (size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ", ";
      s += to_string(coords_[i]);
    }
    return s + ")";
  }

 private:
  void check_rank(const Value& o) const {
    if (rank() != o.rank())
      throw Error("rank mismatch: " + std::to_string(rank()) + " vs " + std::to_string(o.rank()));
  }
  std::vector<Rational> coords_;
};

enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

inline Ordering compare_values(const Value& a, const Value& b) {
  int c = a.cmp(b);
  return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

}  // namespace valdeg
