// Weighted polynomial rings and their monomials. The monomial order is the
// weight order refined by exponent-lex in declared variable order; it embeds
// the monomial set into Gamma x N lex, so every weight class is finite.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "valdeg/field.hpp"
#include "valdeg/value.hpp"

namespace valdeg {

class WeightedRing;
using RingPtr = std::shared_ptr<const WeightedRing>;

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<uint32_t> exps) : exps_(std::move(exps)) {}
  static Monomial one(size_t nvars) { return Monomial(std::vector<uint32_t>(nvars, 0)); }
  static Monomial var(size_t i, size_t nvars) {
    Monomial m = one(nvars);
    m.exps_[i] = 1;
    return m;
  }

  size_t nvars() const { return exps_.size(); }
  uint32_t operator[](size_t i) const { return exps_[i]; }
  const std::vector<uint32_t>& exps() const { return exps_; }
  bool is_one() const {
    for (auto e : exps_)
      if (e) return false;
    return true;
  }
  uint64_t total_degree() const {
    uint64_t d = 0;
    for (auto e : exps_) d += e;
    return d;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] += b.exps_[i];
    return r;
  }
  bool divides(const Monomial& m) const {
    for (size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > m.exps_[i]) return false;
    return true;
  }
  // Quotient m / this; caller guarantees divisibility.
  Monomial quotient_of(const Monomial& m) const {
    Monomial r = m;
    for (size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= exps_[i];
    return r;
  }
  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] = std::max(a.exps_[i], b.exps_[i]);
    return r;
  }
  friend Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] = std::min(a.exps_[i], b.exps_[i]);
    return r;
  }

  // Exponent-lex: first declared variable most significant.
  int cmp_lex(const Monomial& o) const {
    for (size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] != o.exps_[i]) return exps_[i] < o.exps_[i] ? -1 : 1;
    }
    return 0;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  std::vector<uint32_t> exps_;
};

class WeightedRing : public std::enable_shared_from_this<WeightedRing> {
 public:
  static RingPtr make(FieldDesc field, std::vector<std::string> names, std::vector<Value> weights) {
    return RingPtr(new WeightedRing(std::move(field), std::move(names), std::move(weights)));
  }

  const FieldDesc& field() const { return field_; }
  size_t nvars() const { return names_.size(); }
  size_t rank() const { return rank_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(size_t i) const { return names_[i]; }
  const Value& weight(size_t i) const { return weights_[i]; }
  const std::vector<Value>& weights() const { return weights_; }

  int var_index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  Value weight(const Monomial& m) const {
    if (m.nvars() != nvars()) throw Error("monomial/ring variable count mismatch");
    Value w = Value::zero(rank_);
    for (size_t i = 0; i < nvars(); ++i)
      if (m[i]) w += Int(m[i]) * weights_[i];
    return w;
  }

  // Weight comparison through the per-row integer-scaled weights; avoids
  // rational arithmetic on the hot path.
  int weight_cmp(const Monomial& a, const Monomial& b) const {
    for (size_t r = 0; r < rank_; ++r) {
      Int wa = 0, wb = 0;
      for (size_t i = 0; i < scaled_[r].size(); ++i) {
        if (a[i]) wa += Int(a[i]) * scaled_[r][i];
        if (b[i]) wb += Int(b[i]) * scaled_[r][i];
      }
      if (wa != wb) return wa < wb ? -1 : 1;
    }
    return 0;
  }

  // Weight first, exponent-lex tie-break. Total and admissible.
  int monomial_cmp(const Monomial& a, const Monomial& b) const {
    int c = weight_cmp(a, b);
    if (c) return c;
    return a.cmp_lex(b);
  }
  bool monomial_lt(const Monomial& a, const Monomial& b) const { return monomial_cmp(a, b) < 0; }

  bool same_as(const WeightedRing& o) const {
    return field_ == o.field_ && names_ == o.names_ && weights_ == o.weights_;
  }

  std::string monomial_str(const Monomial& m) const {
    if (m.is_one()) return "1";
    std::string s;
    for (size_t i = 0; i < nvars(); ++i) {
      if (!m[i]) continue;
      if (!s.empty()) s += "*";
      s += names_[i];
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s;
  }

 private:
  WeightedRing(FieldDesc field, std::vector<std::string> names, std::vector<Value> weights)
      : field_(std::move(field)), names_(std::move(names)), weights_(std::move(weights)) {
    if (names_.empty()) throw Error("ring needs at least one variable");
    if (names_.size() != weights_.size()) throw Error("variable/weight count mismatch");
    rank_ = weights_[0].rank();
    for (size_t i = 0; i < names_.size(); ++i) {
      if (weights_[i].rank() != rank_) throw Error("weights must share a common rank");
      if (!weights_[i].is_positive())
        throw Error("weights must be positive: variable '" + names_[i] + "' has weight " +
                    weights_[i].str());
      for (size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw Error("duplicate variable name '" + names_[i] + "'");
    }
    scaled_.assign(rank_, std::vector<Int>(names_.size()));
    for (size_t r = 0; r < rank_; ++r) {
      Int den = 1;
      for (const auto& w : weights_) den = lcm(den, rat_den(w[r]));
      for (size_t i = 0; i < weights_.size(); ++i)
        scaled_[r][i] = rat_num(weights_[i][r]) * (den / rat_den(weights_[i][r]));
    }
  }

  FieldDesc field_;
  std::vector<std::string> names_;
  std::vector<Value> weights_;
  std::vector<std::vector<Int>> scaled_;  // per-rank integer-scaled weights
  size_t rank_;
};

inline void check_same_ring(const RingPtr& a, const RingPtr& b) {
  if (a.get() == b.get()) return;
  if (!a || !b || !a->same_as(*b)) throw Error("ring mismatch");
}

}  // namespace valdeg
