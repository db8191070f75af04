// Sparse multivariate polynomials over an exact field, with terms kept in
// ascending monomial order (minimal weight first), so the initial form is a
// prefix. Equality is structural; no zero coefficients are stored.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "valdeg/ring.hpp"

namespace valdeg {

template <class K>
struct Term {
  Monomial mono;
  K coeff;
};

template <class K>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }
  static Polynomial constant(RingPtr ring, K c) {
    Polynomial p(std::move(ring));
    if (!c.is_zero()) p.terms_.push_back({Monomial::one(p.ring_->nvars()), std::move(c)});
    return p;
  }
  static Polynomial monomial(RingPtr ring, Monomial m, K c) {
    Polynomial p(std::move(ring));
    if (!c.is_zero()) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
  }
  static Polynomial variable(const RingPtr& ring, size_t i) {
    return monomial(ring, Monomial::var(i, ring->nvars()), K(1));
  }

  // Builds from unordered (monomial, coeff) pairs, combining duplicates.
  static Polynomial from_terms(RingPtr ring, std::vector<Term<K>> terms) {
    Polynomial p(ring);
    std::sort(terms.begin(), terms.end(), [&](const Term<K>& a, const Term<K>& b) {
      return ring->monomial_cmp(a.mono, b.mono) < 0;
    });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff = p.terms_.back().coeff + t.coeff;
        if (p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      } else if (!t.coeff.is_zero()) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  const std::vector<Term<K>>& terms() const { return terms_; }

  // Weight of the polynomial: minimal weight over its terms.
  Value weight() const {
    require_nonzero("weight");
    return ring_->weight(terms_.front().mono);
  }
  Value max_weight() const {
    require_nonzero("max_weight");
    return ring_->weight(terms_.back().mono);
  }

  // Isobaric sum of the minimal-weight terms.
  Polynomial initial_form() const {
    require_nonzero("initial_form");
    Polynomial r(ring_);
    Value w0 = weight();
    for (const auto& t : terms_) {
      if (ring_->weight(t.mono) != w0) break;
      r.terms_.push_back(t);
    }
    return r;
  }

  // Distinguished head for reduction: the exponent-lex smallest monomial of
  // minimal weight, i.e. the first stored term. Rewriting by this head moves
  // powers of later variables into earlier ones, which keeps standard bases
  // small on chain-shaped systems.
  const Term<K>& lead() const {
    require_nonzero("lead");
    return terms_.front();
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    check_same_ring(a.ring_, b.ring_);
    Polynomial r(a.ring_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      int c = a.ring_->monomial_cmp(a.terms_[i].mono, b.terms_[j].mono);
      if (c < 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c > 0) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        K s = a.terms_[i].coeff + b.terms_[j].coeff;
        if (!s.is_zero()) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
        ++i, ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  Polynomial scaled(const K& c) const {
    if (c.is_zero()) return zero(ring_);
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    return r;
  }
  // this * c * m
  Polynomial times_term(const Monomial& m, const K& c) const {
    if (c.is_zero()) return zero(ring_);
    Polynomial r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    return r;  // multiplication by a monomial preserves term order
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return zero(a.ring_ ? a.ring_ : b.ring_);
    check_same_ring(a.ring_, b.ring_);
    std::vector<Term<K>> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) acc.push_back({s.mono * t.mono, s.coeff * t.coeff});
    return from_terms(a.ring_, std::move(acc));
  }

  Polynomial pow(unsigned e) const {
    Polynomial r = constant(ring_, K(1));
    Polynomial b = *this;
    while (e) {
      if (e & 1) r = r * b;
      if (e >>= 1) b = b * b;
    }
    return r;
  }

  const K* coeff_of(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return &t.coeff;
    return nullptr;
  }

  // Exact substitution of a polynomial for one variable.
  Polynomial substitute(size_t var, const Polynomial& g) const {
    if (var >= ring_->nvars()) throw Error("unknown variable index in substitute");
    check_same_ring(ring_, g.ring_);
    // Cache powers of g by exponent.
    std::map<uint32_t, Polynomial> powers;
    powers[0] = constant(ring_, K(1));
    std::function<const Polynomial&(uint32_t)> power = [&](uint32_t e) -> const Polynomial& {
      auto it = powers.find(e);
      if (it != powers.end()) return it->second;
      auto r = powers.emplace(e, power(e - 1) * g);
      return r.first->second;
    };
    Polynomial out = zero(ring_);
    for (const auto& t : terms_) {
      Monomial rest = t.mono;
      uint32_t e = rest.exps()[var];
      if (e) {
        std::vector<uint32_t> exps = rest.exps();
        exps[var] = 0;
        rest = Monomial(std::move(exps));
      }
      out = out + power(e).times_term(rest, t.coeff);
    }
    return out;
  }

  Polynomial substitute(const std::string& var, const Polynomial& g) const {
    int i = ring_->var_index(var);
    if (i < 0) throw Error("unknown variable '" + var + "'");
    return substitute(static_cast<size_t>(i), g);
  }

  uint64_t total_degree_min() const {
    require_nonzero("total_degree_min");
    uint64_t d = terms_.front().mono.total_degree();
    for (const auto& t : terms_) d = std::min(d, t.mono.total_degree());
    return d;
  }
  uint64_t total_degree_max() const {
    require_nonzero("total_degree_max");
    uint64_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
    return d;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].mono != b.terms_[i].mono || !(a.terms_[i].coeff == b.terms_[i].coeff))
        return false;
    if (a.ring_.get() != b.ring_.get() && !(a.ring_ && b.ring_ && a.ring_->same_as(*b.ring_)))
      return a.terms_.empty() && b.terms_.empty();
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Canonical human-readable form, terms in ascending monomial order.
  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      K c = t.coeff;
      bool neg = false;
      std::string cs = c.str();
      if (!cs.empty() && cs[0] == '-') {
        neg = true;
        cs = (-c).str();
      }
      if (i == 0) {
        if (neg) s += "-";
      } else {
        s += neg ? " - " : " + ";
      }
      bool unit = (neg ? (-c) : c).is_one();
      if (t.mono.is_one()) {
        s += cs;
      } else if (unit) {
        s += ring_->monomial_str(t.mono);
      } else {
        s += cs + "*" + ring_->monomial_str(t.mono);
      }
    }
    return s;
  }

 private:
  void require_nonzero(const char* op) const {
    if (is_zero()) throw Error(std::string(op) + " of zero polynomial");
  }

  RingPtr ring_;
  std::vector<Term<K>> terms_;
};

template <class K>
Ordering monomial_compare(const Monomial& a, const Monomial& b, const RingPtr& ring) {
  int c = ring->monomial_cmp(a, b);
  return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

}  // namespace valdeg
