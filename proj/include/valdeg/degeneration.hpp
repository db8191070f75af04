// The one-parameter toric degeneration: substituting u_i -> v^(gamma_i) * u~_i
// into each equation and dividing by the head weight power of v leaves the
// heads at v-exponent zero and every tail term at the positive exponent equal
// to its weight gap. The special fiber is the binomial ideal, the fiber at
// one recovers the input.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valdeg/deformation.hpp"

namespace valdeg {

template <class K>
struct FamilyTerm {
  K coeff;
  Value v_exp;    // weight(term) - weight(head), nonnegative
  Monomial mono;  // in the tilde variables (same exponents)
};

template <class K>
struct FamilyEquation {
  std::vector<FamilyTerm<K>> terms;  // in the source equation's term order
  size_t source_index;
};

template <class K>
struct DegenerationFamily {
  RingPtr ring;        // source ring
  RingPtr tilde_ring;  // same weights, names suffixed with "t"
  std::vector<FamilyEquation<K>> equations;
};

inline RingPtr tilde_ring_of(const RingPtr& ring) {
  std::vector<std::string> names;
  for (const auto& n : ring->names()) names.push_back(n + "t");
  return WeightedRing::make(ring->field(), std::move(names), ring->weights());
}

template <class K>
DegenerationFamily<K> degenerate(const DeformationSystem<K>& system) {
  if (!system.certified()) throw Error("degenerate needs a certified system");
  DegenerationFamily<K> fam;
  fam.ring = system.ring();
  fam.tilde_ring = tilde_ring_of(fam.ring);
  for (size_t e = 0; e < system.equations().size(); ++e) {
    const auto& eq = system.equations()[e];
    Value head_w = fam.ring->weight(eq.head_m);
    FamilyEquation<K> out;
    out.source_index = e;
    for (const auto& t : eq.poly.terms())
      out.terms.push_back({t.coeff, fam.ring->weight(t.mono) - head_w, t.mono});
    fam.equations.push_back(std::move(out));
  }
  return fam;
}

// Special fiber: the terms with v-exponent zero, i.e. exactly the binomial
// heads, in the source orientation.
template <class K>
std::vector<Polynomial<K>> specialize_zero(const DegenerationFamily<K>& fam) {
  std::vector<Polynomial<K>> out;
  for (const auto& eq : fam.equations) {
    std::vector<Term<K>> terms;
    for (const auto& t : eq.terms)
      if (t.v_exp.is_zero()) terms.push_back({t.mono, t.coeff});
    out.push_back(Polynomial<K>::from_terms(fam.tilde_ring, std::move(terms)));
  }
  return out;
}

// v0^e for a rational exponent vector; every coordinate power must admit an
// exact root in the field.
template <class K>
K pow_value(const K& v0, const Value& e, const std::string& what) {
  K acc(1);
  for (size_t c = 0; c < e.rank(); ++c) {
    const Rational& q = e[c];
    if (q == 0) continue;
    if (rat_den(q) == 1) {
      acc = acc * v0.pow(static_cast<long>(rat_num(q)));
      continue;
    }
    if constexpr (std::is_same_v<K, QQ>) {
      auto root = exact_pow(v0.v, q);
      if (!root)
        throw Error(what + ": " + v0.str() + "^(" + to_string(q) +
                    ") has no exact value in the field (no rational root witness)");
      acc = acc * QQ(*root);
    } else {
      throw Error(what + ": fractional v-exponent " + to_string(q) +
                  " needs a root witness, unavailable over " + K::descriptor().str());
    }
  }
  return acc;
}

// Fiber at a nonzero v0: an isomorphic deformation system in the tilde
// variables. At v0 = 1 this recovers the input equations verbatim.
template <class K>
DeformationSystem<K> specialize(const DegenerationFamily<K>& fam,
                                const std::vector<DeformedEquation<K>>& source_equations,
                                const std::vector<size_t>& source_base, const K& v0) {
  if (v0.is_zero())
    throw Error("specialize at zero yields the binomial special fiber; use specialize_zero");
  std::vector<DeformedEquation<K>> eqs;
  for (const auto& eq : fam.equations) {
    std::vector<Term<K>> terms;
    for (const auto& t : eq.terms)
      terms.push_back({t.mono, t.coeff * pow_value(v0, t.v_exp, "specialize")});
    const auto& src = source_equations[eq.source_index];
    eqs.push_back(make_equation(Polynomial<K>::from_terms(fam.tilde_ring, std::move(terms)),
                                src.kind, src.trailing_var,
                                "specialized equation " + std::to_string(eq.source_index + 1)));
  }
  return DeformationSystem<K>(fam.tilde_ring, std::move(eqs), source_base);
}

// Text form of one family equation, e.g. "yt^2 - xt^3 - v^3*ut".
template <class K>
std::string family_equation_str(const DegenerationFamily<K>& fam, const FamilyEquation<K>& eq) {
  std::string s;
  for (size_t i = 0; i < eq.terms.size(); ++i) {
    const auto& t = eq.terms[i];
    K c = t.coeff;
    std::string cs = c.str();
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = (-c).str();
    if (i == 0) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    std::vector<std::string> parts;
    bool unit = (neg ? (-c) : c).is_one();
    if (!unit || (t.v_exp.is_zero() && t.mono.is_one())) parts.push_back(cs);
    if (!t.v_exp.is_zero()) {
      std::string v = "v";
      if (t.v_exp.rank() == 1) {
        const Rational& q = t.v_exp[0];
        if (q != 1) v += (rat_den(q) == 1) ? "^" + to_string(q) : "^(" + to_string(q) + ")";
      } else {
        v += "^" + t.v_exp.str();
      }
      parts.push_back(v);
    }
    if (!t.mono.is_one()) parts.push_back(fam.tilde_ring->monomial_str(t.mono));
    std::string piece;
    for (size_t k = 0; k < parts.size(); ++k) {
      if (k) piece += "*";
      piece += parts[k];
    }
    s += piece;
  }
  return s.empty() ? "0" : s;
}

}  // namespace valdeg
