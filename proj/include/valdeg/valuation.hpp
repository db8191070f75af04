// The valuation induced by a certified overweight deformation: values of
// ring elements, graded slices of gr_nu R, and the realized value semigroup.
#pragma once

#include <optional>
#include <vector>

#include "valdeg/deformation.hpp"

namespace valdeg {

// Infinity is the value of zero; it is an explicit distinguished element and
// absorbs addition.
class ValueOrInfinite {
 public:
  static ValueOrInfinite infinite() { return ValueOrInfinite(); }
  static ValueOrInfinite of(Value v) {
    ValueOrInfinite r;
    r.v_ = std::move(v);
    return r;
  }
  bool is_infinite() const { return !v_.has_value(); }
  const Value& finite() const {
    if (is_infinite()) throw Error("value is infinite");
    return *v_;
  }
  friend ValueOrInfinite operator+(const ValueOrInfinite& a, const ValueOrInfinite& b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return of(a.finite() + b.finite());
  }
  friend bool operator==(const ValueOrInfinite& a, const ValueOrInfinite& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return a.finite() == b.finite();
  }
  friend bool operator!=(const ValueOrInfinite& a, const ValueOrInfinite& b) { return !(a == b); }
  // infinite compares greater than every finite value
  friend bool operator<(const ValueOrInfinite& a, const ValueOrInfinite& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return a.finite() < b.finite();
  }
  friend bool operator>=(const ValueOrInfinite& a, const ValueOrInfinite& b) { return !(a < b); }
  std::string str() const { return is_infinite() ? "infinite" : v_->str(); }

 private:
  std::optional<Value> v_;
};

template <class K>
struct ValuationResult {
  ValueOrInfinite value;
  Polynomial<K> witness;  // maximal-weight representative; zero iff infinite
};

// nu(f) for the class of f in R = k[[u]]/(F): infinite iff f is zero in R,
// otherwise the weight of the initial form of the maximal-weight
// representative. Depends only on the class of f.
template <class K>
ValuationResult<K> value_of(const Polynomial<K>& f, const DeformationSystem<K>& system) {
  if (!system.certified()) throw Error("value_of needs a certified system");
  check_same_ring(f.ring(), system.ring());
  if (f.is_zero() || system.ideal_member(f))
    return {ValueOrInfinite::infinite(), Polynomial<K>::zero(system.ring())};
  Polynomial<K> rep = system.maximal_weight_representative(f);
  return {ValueOrInfinite::of(rep.weight()), std::move(rep)};
}

// All monomials of the given weight; complete for rank one, and for higher
// rank when every weight is componentwise nonnegative (which covers the
// monomial examples). Results are in ascending exponent-lex order.
inline std::vector<Monomial> monomials_of_weight(const RingPtr& ring, const Value& gamma) {
  size_t rank = ring->rank();
  for (const auto& w : ring->weights())
    for (size_t c = 0; c < rank; ++c)
      if (rank > 1 && w[c] < 0)
        throw Error(
            "slice enumeration needs componentwise nonnegative weights in rank > 1; "
            "supply a cap instead");
  std::vector<Monomial> out;
  std::vector<uint32_t> exps(ring->nvars(), 0);
  std::function<void(size_t, Value)> rec = [&](size_t i, Value rest) {
    if (i == ring->nvars()) {
      if (rest.is_zero()) out.push_back(Monomial(exps));
      return;
    }
    const Value& w = ring->weight(i);
    Value cur = rest;
    uint32_t e = 0;
    while (true) {
      bool feasible = true;
      for (size_t c = 0; c < rank; ++c)
        if (cur[c] < 0) {
          feasible = false;
          break;
        }
      if (!feasible) break;
      exps[i] = e;
      rec(i + 1, cur);
      cur -= w;
      ++e;
      if (e > 1'000'000) throw Error("slice enumeration runaway");
    }
    exps[i] = 0;
  };
  rec(0, gamma);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return a.cmp_lex(b) < 0;
  });
  return out;
}

struct GradedSliceInfo {
  Value degree;
  std::vector<Monomial> basis;  // standard monomials, exponent-lex ascending
};

// Slices of gr_nu R for all realized degrees up to the bound (componentwise
// in rank > 1). The degrees realized are the semigroup elements generated by
// the variable weights; each nonzero slice is one dimensional for rational
// valuations.
template <class K>
std::vector<GradedSliceInfo> graded_algebra(const DeformationSystem<K>& system,
                                            const Value& bound) {
  if (!system.certified()) throw Error("graded_algebra needs a certified system");
  SemigroupPresentation sg(system.ring()->weights());
  std::vector<GradedSliceInfo> out;
  for (const Value& gamma : sg.elements_up_to(bound)) {
    GradedSliceInfo slice;
    slice.degree = gamma;
    slice.basis = system.head_gb().standard_monomials(monomials_of_weight(system.ring(), gamma));
    out.push_back(std::move(slice));
  }
  return out;
}

// Realized degrees up to the bound.
template <class K>
std::vector<Value> value_semigroup(const DeformationSystem<K>& system, const Value& bound) {
  if (!system.certified()) throw Error("value_semigroup needs a certified system");
  SemigroupPresentation sg(system.ring()->weights());
  return sg.elements_up_to(bound);
}

}  // namespace valdeg
