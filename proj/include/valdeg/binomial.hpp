// Prime binomial ideals from relation lattices, the lambda-character
// machinery, and a Groebner engine for binomial ideals under the weighted
// order. All generators are isobaric (both monomials of a binomial share one
// weight), so S-pair reduction stays inside finite weight classes and the
// computation needs no termination cap. Members carry cofactor expressions
// over the original generators so reductions can be lifted to the deformed
// equations.
#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "valdeg/polynomial.hpp"
#include "valdeg/semigroup.hpp"

namespace valdeg {

// u^m - lambda * u^n with m exponent-lex larger than n and w(m) = w(n).
template <class K>
struct Binomial {
  Monomial m, n;
  K lambda;

  Polynomial<K> as_poly(const RingPtr& ring) const {
    return Polynomial<K>::monomial(ring, m, K(1)) + Polynomial<K>::monomial(ring, n, -lambda);
  }
  std::vector<Int> vector() const {
    std::vector<Int> v(m.nvars());
    for (size_t i = 0; i < v.size(); ++i) v[i] = Int(m[i]) - Int(n[i]);
    return v;
  }
};

// Normalizes orientation so the exponent-lex larger monomial carries
// coefficient one. Flipping replaces lambda by its inverse; the generated
// ideal is unchanged.
template <class K>
Binomial<K> oriented_binomial(const RingPtr& ring, Monomial a, Monomial b, K lambda) {
  if (lambda.is_zero()) throw Error("binomial coefficient lambda must be nonzero");
  if (ring->weight(a) != ring->weight(b))
    throw Error("binomial monomials must share a weight: " + ring->monomial_str(a) + " vs " +
                ring->monomial_str(b));
  int c = a.cmp_lex(b);
  if (c == 0) throw Error("degenerate binomial: equal monomials");
  if (c > 0) return Binomial<K>{std::move(a), std::move(b), std::move(lambda)};
  return Binomial<K>{std::move(b), std::move(a), lambda.inv()};
}

template <class K>
class BinomialIdeal {
 public:
  BinomialIdeal(RingPtr ring, std::vector<Binomial<K>> gens)
      : ring_(std::move(ring)), gens_(std::move(gens)) {}

  const RingPtr& ring() const { return ring_; }
  const std::vector<Binomial<K>>& generators() const { return gens_; }
  bool empty() const { return gens_.empty(); }

  IntMatrix vector_matrix() const {
    IntMatrix v;
    v.reserve(gens_.size());
    for (const auto& b : gens_) v.push_back(b.vector());
    return v;
  }

  // Structural primality certificate: the head vectors span the full
  // relation lattice of the weights, the span is saturated, and the lambdas
  // are consistent along every relation among the vectors.
  struct Certificate {
    bool lattice_generates = false;
    bool saturated = false;
    bool lambda_consistent = false;
    size_t lattice_rank = 0;
    size_t rational_rank = 0;
    std::string detail;
    bool ok() const { return lattice_generates && saturated && lambda_consistent; }
  };

  Certificate certify_structure() const {
    Certificate c;
    size_t nv = ring_->nvars();
    size_t weight_rank = integer_rank(weight_matrix(ring_->weights()));
    c.rational_rank = weight_rank;
    size_t expected = nv - weight_rank;
    IntMatrix v = vector_matrix();
    c.lattice_rank = v.empty() ? 0 : integer_rank(v);
    c.lattice_generates = (c.lattice_rank == expected);
    if (!c.lattice_generates)
      c.detail = "relation vectors span rank " + std::to_string(c.lattice_rank) +
                 ", expected " + std::to_string(expected);
    c.saturated = is_saturated_basis(v);
    if (!c.saturated && c.detail.empty()) c.detail = "relation vectors span an unsaturated lattice";
    c.lambda_consistent = true;
    if (!gens_.empty()) {
      // Kernel of the transpose: integer relations among the head vectors.
      IntMatrix vt(nv, std::vector<Int>(gens_.size()));
      for (size_t l = 0; l < gens_.size(); ++l) {
        auto vec = gens_[l].vector();
        for (size_t i = 0; i < nv; ++i) vt[i][l] = vec[i];
      }
      for (const auto& rel : integer_kernel(vt)) {
        K prod(1);
        for (size_t l = 0; l < gens_.size(); ++l) {
          if (rel[l] == 0) continue;
          prod = prod * gens_[l].lambda.pow(static_cast<long>(rel[l]));
        }
        if (!prod.is_one()) {
          c.lambda_consistent = false;
          c.detail = "lambda character inconsistent along a relation between the binomials";
          break;
        }
      }
    }
    return c;
  }

  // Character chi(v) for v in the lattice spanned by the head vectors.
  std::optional<K> character(const std::vector<Int>& v) const {
    size_t nv = ring_->nvars();
    IntMatrix cols(nv, std::vector<Int>(gens_.size()));
    for (size_t l = 0; l < gens_.size(); ++l) {
      auto vec = gens_[l].vector();
      for (size_t i = 0; i < nv; ++i) cols[i][l] = vec[i];
    }
    auto coeffs = solve_in_column_span(cols, v);
    if (!coeffs) return std::nullopt;
    K prod(1);
    for (size_t l = 0; l < gens_.size(); ++l)
      if ((*coeffs)[l] != 0) prod = prod * gens_[l].lambda.pow(static_cast<long>((*coeffs)[l]));
    return prod;
  }

  // Independent membership route for isobaric polynomials: group the
  // monomials into lattice cosets and check that each coset's coefficients
  // cancel under the character twist.
  bool isobaric_member_by_character(const Polynomial<K>& phi) const {
    if (phi.is_zero()) return true;
    std::vector<std::pair<Monomial, K>> reps;  // coset representative -> twisted sum
    for (const auto& t : phi.terms()) {
      bool placed = false;
      for (auto& [rep, sum] : reps) {
        std::vector<Int> diff(rep.nvars());
        for (size_t i = 0; i < diff.size(); ++i) diff[i] = Int(t.mono[i]) - Int(rep[i]);
        if (auto chi = character(diff)) {
          // u^e == chi(e - rep) * u^rep modulo the lattice ideal.
          sum = sum + t.coeff * chi->inv();
          placed = true;
          break;
        }
      }
      if (!placed) reps.push_back({t.mono, t.coeff});
    }
    for (const auto& [rep, sum] : reps)
      if (!sum.is_zero()) return false;
    return true;
  }

 private:
  RingPtr ring_;
  std::vector<Binomial<K>> gens_;
};

// Builds the binomial ideal attached to a relation basis and a choice of
// lambdas, one per basis vector. Vectors that are redundant (their binomial
// already lies in the ideal of the earlier ones) are dropped in ascending
// weight order.
template <class K>
BinomialIdeal<K> binomials_from_relations(const RingPtr& ring, const RelationBasis& basis,
                                          const std::vector<K>& lambdas);

// --- Groebner engine -------------------------------------------------------
//
// Internal form: P = u^lead - mu * u^trail with w(lead) = w(trail) and lead
// strictly exponent-lex smaller than trail. The reduction head is the lead
// (the order refines the weight by reversed exponent-lex), so rewriting moves
// monomials lex-upward inside their finite weight class and always
// terminates. Each member carries cofactors over the presentational
// generators: P = sum cof[l] * gen_l.as_poly.
template <class K>
struct TrackedBinomial {
  Monomial lead, trail;
  K mu;
  std::vector<Polynomial<K>> cof;

  Polynomial<K> as_poly(const RingPtr& ring) const {
    return Polynomial<K>::monomial(ring, lead, K(1)) + Polynomial<K>::monomial(ring, trail, -mu);
  }
};

template <class K>
class BinomialGB {
 public:
  BinomialGB() = default;

  explicit BinomialGB(const BinomialIdeal<K>& ideal) : ring_(ideal.ring()) {
    size_t ngens = ideal.generators().size();
    for (size_t l = 0; l < ngens; ++l) {
      const Binomial<K>& b = ideal.generators()[l];
      // b = u^m - lambda u^n with m lex-larger: lead form is
      // -(1/lambda) * b = u^n - (1/lambda) u^m.
      TrackedBinomial<K> t;
      t.lead = b.n;
      t.trail = b.m;
      t.mu = b.lambda.inv();
      t.cof.assign(ngens, Polynomial<K>::zero(ring_));
      t.cof[l] = Polynomial<K>::constant(ring_, -b.lambda.inv());
      insert_reduced(std::move(t));
    }
    complete();
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<TrackedBinomial<K>>& members() const { return members_; }
  size_t generator_count() const { return members_.empty() ? 0 : members_.front().cof.size(); }

  struct Division {
    Polynomial<K> remainder;
    std::vector<Polynomial<K>> cofactors;  // input = remainder + sum cof[l] * gen_l
  };

  Division divide(const Polynomial<K>& f) const {
    Division d;
    d.remainder = f;
    d.cofactors.assign(generator_count(), Polynomial<K>::zero(ring_));
    while (true) {
      const TrackedBinomial<K>* red = nullptr;
      const Term<K>* term = nullptr;
      for (const auto& t : d.remainder.terms()) {
        red = find_reducer(t.mono);
        if (red) {
          term = &t;
          break;
        }
      }
      if (!red) return d;
      Monomial q = red->lead.quotient_of(term->mono);
      K c = term->coeff;
      d.remainder = d.remainder - red->as_poly(ring_).times_term(q, c);
      for (size_t l = 0; l < d.cofactors.size(); ++l)
        if (!red->cof[l].is_zero()) d.cofactors[l] = d.cofactors[l] + red->cof[l].times_term(q, c);
    }
  }

  bool contains(const Polynomial<K>& f) const { return divide(f).remainder.is_zero(); }

  // Candidates outside the lead-term ideal.
  std::vector<Monomial> standard_monomials(const std::vector<Monomial>& candidates) const {
    std::vector<Monomial> out;
    for (const auto& m : candidates)
      if (!find_reducer(m)) out.push_back(m);
    return out;
  }

 private:
  const TrackedBinomial<K>* find_reducer(const Monomial& m) const {
    for (const auto& t : members_)
      if (t.lead.divides(m)) return &t;
    return nullptr;
  }

  // Renormalizes (a, coeff_a; b, coeff_b) with coeff on a monic into lead
  // form, scaling the cofactors accordingly. Returns false when it vanished.
  bool normalize(TrackedBinomial<K>& t) const {
    if (t.lead == t.trail) {
      if ((K(1) - t.mu).is_zero()) return false;
      throw Error("binomial reduction produced a monomial: lambda character inconsistent");
    }
    if (t.lead.cmp_lex(t.trail) > 0) {
      // u^a - mu u^b with a lex-larger: rewrite as -mu (u^b - (1/mu) u^a).
      K scale = (-t.mu).inv();
      std::swap(t.lead, t.trail);
      t.mu = t.mu.inv();
      for (auto& p : t.cof) p = p.scaled(scale);
    }
    return true;
  }

  // Reduces lead and trail against the current members until irreducible.
  bool reduce_tracked(TrackedBinomial<K>& t) const {
    while (true) {
      const TrackedBinomial<K>* r = nullptr;
      bool at_lead = true;
      for (const auto& mem : members_) {
        if (mem.lead.divides(t.lead)) {
          r = &mem;
          at_lead = true;
          break;
        }
        if (mem.lead.divides(t.trail)) {
          r = &mem;
          at_lead = false;
          break;
        }
      }
      if (!r) return true;
      if (at_lead) {
        // u^lead -> mu_r u^(lead - lead_r + trail_r); subtract q * r.
        Monomial q = r->lead.quotient_of(t.lead);
        Monomial nl = q * r->trail;
        for (size_t l = 0; l < t.cof.size(); ++l)
          if (!r->cof[l].is_zero()) t.cof[l] = t.cof[l] - r->cof[l].times_term(q, K(1));
        // result: mu_r u^nl - mu u^trail; make the nl side monic.
        K scale = r->mu.inv();
        t.lead = nl;
        t.mu = t.mu * scale;
        for (auto& p : t.cof) p = p.scaled(scale);
      } else {
        // -mu u^trail -> -mu mu_r u^(trail - lead_r + trail_r); add mu q r.
        Monomial q = r->lead.quotient_of(t.trail);
        t.trail = q * r->trail;
        for (size_t l = 0; l < t.cof.size(); ++l)
          if (!r->cof[l].is_zero()) t.cof[l] = t.cof[l] + r->cof[l].times_term(q, t.mu);
        t.mu = t.mu * r->mu;
      }
      if (!normalize(t)) return false;
    }
  }

  void insert_reduced(TrackedBinomial<K> t) {
    if (!normalize(t)) return;
    if (!reduce_tracked(t)) return;
    for (const auto& mem : members_)
      if (mem.lead == t.lead && mem.trail == t.trail && mem.mu == t.mu) return;
    size_t idx = members_.size();
    members_.push_back(std::move(t));
    for (size_t j = 0; j < idx; ++j) pairs_.push_back({j, idx});
  }

  void complete() {
    while (!pairs_.empty()) {
      // Smallest lcm weight first; deterministic.
      size_t best = 0;
      std::optional<Value> bestw;
      for (size_t i = 0; i < pairs_.size(); ++i) {
        Monomial l = lcm(members_[pairs_[i].first].lead, members_[pairs_[i].second].lead);
        Value w = ring_->weight(l);
        if (!bestw || w < *bestw) {
          bestw = w;
          best = i;
        }
      }
      auto [i, j] = pairs_[best];
      pairs_.erase(pairs_.begin() + static_cast<long>(best));
      const auto& a = members_[i];
      const auto& b = members_[j];
      Monomial l = lcm(a.lead, b.lead);
      Monomial qa = a.lead.quotient_of(l);
      Monomial qb = b.lead.quotient_of(l);
      // S = qa * a - qb * b = -mu_a u^(qa + trail_a) + mu_b u^(qb + trail_b).
      TrackedBinomial<K> s;
      s.lead = qa * a.trail;
      s.trail = qb * b.trail;
      s.mu = b.mu / a.mu;
      s.cof.assign(generator_count(), Polynomial<K>::zero(ring_));
      K scale = (-a.mu).inv();  // s = -mu_a (u^(qa+ta) - (mu_b/mu_a) u^(qb+tb))
      for (size_t g = 0; g < s.cof.size(); ++g) {
        Polynomial<K> c = Polynomial<K>::zero(ring_);
        if (!a.cof[g].is_zero()) c = c + a.cof[g].times_term(qa, scale);
        if (!b.cof[g].is_zero()) c = c - b.cof[g].times_term(qb, scale);
        s.cof[g] = std::move(c);
      }
      if (s.lead == s.trail && (K(1) - s.mu).is_zero()) continue;
      insert_reduced(std::move(s));
    }
    prune();
  }

  // Keep only members whose lead is not divisible by another member's lead.
  void prune() {
    std::vector<TrackedBinomial<K>> kept;
    for (size_t i = 0; i < members_.size(); ++i) {
      bool redundant = false;
      for (size_t j = 0; j < members_.size() && !redundant; ++j) {
        if (i == j) continue;
        if (members_[j].lead.divides(members_[i].lead) &&
            !(members_[i].lead == members_[j].lead && j > i))
          redundant = true;
      }
      if (!redundant) kept.push_back(members_[i]);
    }
    members_ = std::move(kept);
  }

  RingPtr ring_;
  std::vector<TrackedBinomial<K>> members_;
  std::vector<std::pair<size_t, size_t>> pairs_;
};

template <class K>
BinomialIdeal<K> binomials_from_relations(const RingPtr& ring, const RelationBasis& basis,
                                          const std::vector<K>& lambdas) {
  if (basis.vectors.size() != lambdas.size())
    throw Error("need exactly one lambda per relation vector");
  for (const auto& l : lambdas)
    if (l.is_zero()) throw Error("binomial coefficient lambda must be nonzero");
  std::vector<Binomial<K>> gens;
  for (size_t i = 0; i < basis.vectors.size(); ++i) {
    SplitRelation s = split_relation(basis.vectors[i]);
    gens.push_back(
        oriented_binomial(ring, Monomial(std::move(s.m)), Monomial(std::move(s.n)), lambdas[i]));
  }
  // Validate the character before doing ideal arithmetic with the lambdas.
  BinomialIdeal<K> raw(ring, gens);
  auto cert = raw.certify_structure();
  if (!cert.lambda_consistent) throw Error(cert.detail);
  // Drop redundant vectors in ascending weight order.
  std::vector<size_t> order(gens.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return ring->weight(gens[a].m) < ring->weight(gens[b].m);
  });
  std::vector<Binomial<K>> kept;
  for (size_t idx : order) {
    if (!kept.empty()) {
      BinomialGB<K> gb(BinomialIdeal<K>(ring, kept));
      if (gb.contains(gens[idx].as_poly(ring))) continue;
    }
    kept.push_back(gens[idx]);
  }
  return BinomialIdeal<K>(ring, std::move(kept));
}

}  // namespace valdeg
