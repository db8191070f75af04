// Overweight deformations: equations with a binomial head and a strictly
// heavier tail, certified by a standard-basis computation under the weighted
// order. The order is local (the distinguished head is the minimal-weight
// part), so weak normal forms use Mora's tangent-cone algorithm; fully
// reduced normal forms are canonical but may fail to be polynomial for
// pathological inputs, hence the explicit step caps.
#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "valdeg/binomial.hpp"
#include "valdeg/parser.hpp"
#include "valdeg/polynomial.hpp"

namespace valdeg {

enum class EquationKind { Fi, Fq };

template <class K>
struct DeformedEquation {
  Polynomial<K> poly;   // u^m - lambda u^n + tail, coefficient of u^m is one
  Monomial head_m, head_n;
  K lambda;
  EquationKind kind = EquationKind::Fq;
  std::optional<size_t> trailing_var;  // Fi chains; absent when the chain is truncated here

  Polynomial<K> head_poly(const RingPtr& ring) const {
    return Polynomial<K>::monomial(ring, head_m, K(1)) +
           Polynomial<K>::monomial(ring, head_n, -lambda);
  }
  Polynomial<K> tail_poly(const RingPtr& ring) const { return poly - head_poly(ring); }
};

// Splits an equation polynomial into its binomial head (the two-term initial
// form, scaled so the first term is monic) and overweight tail.
template <class K>
DeformedEquation<K> make_equation(Polynomial<K> poly, EquationKind kind = EquationKind::Fq,
                                  std::optional<size_t> trailing_var = {},
                                  const std::string& label = "equation") {
  const RingPtr ring = poly.ring();  // by value: poly is moved from below
  if (poly.is_zero()) throw Error(label + ": zero polynomial");
  Polynomial<K> init = poly.initial_form();
  if (init.term_count() != 2) {
    // Diagnose the usual mistake: a tail term lighter than the intended head.
    for (const auto& t : poly.terms()) {
      Value w = ring->weight(t.mono);
      for (const auto& s : poly.terms()) {
        Value ws = ring->weight(s.mono);
        if (ws > w) {
          throw Error(label + ": tail term " + ring->monomial_str(t.mono) + " has weight " +
                      w.str() + ", not greater than the head weight " + ws.str());
        }
      }
    }
    throw Error(label + ": initial form has " + std::to_string(init.term_count()) +
                " term(s); an overweight deformation needs a binomial head");
  }
  K scale = init.terms()[0].coeff.inv();
  poly = poly.scaled(scale);
  init = poly.initial_form();
  DeformedEquation<K> eq;
  eq.head_m = init.terms()[0].mono;
  eq.head_n = init.terms()[1].mono;
  eq.lambda = -init.terms()[1].coeff;
  eq.poly = std::move(poly);
  eq.kind = kind;
  eq.trailing_var = trailing_var;
  if (eq.trailing_var) {
    size_t v = *eq.trailing_var;
    if (v >= ring->nvars()) throw Error(label + ": trailing variable index out of range");
    Monomial vm = Monomial::var(v, ring->nvars());
    const K* c = eq.poly.coeff_of(vm);
    if (!c || !(-*c).is_one())
      throw Error(label + ": trailing variable " + ring->name(v) +
                  " must appear with coefficient -1");
    Value wv = ring->weight(vm);
    for (const auto& t : eq.poly.terms()) {
      if (t.mono == vm || t.mono == eq.head_m || t.mono == eq.head_n) continue;
      Value wt = ring->weight(t.mono);
      if (!(wt < wv))
        throw Error(label + ": term " + ring->monomial_str(t.mono) + " has weight " + wt.str() +
                    ", not below the trailing variable weight " + wv.str());
    }
  }
  return eq;
}

// --- Mora weak normal form and standard bases ------------------------------

template <class K>
Value weight_ecart(const Polynomial<K>& f) {
  return f.max_weight() - f.ring()->weight(f.lead().mono);
}

// Tangent-cone weak normal form: returns h with unit * f = (ideal part) + h
// and the lead of h not divisible by any lead of T. h == 0 iff f lies in the
// ideal generated by T in the local/power-series ring, provided T is a
// standard basis.
template <class K>
Polynomial<K> mora_weak_nf(Polynomial<K> h, const std::vector<Polynomial<K>>& basis,
                           size_t step_cap = 1'000'000) {
  std::vector<const Polynomial<K>*> pool;
  std::deque<Polynomial<K>> added;  // deque: stable references while growing
  for (const auto& g : basis) pool.push_back(&g);
  size_t steps = 0;
  while (!h.is_zero()) {
    if (++steps > step_cap) throw Error("Mora normal form exceeded the step cap");
    const Term<K>& lt = h.lead();
    const Polynomial<K>* best = nullptr;
    Value best_ecart = Value::zero(h.ring()->rank());
    for (const auto* g : pool) {
      if (!g->lead().mono.divides(lt.mono)) continue;
      Value e = weight_ecart(*g);
      if (!best || e < best_ecart) {
        best = g;
        best_ecart = e;
      }
    }
    if (!best) return h;
    if (best_ecart > weight_ecart(h)) {
      added.push_back(h);
      pool.push_back(&added.back());
    }
    const Term<K>& gt = best->lead();
    Monomial q = gt.mono.quotient_of(lt.mono);
    K c = lt.coeff / gt.coeff;
    h = h - best->times_term(q, c);
  }
  return h;
}

// Buchberger loop with Mora reduction; pairs are processed by increasing
// S-pair weight. Termination follows from the strictly ascending chain of
// lead-term ideals.
template <class K>
std::vector<Polynomial<K>> standard_basis(const std::vector<Polynomial<K>>& gens,
                                          size_t step_cap = 1'000'000) {
  std::vector<Polynomial<K>> g;
  for (const auto& f : gens) {
    if (f.is_zero()) continue;
    g.push_back(f.scaled(f.lead().coeff.inv()));
  }
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j) pairs.push_back({i, j});
  while (!pairs.empty()) {
    size_t best = 0;
    std::optional<Value> bestw;
    for (size_t k = 0; k < pairs.size(); ++k) {
      Monomial l = lcm(g[pairs[k].first].lead().mono, g[pairs[k].second].lead().mono);
      Value w = g[pairs[k].first].ring()->weight(l);
      if (!bestw || w < *bestw) {
        bestw = w;
        best = k;
      }
    }
    auto [i, j] = pairs[best];
    pairs.erase(pairs.begin() + static_cast<long>(best));
    Monomial l = lcm(g[i].lead().mono, g[j].lead().mono);
    Polynomial<K> s = g[i].times_term(g[i].lead().mono.quotient_of(l), K(1)) -
                      g[j].times_term(g[j].lead().mono.quotient_of(l), K(1));
    if (s.is_zero()) continue;
    Polynomial<K> h = mora_weak_nf(s, g, step_cap);
    if (h.is_zero()) continue;
    h = h.scaled(h.lead().coeff.inv());
    size_t idx = g.size();
    g.push_back(std::move(h));
    for (size_t k = 0; k < idx; ++k) pairs.push_back({k, idx});
  }
  // Minimalize: drop members whose lead is divisible by another lead.
  std::vector<Polynomial<K>> kept;
  for (size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j) continue;
      if (g[j].lead().mono.divides(g[i].lead().mono) &&
          !(g[i].lead().mono == g[j].lead().mono && i < j))
        redundant = true;
    }
    if (!redundant) kept.push_back(g[i]);
  }
  return kept;
}

// Canonical fully reduced remainder; unique when it terminates, which it
// does on every bundled system. A fully reduced form can be a genuine power
// series for some local inputs, so the cap guards against silent divergence.
template <class K>
Polynomial<K> reduce_full(Polynomial<K> h, const std::vector<Polynomial<K>>& basis,
                          size_t step_cap = 200'000) {
  size_t steps = 0;
  while (!h.is_zero()) {
    const Polynomial<K>* red = nullptr;
    const Term<K>* term = nullptr;
    for (const auto& t : h.terms()) {
      for (const auto& g : basis) {
        if (g.lead().mono.divides(t.mono)) {
          red = &g;
          term = &t;
          break;
        }
      }
      if (red) break;
    }
    if (!red) return h;
    if (++steps > step_cap)
      throw Error("normal form did not terminate within " + std::to_string(step_cap) +
                  " steps; the fully reduced form is not polynomial");
    Monomial q = red->lead().mono.quotient_of(term->mono);
    K c = term->coeff / red->lead().coeff;
    h = h - red->times_term(q, c);
  }
  return h;
}

// --- the deformation system -------------------------------------------------

struct CertifyReport {
  bool ok = false;
  std::string failure;
  size_t dim = 0;
  size_t rational_rank = 0;
  size_t lattice_rank = 0;
  bool saturated = false;
  bool lambda_consistent = false;
  size_t standard_basis_size = 0;
};

// Krull dimension of k[u]/(monomial ideal): the largest coordinate subspace
// not containing the support of any generator.
inline size_t monomial_ideal_dim(const std::vector<Monomial>& leads, size_t nvars) {
  std::vector<std::vector<size_t>> supports;
  for (const auto& m : leads) {
    std::vector<size_t> s;
    for (size_t i = 0; i < nvars; ++i)
      if (m[i]) s.push_back(i);
    if (s.empty()) return 0;  // unit ideal
    supports.push_back(std::move(s));
  }
  size_t best = 0;
  std::vector<char> allowed(nvars, 1);
  std::function<void()> rec = [&]() {
    for (const auto& s : supports) {
      bool inside = true;
      for (size_t v : s)
        if (!allowed[v]) {
          inside = false;
          break;
        }
      if (inside) {
        for (size_t v : s) {
          allowed[v] = 0;
          rec();
          allowed[v] = 1;
        }
        return;
      }
    }
    size_t count = 0;
    for (char a : allowed) count += a;
    best = std::max(best, count);
  };
  rec();
  return best;
}

template <class K>
class DeformationSystem {
 public:
  DeformationSystem(RingPtr ring, std::vector<DeformedEquation<K>> equations,
                    std::vector<size_t> base_indices = {})
      : ring_(std::move(ring)),
        equations_(std::move(equations)),
        base_indices_(std::move(base_indices)) {
    for (size_t i : base_indices_)
      if (i >= ring_->nvars()) throw Error("base index out of range");
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<DeformedEquation<K>>& equations() const { return equations_; }
  const std::vector<size_t>& base_indices() const { return base_indices_; }
  bool certified() const { return certified_; }

  const std::vector<Polynomial<K>>& standard_basis_members() const {
    require_certified();
    return sb_;
  }
  const BinomialIdeal<K>& heads() const {
    require_certified();
    return *heads_;
  }
  const BinomialGB<K>& head_gb() const {
    require_certified();
    return *head_gb_;
  }
  size_t dim() const {
    require_certified();
    return dim_;
  }
  size_t rational_rank() const {
    require_certified();
    return report_.rational_rank;
  }
  const CertifyReport& report() const { return report_; }

  std::vector<Polynomial<K>> equation_polys() const {
    std::vector<Polynomial<K>> out;
    out.reserve(equations_.size());
    for (const auto& e : equations_) out.push_back(e.poly);
    return out;
  }

  // Certifies the overweight-deformation property: builds a standard basis,
  // checks that every initial form lies in the ideal of the binomial heads,
  // and that the dimension equals the rational rank of the weights.
  const CertifyReport& certify(size_t step_cap = 1'000'000) {
    if (certified_ || attempted_) return report_;
    attempted_ = true;
    std::vector<Binomial<K>> head_gens;
    flips_.clear();
    for (const auto& e : equations_) {
      Binomial<K> b = oriented_binomial(ring_, e.head_m, e.head_n, e.lambda);
      // b.as_poly = flip * (input head); record flip for lifting.
      K flip = (b.m == e.head_m) ? K(1) : -e.lambda.inv();
      head_gens.push_back(std::move(b));
      flips_.push_back(flip);
    }
    heads_.emplace(ring_, head_gens);
    auto cert = heads_->certify_structure();
    report_.rational_rank = cert.rational_rank;
    report_.lattice_rank = cert.lattice_rank;
    report_.saturated = cert.saturated;
    report_.lambda_consistent = cert.lambda_consistent;
    if (!cert.ok()) {
      report_.failure = cert.detail;
      return report_;
    }
    // Standing assumption: no head lies in the ideal of the other heads.
    {
      std::vector<size_t> order(head_gens.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return ring_->weight(head_gens[a].m) < ring_->weight(head_gens[b].m);
      });
      for (size_t idx : order) {
        std::vector<Binomial<K>> others;
        for (size_t j = 0; j < head_gens.size(); ++j)
          if (j != idx) others.push_back(head_gens[j]);
        if (others.empty()) continue;
        BinomialGB<K> gb(BinomialIdeal<K>(ring_, others));
        if (gb.contains(head_gens[idx].as_poly(ring_))) {
          report_.failure = "the head of equation " + std::to_string(idx + 1) +
                            " lies in the ideal generated by the other heads";
          return report_;
        }
      }
    }
    head_gb_.emplace(*heads_);
    sb_ = standard_basis(equation_polys(), step_cap);
    report_.standard_basis_size = sb_.size();
    for (const auto& g : sb_) {
      auto div = head_gb_->divide(g.initial_form());
      if (!div.remainder.is_zero()) {
        report_.failure = "initial form " + g.initial_form().str() +
                          " of a standard-basis element is not in the ideal of the heads "
                          "(offending remainder: " +
                          div.remainder.str() + ")";
        return report_;
      }
    }
    std::vector<Monomial> leads;
    for (const auto& g : sb_) leads.push_back(g.lead().mono);
    dim_ = monomial_ideal_dim(leads, ring_->nvars());
    report_.dim = dim_;
    if (dim_ != report_.rational_rank) {
      report_.failure = "dimension of the initial-ideal quotient is " + std::to_string(dim_) +
                        ", expected the rational rank " + std::to_string(report_.rational_rank);
      return report_;
    }
    report_.ok = true;
    certified_ = true;
    return report_;
  }

  // Fully reduced canonical remainder modulo the stored standard basis.
  Polynomial<K> normal_form(const Polynomial<K>& f, size_t step_cap = 200'000) const {
    require_certified();
    check_same_ring(ring_, f.ring());
    return reduce_full(f, sb_, step_cap);
  }

  bool ideal_member(const Polynomial<K>& f) const {
    require_certified();
    check_same_ring(ring_, f.ring());
    return mora_weak_nf(f, sb_).is_zero();
  }

  // Rewrites f upward in weight while its initial form lies in the ideal of
  // the heads; the result is the maximal-weight representative of the class
  // of f. Callers must rule out ideal members first.
  Polynomial<K> maximal_weight_representative(Polynomial<K> h, size_t round_cap = 100'000) const {
    require_certified();
    size_t rounds = 0;
    while (!h.is_zero()) {
      auto div = head_gb_->divide(h.initial_form());
      if (!div.remainder.is_zero()) return h;
      if (++rounds > round_cap)
        throw Error("initial-form rewriting exceeded the round cap; value not reached");
      for (size_t l = 0; l < equations_.size(); ++l) {
        if (div.cofactors[l].is_zero()) continue;
        h = h - div.cofactors[l].scaled(flips_[l]) * equations_[l].poly;
      }
    }
    return h;
  }

 private:
  void require_certified() const {
    if (!certified_) throw Error("system is not certified (run certify first)");
  }

  RingPtr ring_;
  std::vector<DeformedEquation<K>> equations_;
  std::vector<size_t> base_indices_;
  bool certified_ = false;
  bool attempted_ = false;
  size_t dim_ = 0;
  CertifyReport report_;
  std::vector<Polynomial<K>> sb_;
  std::optional<BinomialIdeal<K>> heads_;
  std::optional<BinomialGB<K>> head_gb_;
  std::vector<K> flips_;
};

}  // namespace valdeg
