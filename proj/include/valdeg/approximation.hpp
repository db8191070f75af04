// Truncation ideals K_B and the Abhyankar semivaluations they induce, the
// plane-branch chain of equations with its key polynomials, the composed
// rank-two valuation, and the order-growth diagnostic along a chain of
// initial sets.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valdeg/initialset.hpp"
#include "valdeg/valuation.hpp"

namespace valdeg {

// Approximation operations identify generator indices with variable indices,
// so the variables must be declared in strictly increasing weight order.
inline void require_weight_sorted(const RingPtr& ring) {
  const auto& w = ring->weights();
  for (size_t i = 1; i < w.size(); ++i)
    if (!(w[i - 1] < w[i]))
      throw Error("approximation requires variables declared in strictly increasing weight order");
}

template <class K>
Polynomial<K> restrict_to_subring(const Polynomial<K>& f, const std::vector<size_t>& b,
                                  const RingPtr& sub_ring) {
  std::vector<char> keep(f.ring()->nvars(), 0);
  std::vector<size_t> pos(f.ring()->nvars(), 0);
  for (size_t k = 0; k < b.size(); ++k) {
    keep[b[k]] = 1;
    pos[b[k]] = k;
  }
  std::vector<Term<K>> terms;
  for (const auto& t : f.terms()) {
    bool ok = true;
    std::vector<uint32_t> exps(b.size(), 0);
    for (size_t i = 0; i < f.ring()->nvars() && ok; ++i) {
      if (!t.mono[i]) continue;
      if (!keep[i])
        ok = false;  // variable outside B: the whole term is set to zero
      else
        exps[pos[i]] = t.mono[i];
    }
    if (ok) terms.push_back({Monomial(std::move(exps)), t.coeff});
  }
  return Polynomial<K>::from_terms(sub_ring, std::move(terms));
}

template <class K>
struct TruncationIdeal {
  IndexSet b;                      // the initial set, as variable indices
  IndexSet excluded;               // complement of b
  RingPtr sub_ring;                // ring on the B-variables
  DeformationSystem<K> quotient;   // certified restricted system
  std::vector<size_t> kept_equations;  // indices into the parent system
};

// Restricts the system to the variables of B: keeps the equations whose head
// binomial lives in the B-variables, sets the other variables to zero in
// their tails, and certifies the result as an overweight deformation.
template <class K>
TruncationIdeal<K> truncate(const DeformationSystem<K>& system, const IndexSet& b_in) {
  const RingPtr& ring = system.ring();
  require_weight_sorted(ring);
  const std::vector<Value>& gammas = ring->weights();
  IndexSet b = b_in;
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  for (size_t i : b)
    if (i >= ring->nvars()) throw Error("truncate: index out of range");
  if (!is_initial(b, gammas)) throw Error("truncate: B is not an initial set");

  std::vector<char> in_b(ring->nvars(), 0);
  for (size_t i : b) in_b[i] = 1;
  // Mandated base: the flagged indices (maximal-ideal generators plus a
  // rationally generating set) and the variables of every Fq equation.
  for (size_t i : system.base_indices())
    if (!in_b[i])
      throw Error("truncate: B must contain the base index '" + ring->name(i) + "'");
  {
    std::vector<Value> base_w, all_w;
    for (size_t i : b) base_w.push_back(ring->weight(i));
    for (size_t i = 0; i < ring->nvars(); ++i) all_w.push_back(ring->weight(i));
    if (integer_rank(weight_matrix(base_w)) != integer_rank(weight_matrix(all_w)))
      throw Error("truncate: B does not rationally generate the value group");
  }
  for (size_t e = 0; e < system.equations().size(); ++e) {
    const auto& eq = system.equations()[e];
    if (eq.kind != EquationKind::Fq) continue;
    for (size_t i = 0; i < ring->nvars(); ++i) {
      bool uses = false;
      for (const auto& t : eq.poly.terms())
        if (t.mono[i]) uses = true;
      if (uses && !in_b[i])
        throw Error("truncate: B must contain variable '" + ring->name(i) +
                    "' used by Fq equation " + std::to_string(e + 1));
    }
  }

  IndexSet excluded;
  for (size_t i = 0; i < ring->nvars(); ++i)
    if (!in_b[i]) excluded.push_back(i);

  std::vector<std::string> names;
  std::vector<Value> weights;
  for (size_t i : b) {
    names.push_back(ring->name(i));
    weights.push_back(ring->weight(i));
  }
  RingPtr sub_ring = WeightedRing::make(ring->field(), std::move(names), std::move(weights));

  std::vector<size_t> sub_index(ring->nvars(), SIZE_MAX);
  for (size_t k = 0; k < b.size(); ++k) sub_index[b[k]] = k;

  std::vector<DeformedEquation<K>> eqs;
  std::vector<size_t> kept;
  std::vector<size_t> base;
  for (size_t i : system.base_indices()) base.push_back(sub_index[i]);
  for (size_t e = 0; e < system.equations().size(); ++e) {
    const auto& eq = system.equations()[e];
    bool head_in_b = true;
    for (size_t i = 0; i < ring->nvars(); ++i)
      if ((eq.head_m[i] || eq.head_n[i]) && !in_b[i]) head_in_b = false;
    if (!head_in_b) continue;
    Polynomial<K> restricted = restrict_to_subring(eq.poly, b, sub_ring);
    std::optional<size_t> trailing;
    if (eq.trailing_var && in_b[*eq.trailing_var]) trailing = sub_index[*eq.trailing_var];
    eqs.push_back(make_equation(std::move(restricted), eq.kind, trailing,
                                "equation " + std::to_string(e + 1) + " restricted to B"));
    kept.push_back(e);
  }
  TruncationIdeal<K> out{std::move(b), std::move(excluded), sub_ring,
                         DeformationSystem<K>(sub_ring, std::move(eqs), std::move(base)),
                         std::move(kept)};
  const auto& rep = out.quotient.certify();
  if (!rep.ok)
    throw Error("truncate: restricted system failed certification (B too small or invalid "
                "input system): " +
                rep.failure);
  return out;
}

// Value of the image of f in R/K_B; infinite iff f lies in K_B.
template <class K>
ValuationResult<K> semivaluation_value(const Polynomial<K>& f, const TruncationIdeal<K>& trunc) {
  Polynomial<K> restricted = restrict_to_subring(f, trunc.b, trunc.sub_ring);
  return value_of(restricted, trunc.quotient);
}

// --- plane branches ---------------------------------------------------------

template <class K>
struct BranchData {
  std::vector<Rational> gammas;            // gamma_0 = 1 < gamma_1 < ...
  std::vector<unsigned> n;                 // n_i = [Phi_i : Phi_{i-1}], i = 1..g
  std::vector<std::vector<unsigned>> digits;  // t^(i) = (t_0 .. t_{i-1})
  std::vector<Polynomial<K>> tails;        // g_i in the chain ring; may be zero
};

// Subgroup of Q generated by the first k+1 gammas, as e*Z.
inline Rational group_step(const std::vector<Rational>& gammas, size_t upto) {
  Int den = 1;
  for (size_t i = 0; i <= upto; ++i) den = lcm(den, rat_den(gammas[i]));
  Int g = 0;
  for (size_t i = 0; i <= upto; ++i) g = gcd(g, rat_num(gammas[i]) * (den / rat_den(gammas[i])));
  return Rational(g, den);
}

template <class K>
struct BranchResult {
  DeformationSystem<K> system;     // variables x, y, u2, ..., u_g
  RingPtr plane_ring;              // x, y with weights gamma_0, gamma_1
  std::vector<Polynomial<K>> key_polys;  // p_1, ..., p_g in the plane ring
  std::vector<uint64_t> betas;     // beta(i) = minimal total degree of p_i
  Int scale;                       // lcm of the gamma denominators
};

inline std::vector<std::string> branch_variable_names(size_t g) {
  std::vector<std::string> names{"x", "y"};
  for (size_t i = 2; i <= g; ++i) names.push_back("u" + std::to_string(i));
  return names;
}

inline RingPtr branch_ring(const FieldDesc& field, const std::vector<Rational>& gammas) {
  std::vector<Value> weights;
  for (const auto& g : gammas) weights.push_back(Value(g));
  return WeightedRing::make(field, branch_variable_names(gammas.size() - 1), std::move(weights));
}

// Validates the branch invariants, names the failing inequality, and builds
// the chain of equations together with the key polynomials obtained by
// eliminating the u-variables.
template <class K>
BranchResult<K> branch_system(const BranchData<K>& data, const FieldDesc& field) {
  size_t g = data.n.size();
  if (data.gammas.size() != g + 1) throw Error("branch data: need one gamma per level plus gamma_0");
  if (data.digits.size() != g) throw Error("branch data: need one digit vector per level");
  if (!data.tails.empty() && data.tails.size() != g)
    throw Error("branch data: need one tail per level when tails are given");
  if (g == 0) throw Error("branch data: need at least one level");
  if (data.gammas[0] != 1) throw Error("branch data: gamma_0 must be 1 (normalized)");
  for (size_t i = 1; i <= g; ++i)
    if (!(data.gammas[i - 1] < data.gammas[i]))
      throw Error("branch data: generators must be strictly increasing");

  // n_i must match the group indices [Phi_i : Phi_{i-1}].
  for (size_t i = 1; i <= g; ++i) {
    if (data.n[i - 1] < 2) throw Error("branch data: n_" + std::to_string(i) + " must be >= 2");
    Rational prev = group_step(data.gammas, i - 1);
    Rational cur = group_step(data.gammas, i);
    Rational idx = prev / cur;
    if (rat_den(idx) != 1 || Int(data.n[i - 1]) != rat_num(idx))
      throw Error("branch data: n_" + std::to_string(i) + " = " + std::to_string(data.n[i - 1]) +
                  " does not equal the group index [Phi_" + std::to_string(i) + " : Phi_" +
                  std::to_string(i - 1) + "] = " + to_string(idx));
  }
  // Digit expansions: n_i gamma_i = sum t_q gamma_q with 0 <= t_q < n_q for q >= 1.
  for (size_t i = 1; i <= g; ++i) {
    const auto& t = data.digits[i - 1];
    if (t.size() != i)
      throw Error("branch data: digit vector t^(" + std::to_string(i) + ") must have length " +
                  std::to_string(i));
    Rational lhs = Rational(data.n[i - 1]) * data.gammas[i];
    Rational rhs = 0;
    for (size_t q = 0; q < i; ++q) {
      if (q >= 1 && t[q] >= data.n[q - 1])
        throw Error("branch data: digit t_" + std::to_string(q) + " of level " + std::to_string(i) +
                    " must satisfy 0 <= t_q < n_q");
      rhs += Rational(t[q]) * data.gammas[q];
    }
    if (lhs != rhs)
      throw Error("branch data: relation n_i*gamma_i = sum t_q*gamma_q fails at level " +
                  std::to_string(i) + " (" + to_string(lhs) + " != " + to_string(rhs) + ")");
  }
  // gamma_{i+1} > n_i gamma_i.
  for (size_t i = 1; i < g; ++i) {
    Rational ng = Rational(data.n[i - 1]) * data.gammas[i];
    if (!(data.gammas[i + 1] > ng))
      throw Error("branch data: gamma_{i+1} > n_i*gamma_i violated at i = " + std::to_string(i) +
                  " (" + to_string(data.gammas[i + 1]) + " <= " + to_string(ng) + ")");
  }

  RingPtr ring = branch_ring(field, data.gammas);
  size_t nvars = ring->nvars();

  auto var_mono = [&](size_t level) {  // level q -> variable index (0->x, 1->y, q->u_q)
    return Monomial::var(level, nvars);
  };

  std::vector<DeformedEquation<K>> eqs;
  for (size_t i = 1; i <= g; ++i) {
    const auto& t = data.digits[i - 1];
    std::vector<uint32_t> head_exp(nvars, 0);
    head_exp[i] = data.n[i - 1];  // u_i^{n_i}; level 1 is y
    std::vector<uint32_t> mono_exp(nvars, 0);
    for (size_t q = 0; q < i; ++q) mono_exp[q] = t[q];
    Polynomial<K> poly = Polynomial<K>::monomial(ring, Monomial(head_exp), K(1)) +
                         Polynomial<K>::monomial(ring, Monomial(mono_exp), K(-1));
    Polynomial<K> tail = data.tails.empty() ? Polynomial<K>::zero(ring) : data.tails[i - 1];
    if (!tail.is_zero()) {
      check_same_ring(tail.ring(), ring);
      Rational lower = Rational(data.n[i - 1]) * data.gammas[i];
      for (const auto& term : tail.terms()) {
        Value w = ring->weight(term.mono);
        if (!(Value(lower) < w))
          throw Error("branch data: tail term " + ring->monomial_str(term.mono) + " of level " +
                      std::to_string(i) + " has weight " + w.str() + " <= n_i*gamma_i = " +
                      to_string(lower));
        if (i < g && !(w < Value(data.gammas[i + 1])))
          throw Error("branch data: tail term " + ring->monomial_str(term.mono) + " of level " +
                      std::to_string(i) + " has weight " + w.str() + " >= gamma_{i+1} = " +
                      to_string(data.gammas[i + 1]));
        for (size_t v = i + 1; v < nvars; ++v)
          if (term.mono[v])
            throw Error("branch data: tail of level " + std::to_string(i) +
                        " may only use variables of lower level");
      }
      poly = poly - tail;
    }
    std::optional<size_t> trailing;
    if (i < g) {
      trailing = i + 1;
      poly = poly - Polynomial<K>::monomial(ring, var_mono(i + 1), K(1));
    }
    eqs.push_back(make_equation(std::move(poly), EquationKind::Fi, trailing,
                                "branch equation " + std::to_string(i)));
  }

  BranchResult<K> out{DeformationSystem<K>(ring, std::move(eqs), {0, 1}),
                      WeightedRing::make(field, {"x", "y"},
                                         {Value(data.gammas[0]), Value(data.gammas[1])}),
                      {},
                      {},
                      rat_den(group_step(data.gammas, g))};

  // Key polynomials by eliminating u_2 .. u_g: U_{i+1} = head_i(x, y, U) - g_i(x, y, U).
  std::vector<Polynomial<K>> u_exprs;  // u_exprs[q] = U_q in the plane ring, q >= 2
  auto to_plane = [&](const Polynomial<K>& f) {
    Polynomial<K> acc = Polynomial<K>::zero(out.plane_ring);
    for (const auto& term : f.terms()) {
      std::vector<uint32_t> xy{term.mono[0], term.mono[1]};
      Polynomial<K> piece =
          Polynomial<K>::monomial(out.plane_ring, Monomial(std::move(xy)), term.coeff);
      for (size_t q = 2; q < nvars; ++q)
        for (uint32_t e = 0; e < term.mono[q]; ++e) piece = piece * u_exprs[q - 2];
      acc = acc + piece;
    }
    return acc;
  };
  for (size_t i = 1; i <= g; ++i) {
    const auto& eq = out.system.equations()[i - 1];
    Polynomial<K> rhs = eq.poly;
    if (eq.trailing_var)
      rhs = rhs + Polynomial<K>::monomial(ring, var_mono(*eq.trailing_var), K(1));
    // rhs = head - g_i; eliminated it becomes U_{i+1} = p_i.
    Polynomial<K> p = to_plane(rhs);
    out.key_polys.push_back(p);
    u_exprs.push_back(p);
    out.betas.push_back(p.total_degree_min());
    if (out.betas.size() >= 2 && out.betas[out.betas.size() - 2] > out.betas.back())
      throw Error("branch data: beta sequence is not nondecreasing");
  }
  out.system.certify();
  if (!out.system.report().ok)
    throw Error("branch system failed certification: " + out.system.report().failure);
  return out;
}

// Recognizes a deformation system in branch shape (rank one, weight-sorted
// variables, an Fi chain with lambda = 1 heads u_i^{n_i} - monomial) and
// recovers the branch data; used by the parametrization oracle and the
// order-growth diagnostic.
template <class K>
std::optional<BranchData<K>> extract_branch_data(const DeformationSystem<K>& system) {
  const RingPtr& ring = system.ring();
  if (ring->rank() != 1) return std::nullopt;
  const auto& w = ring->weights();
  for (size_t i = 1; i < w.size(); ++i)
    if (!(w[i - 1] < w[i])) return std::nullopt;
  size_t g = ring->nvars() - 1;
  if (system.equations().size() != g) return std::nullopt;
  BranchData<K> data;
  Rational g0 = w[0].scalar();
  for (size_t i = 0; i < ring->nvars(); ++i) data.gammas.push_back(w[i].scalar() / g0);
  if (data.gammas[0] != 1) return std::nullopt;
  RingPtr norm_ring = branch_ring(ring->field(), data.gammas);
  for (size_t i = 1; i <= g; ++i) {
    const auto& eq = system.equations()[i - 1];
    if (!eq.lambda.is_one()) return std::nullopt;
    // head_m must be u_i^{n_i} and head_n a monomial in lower variables (or
    // the other way round; normalize).
    Monomial power = eq.head_m, mono = eq.head_n;
    auto is_pure_power_of = [&](const Monomial& m, size_t v) {
      for (size_t j = 0; j < m.nvars(); ++j)
        if (j != v && m[j]) return false;
      return m[v] >= 2;
    };
    if (!is_pure_power_of(power, i)) std::swap(power, mono);
    if (!is_pure_power_of(power, i)) return std::nullopt;
    for (size_t j = i; j < ring->nvars(); ++j)
      if (mono[j]) return std::nullopt;
    data.n.push_back(power[i]);
    std::vector<unsigned> t;
    for (size_t q = 0; q < i; ++q) t.push_back(mono[q]);
    data.digits.push_back(std::move(t));
    // Tail: equation minus head minus trailing term, re-expressed in the
    // normalized ring (exponents are unchanged; only weights rescale).
    Polynomial<K> tail = -eq.tail_poly(ring);
    if (eq.trailing_var)
      tail = tail - Polynomial<K>::monomial(ring, Monomial::var(*eq.trailing_var, ring->nvars()),
                                            K(1));
    std::vector<Term<K>> terms;
    for (const auto& term : tail.terms()) terms.push_back({term.mono, term.coeff});
    data.tails.push_back(Polynomial<K>::from_terms(norm_ring, std::move(terms)));
  }
  // Validate by rebuilding; reject shapes that fail the branch invariants.
  try {
    branch_system(data, ring->field());
  } catch (const Error&) {
    return std::nullopt;
  }
  return data;
}

// --- Fi-chain elimination and order growth ----------------------------------

// Expresses f in the base variables by substituting each non-base variable
// with the rest of its Fi equation (u_i = head_i - g_i), highest index first.
template <class K>
Polynomial<K> eliminate_to_base(const Polynomial<K>& f, const DeformationSystem<K>& system) {
  const RingPtr& ring = system.ring();
  std::vector<char> is_base(ring->nvars(), 0);
  for (size_t i : system.base_indices()) is_base[i] = 1;
  std::vector<std::optional<size_t>> eq_of_var(ring->nvars());
  for (size_t e = 0; e < system.equations().size(); ++e) {
    const auto& eq = system.equations()[e];
    if (eq.trailing_var) eq_of_var[*eq.trailing_var] = e;
  }
  Polynomial<K> out = f;
  for (size_t i = ring->nvars(); i-- > 0;) {
    if (is_base[i]) continue;
    if (!eq_of_var[i])
      throw Error("variable '" + ring->name(i) +
                  "' has no Fi equation; elimination to the base is unavailable");
    const auto& eq = system.equations()[*eq_of_var[i]];
    Polynomial<K> subst =
        eq.poly + Polynomial<K>::monomial(ring, Monomial::var(i, ring->nvars()), K(1));
    for (const auto& t : subst.terms())
      if (t.mono[i]) throw Error("Fi equation for '" + ring->name(i) + "' is not triangular");
    out = out.substitute(i, subst);
  }
  return out;
}

struct OrderGrowthRow {
  IndexSet b;
  std::optional<uint64_t> order;  // m-adic order proxy; absent means K_B = (0)
};

struct OrderGrowthReport {
  std::vector<OrderGrowthRow> rows;
  bool nondecreasing = true;
};

// Minimal total degree, over the generators of each K_{B_t}, of their
// expression in the base variables. The generators are the excluded
// variables, the images of restricted equations (the negated dropped terms),
// and, for a truncated Fi chain tail, the eliminated equation itself, which
// is the key polynomial of the next level.
template <class K>
OrderGrowthReport order_growth_report(const DeformationSystem<K>& system,
                                      const std::vector<IndexSet>& chain) {
  const RingPtr& ring = system.ring();
  require_weight_sorted(ring);
  OrderGrowthReport report;
  for (const IndexSet& b : chain) {
    std::vector<char> in_b(ring->nvars(), 0);
    for (size_t i : b) in_b[i] = 1;
    std::optional<uint64_t> best;
    auto consider = [&](const Polynomial<K>& gen) {
      if (gen.is_zero()) return;
      uint64_t ord = eliminate_to_base(gen, system).total_degree_min();
      if (!best || ord < *best) best = ord;
    };
    for (size_t i = 0; i < ring->nvars(); ++i)
      if (!in_b[i]) consider(Polynomial<K>::variable(ring, i));
    for (const auto& eq : system.equations()) {
      bool head_in_b = true;
      for (size_t i = 0; i < ring->nvars(); ++i)
        if ((eq.head_m[i] || eq.head_n[i]) && !in_b[i]) head_in_b = false;
      if (!head_in_b) continue;
      // Image of the restricted equation in R: minus the dropped terms.
      std::vector<Term<K>> dropped;
      for (const auto& t : eq.poly.terms()) {
        bool outside = false;
        for (size_t i = 0; i < ring->nvars(); ++i)
          if (t.mono[i] && !in_b[i]) outside = true;
        if (outside) dropped.push_back({t.mono, -t.coeff});
      }
      if (!dropped.empty()) {
        consider(Polynomial<K>::from_terms(ring, std::move(dropped)));
      } else if (eq.kind == EquationKind::Fi && !eq.trailing_var) {
        // Truncated chain tail: its vanishing defines the next generator.
        consider(eq.poly);
      }
    }
    report.rows.push_back({b, best});
  }
  // Absent orders mean K_B = (0), i.e. order infinity.
  for (size_t t = 1; t < report.rows.size(); ++t) {
    const auto& prev = report.rows[t - 1].order;
    const auto& cur = report.rows[t].order;
    bool decreases = (!prev.has_value() && cur.has_value()) ||
                     (prev.has_value() && cur.has_value() && *cur < *prev);
    if (decreases) report.nondecreasing = false;
  }
  return report;
}

// --- composed rank-two valuation ---------------------------------------------

// Re-interprets a polynomial in x, y inside a larger ring whose first two
// variables are x, y.
template <class K>
Polynomial<K> lift_plane_to(const Polynomial<K>& f, const RingPtr& target) {
  if (target->nvars() < 2) throw Error("target ring must contain x and y");
  std::vector<Term<K>> terms;
  for (const auto& t : f.terms()) {
    std::vector<uint32_t> e(target->nvars(), 0);
    e[0] = t.mono[0];
    e[1] = t.mono[1];
    terms.push_back({Monomial(std::move(e)), t.coeff});
  }
  return Polynomial<K>::from_terms(target, std::move(terms));
}

template <class K>
struct ComposedValue {
  Int order;          // p_i-adic order n
  ValueOrInfinite gamma;  // nu_{B_i} of the final quotient
  bool provisional = false;
};

namespace detail_xy {

template <class K>
uint32_t y_degree(const Polynomial<K>& f) {
  uint32_t d = 0;
  for (const auto& t : f.terms()) d = std::max(d, t.mono[1]);
  return d;
}
template <class K>
uint32_t x_degree(const Polynomial<K>& f) {
  uint32_t d = 0;
  for (const auto& t : f.terms()) d = std::max(d, t.mono[0]);
  return d;
}

// Drops monomials with x-exponent >= T; sets the flag when anything drops.
template <class K>
Polynomial<K> truncate_x(const Polynomial<K>& f, uint32_t t_cap, bool& truncated) {
  std::vector<Term<K>> kept;
  for (const auto& t : f.terms()) {
    if (t.mono[0] >= t_cap)
      truncated = true;
    else
      kept.push_back(t);
  }
  return Polynomial<K>::from_terms(f.ring(), std::move(kept));
}

// Division by a y-monic polynomial, coefficients tracked modulo x^T.
template <class K>
struct YDivision {
  Polynomial<K> quotient, remainder;
  bool truncated = false;
};

template <class K>
YDivision<K> divide_y_mod_xT(const Polynomial<K>& h, const Polynomial<K>& p, uint32_t t_cap) {
  const RingPtr& ring = h.ring();
  uint32_t dp = y_degree(p);
  YDivision<K> out;
  out.quotient = Polynomial<K>::zero(ring);
  out.remainder = truncate_x(h, t_cap, out.truncated);
  while (!out.remainder.is_zero()) {
    uint32_t dr = y_degree(out.remainder);
    if (dr < dp) break;
    // Leading y-coefficient of the remainder, times y^(dr-dp).
    std::vector<Term<K>> lead;
    for (const auto& t : out.remainder.terms())
      if (t.mono[1] == dr) {
        std::vector<uint32_t> e{t.mono[0], dr - dp};
        lead.push_back({Monomial(std::move(e)), t.coeff});
      }
    Polynomial<K> qterm = Polynomial<K>::from_terms(ring, std::move(lead));
    out.quotient = out.quotient + qterm;
    out.remainder =
        truncate_x(out.remainder - qterm * p, t_cap, out.truncated);
  }
  return out;
}

}  // namespace detail_xy

// h = p_i^n * htilde with htilde not divisible by p_i; returns n and
// nu_{B_i}(htilde). Division runs in y-polynomials with x-coefficients
// tracked modulo x^T; with the default policy T starts at
// 2 * deg_y(p_i) * max(1, deg_x(h)) and doubles until the exactness
// certificate (no truncation during the division chain) holds.
template <class K>
ComposedValue<K> composed_value(const Polynomial<K>& h, const Polynomial<K>& key_poly,
                                const TruncationIdeal<K>& level_trunc,
                                std::optional<uint32_t> precision = {},
                                uint32_t hard_cap = 1u << 20) {
  if (h.is_zero()) throw Error("composed_value of zero");
  check_same_ring(h.ring(), key_poly.ring());
  if (h.ring()->nvars() != 2) throw Error("composed_value expects a polynomial in x, y");
  uint32_t dy = detail_xy::y_degree(key_poly);
  if (dy == 0) throw Error("key polynomial must be monic in y of positive degree");
  bool auto_policy = !precision.has_value();
  uint32_t t_cap = precision.value_or(2 * dy * std::max(1u, detail_xy::x_degree(h)) + 1);
  while (true) {
    Polynomial<K> cur = h;
    Int n = 0;
    bool provisional = false;
    while (true) {
      auto div = detail_xy::divide_y_mod_xT(cur, key_poly, t_cap);
      if (!div.remainder.is_zero()) break;  // exact modulo x^T, hence exact: not divisible
      if (div.truncated) {
        provisional = true;
        if (auto_policy) break;  // retry with doubled precision
      }
      if (div.quotient.is_zero()) break;  // h vanished modulo x^T
      n += 1;
      cur = div.quotient;
    }
    if (provisional && auto_policy) {
      if (t_cap >= hard_cap)
        throw Error("composed_value: precision " + std::to_string(t_cap) +
                    " insufficient (remainder not resolvable); raise T");
      t_cap = std::min(hard_cap, t_cap * 2);
      continue;
    }
    ComposedValue<K> out;
    out.order = n;
    out.provisional = provisional;
    // Value of the final quotient on the branch.
    Polynomial<K> lifted = lift_plane_to(cur, level_trunc.quotient.ring());
    out.gamma = value_of(lifted, level_trunc.quotient).value;
    return out;
  }
}

}  // namespace valdeg
