// Truncated parametrization of a plane branch by Newton iteration, guided by
// the characteristic exponent ladder that the branch data determines. Used
// only as an independent test oracle for the valuation; characteristic zero
// only, and coefficient equations are solved by exact rational root search
// (the oracle reports failure when a required root is not rational).
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "valdeg/approximation.hpp"

namespace valdeg {

// Dense truncated power series over Q: coefficients of t^0 .. t^(cap-1).
struct QSeries {
  std::vector<Rational> c;
  size_t cap = 0;

  static QSeries zero(size_t cap) { return {std::vector<Rational>(cap, Rational(0)), cap}; }
  static QSeries term(const Rational& a, size_t e, size_t cap) {
    QSeries s = zero(cap);
    if (e < cap) s.c[e] = a;
    return s;
  }
  bool is_zero() const {
    for (const auto& a : c)
      if (a != 0) return false;
    return true;
  }
  std::optional<size_t> ord() const {
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) return i;
    return std::nullopt;
  }
  friend QSeries operator+(const QSeries& a, const QSeries& b) {
    QSeries r = a;
    for (size_t i = 0; i < r.cap; ++i) r.c[i] += b.c[i];
    return r;
  }
  friend QSeries operator-(const QSeries& a, const QSeries& b) {
    QSeries r = a;
    for (size_t i = 0; i < r.cap; ++i) r.c[i] -= b.c[i];
    return r;
  }
  friend QSeries operator*(const QSeries& a, const QSeries& b) {
    QSeries r = zero(a.cap);
    for (size_t i = 0; i < a.cap; ++i) {
      if (a.c[i] == 0) continue;
      for (size_t j = 0; i + j < a.cap; ++j)
        if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  QSeries scaled(const Rational& s) const {
    QSeries r = *this;
    for (auto& a : r.c) a *= s;
    return r;
  }
};

namespace detail_puiseux {

// Polynomials in one unknown coefficient; index = degree.
using CPoly = std::vector<Rational>;

inline bool cpoly_zero(const CPoly& p) {
  for (const auto& a : p)
    if (a != 0) return false;
  return true;
}
inline CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
  if (a.empty() || b.empty()) return {};
  CPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}
inline void cpoly_add_to(CPoly& a, const CPoly& b, const Rational& s) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
}

// Series with CPoly coefficients, for a single symbolic Newton step.
struct CSeries {
  std::vector<CPoly> c;
  size_t cap = 0;
  static CSeries zero(size_t cap) { return {std::vector<CPoly>(cap), cap}; }
  static CSeries from(const QSeries& s) {
    CSeries r = zero(s.cap);
    for (size_t i = 0; i < s.cap; ++i)
      if (s.c[i] != 0) r.c[i] = CPoly{s.c[i]};
    return r;
  }
  friend CSeries operator*(const CSeries& a, const CSeries& b) {
    CSeries r = zero(a.cap);
    for (size_t i = 0; i < a.cap; ++i) {
      if (cpoly_zero(a.c[i])) continue;
      for (size_t j = 0; i + j < a.cap; ++j) {
        if (cpoly_zero(b.c[j])) continue;
        CPoly prod = cpoly_mul(a.c[i], b.c[j]);
        cpoly_add_to(r.c[i + j], prod, Rational(1));
      }
    }
    return r;
  }
  friend CSeries operator+(const CSeries& a, const CSeries& b) {
    CSeries r = a;
    for (size_t i = 0; i < r.cap; ++i) cpoly_add_to(r.c[i], b.c[i], Rational(1));
    return r;
  }
};

inline std::vector<Int> small_divisors(Int n) {
  n = abs(n);
  if (n == 0) return {};
  if (n > 1'000'000'000'000LL) throw Error("rational root search: constant too large");
  std::vector<Int> out;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Nonzero rational roots, positive candidates first, ascending magnitude.
inline std::vector<Rational> rational_roots(const CPoly& phi) {
  // Strip the power of c and clear denominators.
  size_t low = 0;
  while (low < phi.size() && phi[low] == 0) ++low;
  size_t high = phi.size();
  while (high > low && phi[high - 1] == 0) --high;
  if (low >= high) return {};
  Int den = 1;
  for (size_t i = low; i < high; ++i) den = lcm(den, rat_den(phi[i]));
  std::vector<Int> z;
  for (size_t i = low; i < high; ++i) z.push_back(rat_num(phi[i]) * (den / rat_den(phi[i])));
  if (z.size() == 1) return {};  // constant: no nonzero root
  auto eval = [&](const Rational& x) {
    Rational acc = 0;
    for (size_t i = z.size(); i-- > 0;) acc = acc * x + Rational(z[i]);
    return acc;
  };
  std::vector<Rational> roots;
  for (const Int& p : small_divisors(z.front()))
    for (const Int& q : small_divisors(z.back())) {
      if (gcd(p, q) != 1) continue;
      Rational cand(p, q);
      if (eval(cand) == 0) roots.push_back(cand);
      Rational neg(-p, q);
      if (eval(neg) == 0) roots.push_back(neg);
    }
  std::sort(roots.begin(), roots.end(), [](const Rational& a, const Rational& b) {
    bool pa = a > 0, pb = b > 0;
    if (pa != pb) return pa;
    Rational aa = a < 0 ? Rational(-a) : a, ab = b < 0 ? Rational(-b) : b;
    if (aa != ab) return aa < ab;
    return a < b;
  });
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace detail_puiseux

struct Parametrization {
  Int d;         // x = t^d
  size_t order;  // series coefficients are reliable below this t-exponent
  QSeries x, y;
  std::vector<QSeries> u;  // u_2, ..., u_g
};

namespace detail_puiseux {

template <class Series>
Series eval_plane(const Polynomial<QQ>& p, const Series& xs, const Series& ys, size_t cap) {
  std::map<uint32_t, Series> xpow, ypow;
  std::function<const Series&(std::map<uint32_t, Series>&, const Series&, uint32_t)> pw =
      [&](std::map<uint32_t, Series>& memo, const Series& base, uint32_t e) -> const Series& {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    if (e == 0) {
      Series one = Series::zero(cap);
      if constexpr (std::is_same_v<Series, QSeries>)
        one.c[0] = Rational(1);
      else
        one.c[0] = CPoly{Rational(1)};
      return memo.emplace(e, std::move(one)).first->second;
    }
    Series r = pw(memo, base, e - 1) * base;
    return memo.emplace(e, std::move(r)).first->second;
  };
  Series acc = Series::zero(cap);
  for (const auto& t : p.terms()) {
    Series prod = pw(xpow, xs, t.mono[0]) * pw(ypow, ys, t.mono[1]);
    if constexpr (std::is_same_v<Series, QSeries>) {
      acc = acc + prod.scaled(t.coeff.v);
    } else {
      for (size_t i = 0; i < cap; ++i) cpoly_add_to(acc.c[i], prod.c[i], t.coeff.v);
    }
  }
  return acc;
}

inline Polynomial<QQ> d_dy(const Polynomial<QQ>& p) {
  std::vector<Term<QQ>> terms;
  for (const auto& t : p.terms()) {
    if (!t.mono[1]) continue;
    std::vector<uint32_t> e{t.mono[0], t.mono[1] - 1};
    terms.push_back({Monomial(std::move(e)), QQ(Rational(t.mono[1])) * t.coeff});
  }
  return Polynomial<QQ>::from_terms(p.ring(), std::move(terms));
}

// Recursive Newton with characteristic-step backtracking. Linear steps are
// accepted only when they strictly raise the residual order; a rejected step
// means the next correction interacts quadratically, i.e. a characteristic
// exponent is due.
inline std::optional<QSeries> solve_branch(const Polynomial<QQ>& p, const QSeries& xs, QSeries y,
                                           const std::vector<size_t>& char_exps, size_t next_char,
                                           long last_exp, size_t target, size_t cap) {
  Polynomial<QQ> py = d_dy(p);
  size_t guard = 0;
  while (true) {
    if (++guard > cap + 16) return std::nullopt;
    QSeries r = eval_plane<QSeries>(p, xs, y, cap);
    auto er = r.ord();
    if (!er) return y;  // residual vanishes to the working precision
    QSeries dy = eval_plane<QSeries>(py, xs, y, cap);
    auto ed = dy.ord();
    if (!ed) return std::nullopt;  // derivative vanished: not a simple branch point
    if (*er >= *ed && *er - *ed >= target) return y;
    long j = static_cast<long>(*er) - static_cast<long>(*ed);
    bool char_step =
        next_char < char_exps.size() &&
        (y.is_zero() || j <= last_exp || j >= static_cast<long>(char_exps[next_char]));
    if (!char_step) {
      if (j <= last_exp) return std::nullopt;  // stuck outside the ladder
      Rational coeff = -(r.c[*er] / dy.c[*ed]);
      QSeries cand = y + QSeries::term(coeff, static_cast<size_t>(j), cap);
      QSeries r2 = eval_plane<QSeries>(p, xs, cand, cap);
      auto er2 = r2.ord();
      if (!er2 || *er2 > *er) {
        y = std::move(cand);
        last_exp = j;
        continue;
      }
      if (next_char < char_exps.size())
        char_step = true;  // quadratic interference: the characteristic term is due
      else
        return std::nullopt;
    }
    size_t e = char_exps[next_char];
    CSeries ys = CSeries::from(y);
    CPoly lin{Rational(0), Rational(1)};  // the unknown c
    if (e < cap) cpoly_add_to(ys.c[e], lin, Rational(1));
    CSeries rr = eval_plane<CSeries>(p, CSeries::from(xs), ys, cap);
    CPoly phi;
    for (size_t i = 0; i < cap; ++i)
      if (!cpoly_zero(rr.c[i])) {
        phi = rr.c[i];
        break;
      }
    if (cpoly_zero(phi)) return std::nullopt;
    for (const Rational& root : rational_roots(phi)) {
      if (root == 0) continue;
      QSeries next = y + QSeries::term(root, e, cap);
      auto res =
          solve_branch(p, xs, next, char_exps, next_char + 1, static_cast<long>(e), target, cap);
      if (res) return res;
    }
    return std::nullopt;
  }
}

}  // namespace detail_puiseux

// Builds x = t^d, y(t), and the u_q(t) for a branch system, to the requested
// order. Throws when a characteristic coefficient has no rational solution.
inline Parametrization puiseux_parametrization(const BranchResult<QQ>& br, size_t order) {
  const auto& data_gammas = br.system.ring()->weights();
  Rational g0 = data_gammas[0].scalar();
  std::vector<Rational> gammas;
  for (const auto& w : data_gammas) gammas.push_back(w.scalar() / g0);
  // n_i from the head exponents of the chain equations.
  std::vector<unsigned> n;
  for (size_t i = 1; i < gammas.size(); ++i) {
    const auto& eq = br.system.equations()[i - 1];
    uint32_t e = std::max(eq.head_m[i], eq.head_n[i]);
    n.push_back(e);
  }
  Int d = rat_den(group_step(gammas, gammas.size() - 1));
  auto scaled = [&](const Rational& q) {
    Rational s = q * Rational(d);
    if (rat_den(s) != 1) throw Error("internal: non-integer scaled exponent");
    return static_cast<size_t>(rat_num(s));
  };
  std::vector<size_t> char_exps;
  char_exps.push_back(scaled(gammas[1]));
  for (size_t q = 1; q + 1 < gammas.size(); ++q) {
    Rational step = gammas[q + 1] - Rational(n[q - 1]) * gammas[q];
    char_exps.push_back(char_exps.back() + scaled(step));
  }
  size_t cap = 2 * order + 8 * static_cast<size_t>(d) + 16;
  QSeries xs = QSeries::term(Rational(1), static_cast<size_t>(d), cap);
  const Polynomial<QQ>& plane = br.key_polys.back();
  auto y = detail_puiseux::solve_branch(plane, xs, QSeries::zero(cap), char_exps, 0, -1, order,
                                        cap);
  if (!y)
    throw Error(
        "parametrization oracle unavailable: no rational solution for a characteristic "
        "coefficient (a field extension would be required)");
  Parametrization par{d, order, xs, *y, {}};
  for (size_t q = 0; q + 1 < br.key_polys.size(); ++q)
    par.u.push_back(detail_puiseux::eval_plane<QSeries>(br.key_polys[q], xs, *y, cap));
  return par;
}

// t-adic order of f evaluated along the parametrization; nullopt when the
// value is censored at the reliable order.
template <class K>
std::optional<size_t> oracle_t_order(const Polynomial<K>& f, const Parametrization& par) {
  static_assert(std::is_same_v<K, QQ>, "the parametrization oracle is rational only");
  size_t cap = par.x.cap;
  std::vector<std::map<uint32_t, QSeries>> pows(f.ring()->nvars());
  auto var_series = [&](size_t v) -> const QSeries& {
    if (v == 0) return par.x;
    if (v == 1) return par.y;
    if (v - 2 >= par.u.size()) throw Error("variable outside the parametrized branch");
    return par.u[v - 2];
  };
  std::function<const QSeries&(size_t, uint32_t)> pw = [&](size_t v,
                                                           uint32_t e) -> const QSeries& {
    auto it = pows[v].find(e);
    if (it != pows[v].end()) return it->second;
    QSeries r = e == 0 ? QSeries::term(Rational(1), 0, cap) : QSeries(pw(v, e - 1) * var_series(v));
    return pows[v].emplace(e, std::move(r)).first->second;
  };
  QSeries acc = QSeries::zero(cap);
  for (const auto& t : f.terms()) {
    QSeries prod = QSeries::term(Rational(1), 0, cap);
    for (size_t v = 0; v < f.ring()->nvars(); ++v)
      if (t.mono[v]) prod = prod * pw(v, t.mono[v]);
    acc = acc + prod.scaled(t.coeff.v);
  }
  auto o = acc.ord();
  if (o && *o < par.order) return o;
  return std::nullopt;  // censored: order >= par.order
}

}  // namespace valdeg
