// Value semigroups: relation lattices via integer kernels, membership and
// partition counting (complete in rational rank one by scaling to a numerical
// semigroup, cap-bounded otherwise), and the Euler identity check.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "valdeg/intlinalg.hpp"
#include "valdeg/value.hpp"

namespace valdeg {

// A relation vector split into positive and negative parts m, n with
// disjoint supports; m - n reproduces the vector.
struct SplitRelation {
  std::vector<uint32_t> m, n;
};

inline size_t checked_table_size(const Int& n, const char* what) {
  if (n < 0 || n > 50'000'000) throw Error(std::string(what) + " out of supported table range");
  return static_cast<size_t>(n);
}

inline SplitRelation split_relation(const std::vector<Int>& v) {
  SplitRelation s;
  s.m.resize(v.size(), 0);
  s.n.resize(v.size(), 0);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0) s.m[i] = static_cast<uint32_t>(v[i]);
    if (v[i] < 0) s.n[i] = static_cast<uint32_t>(-v[i]);
  }
  return s;
}

struct RelationBasis {
  std::vector<std::vector<Int>> vectors;
  std::vector<SplitRelation> split() const {
    std::vector<SplitRelation> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) out.push_back(split_relation(v));
    return out;
  }
};

// Integer matrix whose kernel is the relation lattice: one row per value
// coordinate, denominators cleared row by row.
inline IntMatrix weight_matrix(const std::vector<Value>& gens) {
  if (gens.empty()) return {};
  size_t h = gens[0].rank();
  IntMatrix a(h, std::vector<Int>(gens.size()));
  for (size_t r = 0; r < h; ++r) {
    Int denlcm = 1;
    for (const auto& g : gens) {
      if (g.rank() != h) throw Error("generators must share a common rank");
      denlcm = lcm(denlcm, rat_den(g[r]));
    }
    for (size_t j = 0; j < gens.size(); ++j) {
      const Rational& q = gens[j][r];
      a[r][j] = rat_num(q) * (denlcm / rat_den(q));
    }
  }
  return a;
}

inline RelationBasis relation_lattice(const std::vector<Value>& gens) {
  if (gens.empty()) throw Error("relation_lattice of empty generator list");
  for (const auto& g : gens)
    if (!g.is_positive()) throw Error("generators must be positive");
  RelationBasis b;
  b.vectors = integer_kernel(weight_matrix(gens));
  return b;
}

class SemigroupPresentation {
 public:
  explicit SemigroupPresentation(std::vector<Value> gens) : gens_(std::move(gens)) {
    if (gens_.empty()) throw Error("semigroup needs at least one generator");
    rank_ = gens_[0].rank();
    for (const auto& g : gens_) {
      if (g.rank() != rank_) throw Error("generators must share a common rank");
      if (!g.is_positive()) throw Error("generators must be positive");
    }
    lattice_ = relation_lattice(gens_);
    rational_rank_ = gens_.size() - lattice_.vectors.size();
  }

  const std::vector<Value>& generators() const { return gens_; }
  size_t size() const { return gens_.size(); }
  size_t rank() const { return rank_; }
  size_t rational_rank() const { return rational_rank_; }
  const RelationBasis& lattice() const { return lattice_; }

  bool is_rank_one_rational() const { return rank_ == 1; }

  // Common scale turning rank-1 generators into positive integers.
  Int scale_factor() const {
    require_rank_one();
    Int d = 1;
    for (const auto& g : gens_) d = lcm(d, rat_den(g.scalar()));
    return d;
  }
  std::vector<Int> scaled_generators() const {
    Int d = scale_factor();
    std::vector<Int> out;
    out.reserve(gens_.size());
    for (const auto& g : gens_) out.push_back(rat_num(g.scalar()) * (d / rat_den(g.scalar())));
    return out;
  }

  std::optional<std::vector<uint32_t>> membership(const Value& gamma,
                                                  std::optional<uint32_t> degree_cap = {}) const {
    check_query(gamma);
    if (gamma.cmp(Value::zero(rank_)) < 0) throw Error("membership query must be nonnegative");
    if (gamma.is_zero()) return std::vector<uint32_t>(gens_.size(), 0);
    if (rank_ == 1) return membership_rank1(gamma.scalar());
    if (!degree_cap) throw Error("membership in rank > 1 requires a degree cap");
    std::vector<uint32_t> a(gens_.size(), 0);
    if (search_capped(gamma, 0, *degree_cap, a)) return a;
    return std::nullopt;
  }

  Int partition_count(const Value& gamma, std::optional<uint32_t> degree_cap = {}) const {
    check_query(gamma);
    if (gamma.cmp(Value::zero(rank_)) < 0) return 0;
    if (gamma.is_zero()) return 1;
    if (rank_ == 1) {
      auto [target, table] = count_table(gamma.scalar());
      return target < 0 ? Int(0) : table[static_cast<size_t>(target)];
    }
    if (!degree_cap) throw Error("partition count in rank > 1 requires a degree cap");
    std::vector<uint32_t> a(gens_.size(), 0);
    return count_capped(gamma, 0, *degree_cap);
  }

  struct Violation {
    size_t index;
    std::vector<uint32_t> representation;  // over the preceding generators
  };

  // A generator list is minimal iff no generator lies in the semigroup of its
  // predecessors.
  std::vector<Violation> minimal_generators_check(std::optional<uint32_t> degree_cap = {}) const {
    std::vector<Violation> out;
    for (size_t i = 1; i < gens_.size(); ++i) {
      SemigroupPresentation prefix(std::vector<Value>(gens_.begin(), gens_.begin() + i));
      if (auto rep = prefix.membership(gens_[i], degree_cap)) out.push_back({i, *rep});
    }
    return out;
  }

  // All semigroup elements <= bound; componentwise bound in rank > 1 so the
  // enumeration stays finite.
  std::vector<Value> elements_up_to(const Value& bound) const {
    check_query(bound);
    if (rank_ == 1) {
      Int d = lcm(scale_factor(), rat_den(bound.scalar()));
      Int target = rat_num(bound.scalar()) * (d / rat_den(bound.scalar()));
      if (target < 0) return {};
      std::vector<Int> sg = rescale(d);
      size_t t = checked_table_size(target, "semigroup bound");
      std::vector<char> reach(t + 1, 0);
      reach[0] = 1;
      for (const Int& g : sg) {
        size_t gs = static_cast<size_t>(g);
        for (size_t v = gs; v <= t; ++v)
          if (reach[v - gs]) reach[v] = 1;
      }
      std::vector<Value> out;
      for (size_t v = 0; v <= t; ++v)
        if (reach[v]) out.push_back(Value(Rational(Int(v), d)));
      return out;
    }
    std::set<std::vector<Rational>> seen;
    std::vector<Value> frontier{Value::zero(rank_)};
    seen.insert(frontier[0].coords());
    while (!frontier.empty()) {
      std::vector<Value> next;
      for (const auto& v : frontier) {
        for (const auto& g : gens_) {
          Value w = v + g;
          if (!w.leq_componentwise(bound)) continue;
          if (seen.insert(w.coords()).second) next.push_back(w);
        }
      }
      frontier = std::move(next);
    }
    std::vector<Value> out(seen.size(), Value::zero(rank_));
    size_t i = 0;
    for (const auto& c : seen) out[i++] = Value(c);
    std::sort(out.begin(), out.end());
    return out;
  }

  struct EulerReport {
    bool ok = true;
    std::vector<std::pair<Value, std::pair<Int, Int>>> mismatches;  // gamma -> (lhs, rhs)
  };

  // Checks sum p(gamma) t^gamma = prod 1/(1 - t^(gamma_i)) coefficientwise up
  // to `bound`. The two sides are computed by independent code paths: the
  // left by the representation-counting table, the right by expanding the
  // product of truncated geometric series.
  EulerReport euler_identity_check(const Value& bound) const {
    require_rank_one();
    Int d = lcm(scale_factor(), rat_den(bound.scalar()));
    Int target = rat_num(bound.scalar()) * (d / rat_den(bound.scalar()));
    EulerReport rep;
    if (target < 0) return rep;
    size_t t = checked_table_size(target, "semigroup bound");
    std::vector<Int> sg = rescale(d);

    std::vector<Int> lhs(t + 1, 0);
    lhs[0] = 1;
    for (const Int& g : sg) {
      size_t gs = static_cast<size_t>(g);
      for (size_t v = gs; v <= t; ++v) lhs[v] += lhs[v - gs];
    }

    std::vector<Int> rhs(t + 1, 0);
    rhs[0] = 1;
    for (const Int& g : sg) {
      size_t gs = static_cast<size_t>(g);
      std::vector<Int> geo(t + 1, 0);
      for (size_t k = 0; k * gs <= t; ++k) geo[k * gs] = 1;
      std::vector<Int> prod(t + 1, 0);
      for (size_t i = 0; i <= t; ++i) {
        if (rhs[i] == 0) continue;
        for (size_t j = 0; i + j <= t; ++j)
          if (geo[j] != 0) prod[i + j] += rhs[i] * geo[j];
      }
      rhs = std::move(prod);
    }

    for (size_t v = 0; v <= t; ++v) {
      if (lhs[v] != rhs[v]) {
        rep.ok = false;
        rep.mismatches.push_back({Value(Rational(Int(v), d)), {lhs[v], rhs[v]}});
      }
    }
    return rep;
  }

 private:
  void require_rank_one() const {
    if (rank_ != 1) throw Error("operation requires rank-1 rational generators");
  }
  void check_query(const Value& v) const {
    if (v.rank() != rank_) throw Error("rank mismatch in semigroup query");
  }
  std::vector<Int> rescale(const Int& d) const {
    std::vector<Int> out;
    out.reserve(gens_.size());
    for (const auto& g : gens_) out.push_back(rat_num(g.scalar()) * (d / rat_den(g.scalar())));
    return out;
  }

  // Rank 1: scale to integers and run the coin-problem table with parents.
  std::optional<std::vector<uint32_t>> membership_rank1(const Rational& gamma) const {
    Int d = scale_factor();
    d = lcm(d, rat_den(gamma));
    Int target = rat_num(gamma) * (d / rat_den(gamma));
    if (target < 0) return std::nullopt;
    std::vector<Int> sg = rescale(d);
    size_t t = checked_table_size(target, "semigroup bound");
    std::vector<int> parent(t + 1, -1);
    std::vector<char> reach(t + 1, 0);
    reach[0] = 1;
    for (size_t v = 1; v <= t; ++v) {
      for (size_t j = 0; j < sg.size(); ++j) {
        Int prev = Int(v) - sg[j];
        if (prev < 0) continue;
        if (reach[static_cast<size_t>(prev)]) {
          reach[v] = 1;
          parent[v] = static_cast<int>(j);
          break;
        }
      }
    }
    if (!reach[t]) return std::nullopt;
    std::vector<uint32_t> rep(gens_.size(), 0);
    size_t v = t;
    while (v > 0) {
      int j = parent[v];
      rep[static_cast<size_t>(j)] += 1;
      v = static_cast<size_t>(Int(v) - sg[static_cast<size_t>(j)]);
    }
    return rep;
  }

  std::pair<long, std::vector<Int>> count_table(const Rational& gamma) const {
    Int d = lcm(scale_factor(), rat_den(gamma));
    Int target = rat_num(gamma) * (d / rat_den(gamma));
    if (target < 0) return {-1, {}};
    std::vector<Int> sg = rescale(d);
    size_t t = checked_table_size(target, "semigroup bound");
    std::vector<Int> ways(t + 1, 0);
    ways[0] = 1;
    for (const Int& g : sg) {
      size_t gs = static_cast<size_t>(g);
      for (size_t v = gs; v <= t; ++v) ways[v] += ways[v - gs];
    }
    return {static_cast<long>(t), ways};
  }

  bool search_capped(const Value& rest, size_t idx, uint32_t cap, std::vector<uint32_t>& a) const {
    if (rest.is_zero()) {
      for (size_t j = idx; j < a.size(); ++j) a[j] = 0;
      return true;
    }
    if (idx == gens_.size()) return false;
    Value cur = rest;
    for (uint32_t k = 0; k <= cap; ++k) {
      a[idx] = k;
      if (search_capped(cur, idx + 1, cap - k, a)) return true;
      if (k < cap) cur -= gens_[idx];
    }
    a[idx] = 0;
    return false;
  }

  Int count_capped(const Value& rest, size_t idx, uint32_t cap) const {
    if (rest.is_zero()) return 1;
    if (idx == gens_.size()) return 0;
    Int total = 0;
    Value cur = rest;
    for (uint32_t k = 0; k <= cap; ++k) {
      total += count_capped(cur, idx + 1, cap - k);
      if (k < cap) cur -= gens_[idx];
    }
    return total;
  }

  std::vector<Value> gens_;
  size_t rank_;
  size_t rational_rank_;
  RelationBasis lattice_;
};

}  // namespace valdeg
