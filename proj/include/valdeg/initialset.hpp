// Finite initial subsets of a well-ordered generator list, compatible with
// the tower of convex subgroups: in rank one they are prefixes, in higher
// rank the projection along the last coordinate must be initial and every
// fiber must be a prefix. Closure is a closure operator (extensive,
// monotone, idempotent) and closures of finite sets are finite.
#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "valdeg/value.hpp"

namespace valdeg {

using IndexSet = std::vector<size_t>;  // sorted positions into the gamma list

namespace detail_initial {

// vals must be strictly ascending. Positions in `sel` index into vals.
inline IndexSet closure_rec(const std::vector<Value>& vals, const IndexSet& sel) {
  if (sel.empty()) return {};
  size_t rank = vals.front().rank();
  if (rank == 1) {
    size_t hi = *std::max_element(sel.begin(), sel.end());
    IndexSet out(hi + 1);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  // Fibers share the first rank-1 coordinates; they are consecutive in the
  // ascending list and internally ordered by the last coordinate.
  std::vector<Value> proj;
  std::vector<IndexSet> fibers;
  for (size_t i = 0; i < vals.size(); ++i) {
    std::vector<Rational> head(vals[i].coords().begin(), vals[i].coords().end() - 1);
    Value p{std::move(head)};
    if (proj.empty() || proj.back() != p) {
      proj.push_back(std::move(p));
      fibers.push_back({});
    }
    fibers.back().push_back(i);
  }
  std::vector<size_t> fiber_of(vals.size());
  for (size_t f = 0; f < fibers.size(); ++f)
    for (size_t pos : fibers[f]) fiber_of[pos] = f;

  IndexSet hit;
  for (size_t pos : sel) hit.push_back(fiber_of[pos]);
  std::sort(hit.begin(), hit.end());
  hit.erase(std::unique(hit.begin(), hit.end()), hit.end());

  IndexSet closed_fibers = closure_rec(proj, hit);

  std::set<size_t> in_sel(sel.begin(), sel.end());
  IndexSet out;
  for (size_t f : closed_fibers) {
    size_t prefix_len = 1;  // unhit fibers contribute their minimum
    for (size_t k = 0; k < fibers[f].size(); ++k)
      if (in_sel.count(fibers[f][k])) prefix_len = k + 1;
    for (size_t k = 0; k < prefix_len; ++k) out.push_back(fibers[f][k]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Smallest new positions to adjoin, one per projection level, mirroring the
// level-by-level construction of the nested chain.
inline IndexSet growth_candidates(const std::vector<Value>& vals, const IndexSet& b) {
  if (b.size() == vals.size()) return {};
  std::set<size_t> in_b(b.begin(), b.end());
  size_t rank = vals.empty() ? 1 : vals.front().rank();
  IndexSet out;
  if (rank == 1) {
    for (size_t i = 0; i < vals.size(); ++i)
      if (!in_b.count(i)) {
        out.push_back(i);
        break;
      }
    return out;
  }
  std::vector<Value> proj;
  std::vector<IndexSet> fibers;
  for (size_t i = 0; i < vals.size(); ++i) {
    std::vector<Rational> head(vals[i].coords().begin(), vals[i].coords().end() - 1);
    Value p{std::move(head)};
    if (proj.empty() || proj.back() != p) {
      proj.push_back(std::move(p));
      fibers.push_back({});
    }
    fibers.back().push_back(i);
  }
  IndexSet hit;
  for (size_t f = 0; f < fibers.size(); ++f)
    for (size_t pos : fibers[f])
      if (in_b.count(pos)) {
        hit.push_back(f);
        break;
      }
  for (size_t f : growth_candidates(proj, hit)) out.push_back(fibers[f].front());
  for (size_t f : hit)
    for (size_t pos : fibers[f])
      if (!in_b.count(pos)) {
        out.push_back(pos);
        break;
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail_initial

// Validates the gamma list: positive, strictly increasing, common rank.
inline void check_gamma_list(const std::vector<Value>& gammas) {
  if (gammas.empty()) throw Error("empty generator list");
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i].rank() != gammas.front().rank())
      throw Error("generators must share a common rank");
    if (!gammas[i].is_positive()) throw Error("generators must be positive");
    if (i && !(gammas[i - 1] < gammas[i]))
      throw Error("generator list must be strictly increasing");
  }
}

inline IndexSet initial_closure(const IndexSet& c, const std::vector<Value>& gammas) {
  check_gamma_list(gammas);
  IndexSet sel = c;
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  for (size_t pos : sel)
    if (pos >= gammas.size()) throw Error("index out of range in initial_closure");
  return detail_initial::closure_rec(gammas, sel);
}

inline bool is_initial(const IndexSet& b, const std::vector<Value>& gammas) {
  IndexSet sorted = b;
  std::sort(sorted.begin(), sorted.end());
  return initial_closure(sorted, gammas) == sorted;
}

// Nested chain B_0 <= B_1 <= ... with `levels` growth steps; each step
// adjoins at least the smallest missing index per projection level and
// closes up. Once the full index set is reached the chain stays constant.
inline std::vector<IndexSet> build_chain(const IndexSet& b0, const std::vector<Value>& gammas,
                                         size_t levels) {
  check_gamma_list(gammas);
  if (!is_initial(b0, gammas)) throw Error("build_chain: B0 is not an initial set");
  std::vector<IndexSet> chain{b0};
  std::sort(chain[0].begin(), chain[0].end());
  for (size_t t = 0; t < levels; ++t) {
    const IndexSet& prev = chain.back();
    IndexSet cand = detail_initial::growth_candidates(gammas, prev);
    if (cand.empty()) {
      chain.push_back(prev);
      continue;
    }
    IndexSet next = prev;
    next.insert(next.end(), cand.begin(), cand.end());
    chain.push_back(initial_closure(next, gammas));
  }
  return chain;
}

}  // namespace valdeg
