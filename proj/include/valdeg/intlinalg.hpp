// Exact integer linear algebra: column echelon form with transformation,
// integer kernels (saturated by construction), lattice membership, and the
// Smith normal form used for saturation certificates.
#pragma once

#include <optional>
#include <vector>

#include "valdeg/rational.hpp"

namespace valdeg {

using IntMatrix = std::vector<std::vector<Int>>;  // row-major

inline IntMatrix identity_matrix(size_t n) {
  IntMatrix u(n, std::vector<Int>(n, 0));
  for (size_t i = 0; i < n; ++i) u[i][i] = 1;
  return u;
}

namespace detail {

inline void swap_cols(IntMatrix& m, size_t a, size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}
inline void addmul_col(IntMatrix& m, size_t dst, size_t src, const Int& q) {
  for (auto& row : m) row[dst] += q * row[src];
}
inline void negate_col(IntMatrix& m, size_t c) {
  for (auto& row : m) row[c] = -row[c];
}

}  // namespace detail

struct ColumnEchelon {
  IntMatrix h;                                 // a * u = h, h in column echelon form
  IntMatrix u;                                 // unimodular
  std::vector<std::pair<size_t, size_t>> pivots;  // (row, col), cols are 0..rank-1
  size_t rank = 0;
};

// Column echelon form over Z via gcd column operations.
inline ColumnEchelon column_echelon(IntMatrix a) {
  size_t m = a.size();
  size_t n = m ? a[0].size() : 0;
  ColumnEchelon ce;
  ce.u = identity_matrix(n);
  size_t r = 0;
  for (size_t row = 0; row < m && r < n; ++row) {
    while (true) {
      size_t best = n;
      for (size_t j = r; j < n; ++j) {
        if (a[row][j] == 0) continue;
        if (best == n || abs(a[row][j]) < abs(a[row][best])) best = j;
      }
      if (best == n) break;
      if (best != r) {
        detail::swap_cols(a, best, r);
        detail::swap_cols(ce.u, best, r);
      }
      bool clean = true;
      for (size_t j = r + 1; j < n; ++j) {
        if (a[row][j] == 0) continue;
        Int q = a[row][j] / a[row][r];
        if (q != 0) {
          detail::addmul_col(a, j, r, -q);
          detail::addmul_col(ce.u, j, r, -q);
        }
        if (a[row][j] != 0) clean = false;
      }
      if (clean) {
        if (a[row][r] < 0) {
          detail::negate_col(a, r);
          detail::negate_col(ce.u, r);
        }
        ce.pivots.emplace_back(row, r);
        ++r;
        break;
      }
    }
  }
  ce.rank = r;
  ce.h = std::move(a);
  return ce;
}

// Z-basis of { x : a * x = 0 }. The basis spans a saturated lattice because
// it consists of columns of a unimodular matrix.
inline std::vector<std::vector<Int>> integer_kernel(const IntMatrix& a) {
  if (a.empty()) return {};
  size_t n = a[0].size();
  ColumnEchelon ce = column_echelon(a);
  std::vector<std::vector<Int>> basis;
  for (size_t j = ce.rank; j < n; ++j) {
    std::vector<Int> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = ce.u[i][j];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline size_t integer_rank(const IntMatrix& a) { return column_echelon(a).rank; }

// Solves a * x = b over Z, where the columns of `a` span the lattice.
inline std::optional<std::vector<Int>> solve_in_column_span(const IntMatrix& a,
                                                            const std::vector<Int>& b) {
  size_t m = a.size();
  size_t n = m ? a[0].size() : 0;
  ColumnEchelon ce = column_echelon(a);
  std::vector<Int> residual = b;
  std::vector<Int> y(n, 0);
  for (auto [row, col] : ce.pivots) {
    const Int& piv = ce.h[row][col];
    if (residual[row] % piv != 0) return std::nullopt;
    Int t = residual[row] / piv;
    if (t != 0) {
      y[col] = t;
      for (size_t i = 0; i < m; ++i) residual[i] -= t * ce.h[i][col];
    }
  }
  for (const Int& v : residual)
    if (v != 0) return std::nullopt;
  std::vector<Int> x(n, 0);
  for (size_t i = 0; i < n; ++i) {
    Int s = 0;
    for (size_t j = 0; j < n; ++j)
      if (y[j] != 0) s += ce.u[i][j] * y[j];
    x[i] = s;
  }
  return x;
}

// Elementary divisors d1 | d2 | ... (nonzero ones), via the classical
// reduction; fine at the matrix sizes that occur here.
inline std::vector<Int> smith_divisors(IntMatrix a) {
  size_t m = a.size();
  size_t n = m ? a[0].size() : 0;
  std::vector<Int> divisors;
  size_t t = 0;
  while (t < m && t < n) {
    size_t pr = m, pc = n;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (pr == m || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
    if (pr == m) break;
    std::swap(a[t], a[pr]);
    for (size_t i = 0; i < m; ++i) std::swap(a[i][t], a[i][pc]);
    bool again = true;
    while (again) {
      again = false;
      for (size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        for (size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          again = true;
        }
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        for (size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (size_t i = t; i < m; ++i) std::swap(a[i][t], a[i][j]);
          again = true;
        }
      }
    }
    // Ensure the pivot divides the rest of the submatrix.
    bool divides_all = true;
    for (size_t i = t + 1; i < m && divides_all; ++i)
      for (size_t j = t + 1; j < n && divides_all; ++j)
        if (a[i][j] % a[t][t] != 0) {
          for (size_t jc = t; jc < n; ++jc) a[t][jc] += a[i][jc];
          divides_all = false;
        }
    if (!divides_all) continue;
    divisors.push_back(abs(a[t][t]));
    ++t;
  }
  return divisors;
}

inline bool is_saturated_basis(const IntMatrix& basis_rows) {
  if (basis_rows.empty()) return true;
  for (const Int& d : smith_divisors(basis_rows))
    if (d != 1) return false;
  return true;
}

}  // namespace valdeg
