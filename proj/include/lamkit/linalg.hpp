#pragma once

// Exact dense linear algebra over the rationals: row reduction, rank and
// null-space bases. Sizes here are tiny (tens of rows and columns), so a
// plain vector-of-rows representation is all that is needed.

#include "lamkit/scalar.hpp"

#include <cstddef>
#include <vector>

namespace lamkit {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row, in order.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix m) { return row_reduce(m).size(); }

/// Restriction of m to the given columns.
inline RationalMatrix select_columns(const RationalMatrix& m, const std::vector<std::size_t>& cols) {
  RationalMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) {
    RationalVector r;
    r.reserve(cols.size());
    for (auto c : cols) r.push_back(row[c]);
    out.push_back(std::move(r));
  }
  return out;
}

/// Basis of {x : m x = 0}; `cols` is the number of unknowns (needed when m
/// has no rows).
inline std::vector<RationalVector> null_space(RationalMatrix m, std::size_t cols) {
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline RationalVector multiply(const RationalMatrix& m, const RationalVector& x) {
  RationalVector out(m.size(), Rational(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (m[i][j] != 0) out[i] += m[i][j] * x[j];
  return out;
}

/// Scales a nonnegative rational vector to the primitive integral vector on
/// the same ray. The zero vector is returned unchanged.
inline std::vector<Integer> primitive_integral(const RationalVector& v) {
  Integer l = 1;
  for (const auto& q : v)
    if (q != 0) l = boost::multiprecision::lcm(l, Integer(denominator(q)));
  std::vector<Integer> out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& q : v) {
    Integer n = Integer(numerator(q)) * (l / Integer(denominator(q)));
    g = gcd(g, abs(n));
    out.push_back(std::move(n));
  }
  if (g > 1)
    for (auto& n : out) n /= g;
  return out;
}

}  // namespace lamkit
