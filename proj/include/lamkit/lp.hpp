#pragma once

// Exact two-phase primal simplex over the rationals with Bland's rule.
//
//   maximize    c.x
//   subject to  A_eq x  = b_eq
//               A_le x <= b_le
//               x >= 0
//
// Dense tableau; meant for the small feasibility problems that arise from
// switch conditions and trigon inequalities.

#include "lamkit/linalg.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lamkit {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearProgram {
  std::size_t variables = 0;
  RationalVector objective;  // size == variables
  RationalMatrix eq_lhs;
  RationalVector eq_rhs;
  RationalMatrix le_lhs;
  RationalVector le_rhs;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RationalVector x;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows + 1, RationalVector(cols + 1, Rational(0))),
        basis_(rows, 0) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r][cols_]; }
  Rational& cost(std::size_t c) { return a_[rows_][c]; }
  Rational& cost_rhs() { return a_[rows_][cols_]; }
  std::size_t& basic(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / a_[r][c];
    for (auto& v : a_[r])
      if (v != 0) v *= inv;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      Rational f = a_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  /// Runs Bland-rule iterations on the cost row restricted to columns for
  /// which `allowed(c)` holds. The cost row stores reduced costs of a
  /// maximization: a negative entry improves. Returns false if unbounded.
  template <class Allowed>
  bool optimize(Allowed allowed) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (allowed(c) && a_[rows_][c] < 0) {
          enter = c;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (a_[r][*enter] <= 0) continue;
        Rational ratio = a_[r][cols_] / a_[r][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  RationalMatrix a_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpResult solve(const LinearProgram& lp) {
  const std::size_t n = lp.variables;
  const std::size_t m_eq = lp.eq_lhs.size();
  const std::size_t m_le = lp.le_lhs.size();
  const std::size_t m = m_eq + m_le;
  if (lp.objective.size() != n || lp.eq_rhs.size() != m_eq || lp.le_rhs.size() != m_le)
    throw std::invalid_argument("linear program dimensions disagree");

  // Columns: [x (n) | slacks (m_le) | artificials (m)].
  const std::size_t slack0 = n;
  const std::size_t art0 = n + m_le;
  detail::Tableau t(m, art0 + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_eq = i < m_eq;
    const auto& row = is_eq ? lp.eq_lhs[i] : lp.le_lhs[i - m_eq];
    Rational b = is_eq ? lp.eq_rhs[i] : lp.le_rhs[i - m_eq];
    if (row.size() != n) throw std::invalid_argument("constraint row has wrong width");
    const int s = b < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = s * row[j];
    if (!is_eq) t.at(i, slack0 + (i - m_eq)) = s;
    t.at(i, art0 + i) = 1;
    t.rhs(i) = s * b;
    t.basic(i) = art0 + i;
  }

  // Phase one: maximize -sum(artificials).
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < art0; ++j) t.cost(j) -= t.at(i, j);
    t.cost_rhs() -= t.rhs(i);
  }
  t.optimize([](std::size_t) { return true; });
  LpResult result;
  if (t.cost_rhs() != 0) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive artificials out of the basis; rows that cannot be cleared are
  // redundant.
  for (std::size_t r = 0; r < t.rows();) {
    if (t.basic(r) < art0) {
      ++r;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t c = 0; c < art0; ++c) {
      if (t.at(r, c) != 0) {
        col = c;
        break;
      }
    }
    if (col) {
      t.pivot(r, *col);
      ++r;
    } else {
      t.drop_row(r);
    }
  }

  // Phase two cost row from the true objective.
  for (std::size_t c = 0; c <= t.cols(); ++c) t.cost(c) = 0;
  for (std::size_t j = 0; j < n; ++j) t.cost(j) = -lp.objective[j];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const std::size_t b = t.basic(r);
    if (t.cost(b) == 0) continue;
    Rational f = t.cost(b);
    for (std::size_t c = 0; c <= t.cols(); ++c)
      if (t.at(r, c) != 0) t.cost(c) -= f * t.at(r, c);
  }
  if (!t.optimize([art0](std::size_t c) { return c < art0; })) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (t.basic(r) < n) result.x[t.basic(r)] = t.rhs(r);
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace lamkit
