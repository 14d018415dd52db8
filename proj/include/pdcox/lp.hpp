#pragma once

#include "pdcox/matrix.hpp"

namespace pdcox {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rational value = 0;
  QVector x;
};

namespace detail {

struct Tableau {
  QMatrix t;  // rows: constraints, last column: rhs
  std::vector<std::size_t> basis;
  std::vector<bool> live;  // rows not dropped as redundant
};

inline void pivot(Tableau& tb, std::size_t r, std::size_t c) {
  QMatrix& t = tb.t;
  Rational inv = 1 / t(r, c);
  for (std::size_t j = 0; j < t.cols(); ++j) t(r, j) *= inv;
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (i != r && t(i, c) != 0) t.add_row(i, r, Rational(-t(i, c)));
  tb.basis[r] = c;
}

/** Bland's rule: lowest-index entering column, lowest-index leaving basic variable. */
inline LpResult::Status run_simplex(Tableau& tb, const QVector& cost, std::size_t ncols) {
  QMatrix& t = tb.t;
  const std::size_t rhs = t.cols() - 1;
  for (;;) {
    std::size_t enter = ncols;
    for (std::size_t j = 0; j < ncols && enter == ncols; ++j) {
      bool basic = false;
      for (std::size_t i = 0; i < t.rows(); ++i)
        if (tb.live[i] && tb.basis[i] == j) basic = true;
      if (basic) continue;
      Rational r = cost[j];
      for (std::size_t i = 0; i < t.rows(); ++i)
        if (tb.live[i]) r -= cost[tb.basis[i]] * t(i, j);
      if (r < 0) enter = j;
    }
    if (enter == ncols) return LpResult::Status::Optimal;
    std::size_t leave = t.rows();
    Rational best = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (!tb.live[i] || t(i, enter) <= 0) continue;
      Rational ratio = t(i, rhs) / t(i, enter);
      if (leave == t.rows() || ratio < best || (ratio == best && tb.basis[i] < tb.basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == t.rows()) return LpResult::Status::Unbounded;
    pivot(tb, leave, enter);
  }
}

}  // namespace detail

/** min c.x subject to A x = b, x >= 0, exactly (two-phase simplex). */
inline LpResult lp_minimize(const QVector& c, const QMatrix& a, const QVector& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (c.size() != n || b.size() != m) throw Error(ErrorKind::DimensionMismatch, "lp_minimize: shapes");
  detail::Tableau tb;
  tb.t = QMatrix(m, n + m + 1);
  tb.basis.resize(m);
  tb.live.assign(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    Rational sign = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) tb.t(i, j) = sign * a(i, j);
    tb.t(i, n + i) = 1;
    tb.t(i, n + m) = sign * b[i];
    tb.basis[i] = n + i;
  }
  QVector phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  detail::run_simplex(tb, phase1, n + m);
  Rational infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] >= n) infeas += tb.t(i, n + m);
  LpResult res;
  if (infeas != 0) {
    res.status = LpResult::Status::Infeasible;
    return res;
  }
  // drive remaining (zero-valued) artificials out of the basis
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    std::size_t j = 0;
    while (j < n && tb.t(i, j) == 0) ++j;
    if (j < n)
      detail::pivot(tb, i, j);
    else
      tb.live[i] = false;
  }
  QVector cost(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  res.status = detail::run_simplex(tb, cost, n);
  if (res.status != LpResult::Status::Optimal) return res;
  res.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (tb.live[i]) res.x[tb.basis[i]] = tb.t(i, n + m);
  res.value = dot(c, res.x);
  return res;
}

}  // namespace pdcox
