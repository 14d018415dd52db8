#pragma once

// Independent reference computations used to check the library.
// Everything here is brute force and deliberately shares no code with
// the double-description or simplex implementations.

#include "pdcox/matrix.hpp"

#include <functional>
#include <optional>
#include <set>

namespace pdcox::oracle {

/** Calls fn on every k-subset of {0..n-1}, in lexicographic order. */
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/** Unique solution of a square system by Cramer's rule, or nullopt. */
inline std::optional<QVector> cramer(const QMatrix& a, const QVector& b) {
  Rational det = determinant(a);
  if (det == 0) return std::nullopt;
  QVector x(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    QMatrix aj = a;
    for (std::size_t i = 0; i < a.rows(); ++i) aj(i, j) = b[i];
    x[j] = determinant(aj) / det;
  }
  return x;
}

/**
 * Vertices of {x in Q^d : <n_k, x> >= b_k} by enumerating all d-subsets of
 * constraints. Only meaningful for polyhedra without lineality.
 */
inline std::set<QVector> vertices(std::size_t d, const std::vector<std::pair<QVector, Rational>>& ineqs) {
  std::set<QVector> out;
  for_each_subset(ineqs.size(), d, [&](const std::vector<std::size_t>& s) {
    QMatrix a(d, d);
    QVector b(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a(i, j) = ineqs[s[i]].first[j];
      b[i] = ineqs[s[i]].second;
    }
    auto x = cramer(a, b);
    if (!x) return;
    for (const auto& [n, c] : ineqs) {
      Rational v = 0;
      for (std::size_t j = 0; j < d; ++j) v += n[j] * (*x)[j];
      if (v < c) return;
    }
    out.insert(*x);
  });
  return out;
}

/**
 * min c.x over {x >= 0, A x = b} by enumerating basic feasible solutions.
 * Returns nullopt if infeasible; assumes the minimum is attained.
 */
inline std::optional<Rational> lp_min(const QVector& c, const QMatrix& a, const QVector& b) {
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = rank(a);
  // keep a maximal independent set of rows
  std::vector<std::size_t> rows;
  {
    std::vector<QVector> kept;
    for (std::size_t i = 0; i < m; ++i) {
      kept.push_back(a.row(i));
      if (rank_of_vectors(kept, n) == kept.size())
        rows.push_back(i);
      else
        kept.pop_back();
    }
  }
  std::optional<Rational> best;
  if (r == 0) {
    for (const auto& x : b)
      if (x != 0) return std::nullopt;
    return Rational(0);
  }
  for_each_subset(n, r, [&](const std::vector<std::size_t>& cols) {
    QMatrix sq(r, r);
    QVector rhs(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) sq(i, j) = a(rows[i], cols[j]);
      rhs[i] = b[rows[i]];
    }
    auto xb = cramer(sq, rhs);
    if (!xb) return;
    QVector x(n, Rational(0));
    for (std::size_t j = 0; j < r; ++j) {
      if ((*xb)[j] < 0) return;
      x[cols[j]] = (*xb)[j];
    }
    if (a * x != b) return;
    Rational v = 0;
    for (std::size_t j = 0; j < n; ++j) v += c[j] * x[j];
    if (!best || v < *best) best = v;
  });
  return best;
}

/**
 * Hilbert basis of the full-dimensional pointed cone generated by `rays`:
 * facet normals from cofactors of (d-1)-subsets, then every lattice point of
 * the box around the zonotope, then removal of decomposable points.
 */
inline std::set<ZVector> hilbert_basis(const std::vector<ZVector>& rays, std::size_t d) {
  std::vector<QVector> normals;
  for_each_subset(rays.size(), d - 1, [&](const std::vector<std::size_t>& s) {
    QVector n(d);
    for (std::size_t j = 0; j < d; ++j) {
      QMatrix m(d - 1, d - 1);
      for (std::size_t i = 0; i < d - 1; ++i)
        for (std::size_t c = 0, cc = 0; c < d; ++c)
          if (c != j) m(i, cc++) = rays[s[i]][c];
      n[j] = (j % 2 ? -1 : 1) * determinant(m);
    }
    bool pos = true, neg = true, nonzero = false;
    for (const auto& r : rays) {
      Rational v = 0;
      for (std::size_t c = 0; c < d; ++c) v += n[c] * r[c];
      pos = pos && v >= 0;
      neg = neg && v <= 0;
      nonzero = nonzero || v != 0;
    }
    if (!nonzero) return;
    if (neg && !pos)
      for (auto& x : n) x = -x;
    if (pos || neg) normals.push_back(n);
  });
  auto inside = [&](const ZVector& x) {
    for (const auto& n : normals) {
      Rational v = 0;
      for (std::size_t c = 0; c < d; ++c) v += n[c] * x[c];
      if (v < 0) return false;
    }
    return true;
  };
  ZVector lo(d, Integer(0)), hi(d, Integer(0));
  for (const auto& r : rays)
    for (std::size_t k = 0; k < d; ++k) (r[k] < 0 ? lo[k] : hi[k]) += r[k];
  std::vector<ZVector> pts;
  ZVector x = lo;
  for (;;) {
    bool zero = true;
    for (const auto& v : x) zero = zero && v == 0;
    if (!zero && inside(x)) pts.push_back(x);
    std::size_t k = 0;
    while (k < d && x[k] == hi[k]) x[k] = lo[k], ++k;
    if (k == d) break;
    ++x[k];
  }
  std::set<ZVector> out;
  for (const auto& p : pts) {
    bool reducible = false;
    for (const auto& q : pts) {
      if (q == p) continue;
      ZVector diff(d);
      for (std::size_t c = 0; c < d; ++c) diff[c] = p[c] - q[c];
      if (inside(diff)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) out.insert(p);
  }
  return out;
}

}  // namespace pdcox::oracle
