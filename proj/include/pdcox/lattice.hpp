#pragma once

#include "pdcox/matrix.hpp"

namespace pdcox {

/** Z-linear map Z^source -> Z^target, stored as a target x source matrix. */
struct LatticeMap {
  IntMatrix matrix;

  LatticeMap() = default;
  explicit LatticeMap(IntMatrix m) : matrix(std::move(m)) {}

  std::size_t source_rank() const { return matrix.cols(); }
  std::size_t target_rank() const { return matrix.rows(); }
  ZVector operator()(const ZVector& v) const { return matrix * v; }
  QVector operator()(const QVector& v) const { return matrix * v; }
  bool operator==(const LatticeMap&) const = default;
};

inline LatticeMap compose(const LatticeMap& outer, const LatticeMap& inner) {
  return LatticeMap(outer.matrix * inner.matrix);
}

/** U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_k >= 0. */
struct SmithForm {
  IntMatrix U, D, V;
  std::size_t rank() const {
    std::size_t r = 0;
    for (std::size_t k = 0; k < std::min(D.rows(), D.cols()); ++k)
      if (D(k, k) != 0) ++r;
    return r;
  }
  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t k = 0; k < std::min(D.rows(), D.cols()); ++k) d.push_back(D(k, k));
    return d;
  }
};

/**
 * Deterministic Smith normal form.
 * Pivot: entry of least nonzero absolute value in the trailing block,
 * ties broken by lowest (row, column).
 */
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix D = a, U = IntMatrix::identity(m), V = IntMatrix::identity(n);
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      std::size_t pi = m, pj = n;
      Integer best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j) == 0) continue;
          Integer v = abs_int(D(i, j));
          if (pi == m || v < best) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) return {U, D, V};
      D.swap_rows(t, pi);
      U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Integer q = D(i, t) / D(t, t);
        D.add_row(i, t, Integer(-q));
        U.add_row(i, t, Integer(-q));
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Integer q = D(t, j) / D(t, t);
        D.add_col(j, t, Integer(-q));
        V.add_col(j, t, Integer(-q));
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility: fold an offending row into the pivot row and repeat
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.add_row(t, i, Integer(1));
            U.add_row(t, i, Integer(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (D(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < m; ++j) U(t, j) = -U(t, j);
    }
  }
  return {U, D, V};
}

/** Saturated basis of ker_Z(A), as columns of an n x (n - rank) matrix. */
inline IntMatrix kernel_basis(const IntMatrix& a) {
  SmithForm s = smith_normal_form(a);
  std::size_t r = s.rank();
  return s.V.col_block(r, a.cols());
}

struct Cokernel {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
  bool operator==(const Cokernel&) const = default;
};

inline Cokernel cokernel(const LatticeMap& f) {
  SmithForm s = smith_normal_form(f.matrix);
  Cokernel c;
  c.free_rank = f.target_rank() - s.rank();
  for (const auto& d : s.diagonal())
    if (d > 1) c.torsion.push_back(d);
  return c;
}

inline bool is_surjective(const LatticeMap& f) {
  SmithForm s = smith_normal_form(f.matrix);
  if (s.rank() != f.target_rank()) return false;
  for (const auto& d : s.diagonal())
    if (d != 1 && d != 0) return false;
  return true;
}

/** Integral right inverse s of a surjection pi: pi * s = id. Throws NotSurjective. */
inline LatticeMap section_of_surjection(const LatticeMap& pi) {
  const std::size_t m = pi.target_rank(), n = pi.source_rank();
  SmithForm s = smith_normal_form(pi.matrix);
  if (s.rank() != m) throw Error(ErrorKind::NotSurjective, "map is not surjective (rank deficit)");
  for (std::size_t k = 0; k < m; ++k)
    if (s.D(k, k) != 1) throw Error(ErrorKind::NotSurjective, "map is not surjective (cokernel torsion)");
  IntMatrix inc(n, m);
  for (std::size_t k = 0; k < m; ++k) inc(k, k) = 1;
  return LatticeMap(s.V * inc * s.U);
}

/**
 * For a split exact sequence 0 -> Z^r --i--> Z^n --pi--> Z^d -> 0 with section s,
 * the cosection t with t*i = id and i*t + s*pi = id: top r rows of [i | s]^{-1}.
 */
inline LatticeMap cosection(const LatticeMap& i, const LatticeMap& s) {
  const std::size_t n = i.target_rank();
  if (s.target_rank() != n || i.source_rank() + s.source_rank() != n)
    throw Error(ErrorKind::InconsistentSequence, "[i | s] is not square");
  QMatrix is(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < i.source_rank(); ++b) is(a, b) = i.matrix(a, b);
    for (std::size_t b = 0; b < s.source_rank(); ++b) is(a, i.source_rank() + b) = s.matrix(a, b);
  }
  auto inv = inverse(is);
  if (!inv) throw Error(ErrorKind::InconsistentSequence, "[i | s] is singular");
  QMatrix top = inv->row_block(0, i.source_rank());
  for (std::size_t a = 0; a < top.rows(); ++a)
    for (std::size_t b = 0; b < top.cols(); ++b)
      if (!is_integral(top(a, b)))
        throw Error(ErrorKind::InconsistentSequence, "[i | s] is not unimodular");
  return LatticeMap(to_z(top));
}

inline bool is_unimodular(const IntMatrix& a) {
  if (a.rows() != a.cols()) return false;
  Integer d = determinant(a);
  return d == 1 || d == -1;
}

}  // namespace pdcox
