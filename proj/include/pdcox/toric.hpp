#pragma once

#include "pdcox/fan.hpp"
#include "pdcox/lattice.hpp"
#include "pdcox/polyhedron.hpp"

#include <memory>

namespace pdcox {

/**
 * The two dual exact sequences of a toric variety with n rays, lattice rank d
 * and class group rank r:
 *   0 -> Cl* --i--> Z^n --pi--> N -> 0,     0 -> M --div--> Z^n --deg--> Cl -> 0.
 * s is a section of pi and t the matching cosection.
 */
struct ExactSequenceData {
  IntMatrix i;    // n x r
  IntMatrix pi;   // d x n
  IntMatrix s;    // n x d
  IntMatrix t;    // r x n
  IntMatrix deg;  // r x n
  IntMatrix div;  // n x d

  bool identities_hold() const {
    const std::size_t n = pi.cols(), d = pi.rows(), r = deg.rows();
    return i * t + s * pi == IntMatrix::identity(n) && t * i == IntMatrix::identity(r) &&
           pi * s == IntMatrix::identity(d) && pi * i == IntMatrix(d, r) && deg * div == IntMatrix(r, d) &&
           is_surjective(LatticeMap(deg));
  }
};

/** Strongly typed divisor class in Cl(Z)_Q, in the chosen class basis. */
struct DivisorClass {
  QVector coords;
  bool operator==(const DivisorClass&) const = default;
};

/** Complete-or-not simplicial toric variety with free class group. */
class ToricVariety {
 public:
  struct Options {
    std::optional<std::vector<std::size_t>> class_basis;  // ray indices
    std::optional<IntMatrix> section;                      // n x d, section of pi
  };

  static ToricVariety build(const Fan& fan, const Options& opt = {}) {
    if (!is_simplicial(fan)) throw Error(ErrorKind::NotSimplicial, "fan is not simplicial");
    const std::size_t n = fan.n_rays(), d = fan.lattice_rank;
    std::vector<QVector> rq;
    for (const auto& r : fan.rays) rq.push_back(to_q(r));
    if (rank_of_vectors(rq, d) != d) throw Error(ErrorKind::RaysDoNotSpan, "rays do not span the lattice");
    ToricVariety z;
    z.fan_ = fan;
    auto& e = z.seq_;
    e.div = IntMatrix::from_rows(fan.rays, d);
    e.pi = e.div.transpose();
    SmithForm snf = smith_normal_form(e.div);
    for (const auto& x : snf.diagonal())
      if (x != 1) throw Error(ErrorKind::TorsionClassGroup, "class group has torsion (rays generate a proper sublattice)");
    const std::size_t r = n - d;
    e.deg = snf.U.row_block(d, n);

    if (opt.class_basis) {
      const auto& b = *opt.class_basis;
      if (b.size() != r) throw Error(ErrorKind::NotBasis, "class basis has wrong size");
      for (auto k : b)
        if (k >= n) throw Error(ErrorKind::NotBasis, "class basis index out of range");
      IntMatrix m = e.deg.select_cols(b);
      if (!is_unimodular(m)) throw Error(ErrorKind::NotBasis, "class basis rays do not form a Z-basis of Cl");
      e.deg = to_z(*inverse(to_q(m)) * to_q(e.deg));
      z.class_basis_ = b;
    } else if (auto b = first_unimodular_subset(e.deg)) {
      IntMatrix m = e.deg.select_cols(*b);
      e.deg = to_z(*inverse(to_q(m)) * to_q(e.deg));
      z.class_basis_ = *b;
    }
    e.i = e.deg.transpose();

    if (opt.section) {
      if (opt.section->rows() != n || opt.section->cols() != d || e.pi * *opt.section != IntMatrix::identity(d))
        throw Error(ErrorKind::SectionInvalid, "given matrix is not a section of pi");
      e.s = *opt.section;
    } else {
      e.s = section_of_surjection(LatticeMap(e.pi)).matrix;
    }
    e.t = cosection(LatticeMap(e.i), LatticeMap(e.s)).matrix;

    if (!z.class_basis_.empty()) {
      z.lift_ = IntMatrix(n, r);
      for (std::size_t k = 0; k < r; ++k) z.lift_(z.class_basis_[k], k) = 1;
    } else {
      z.lift_ = section_of_surjection(LatticeMap(e.deg)).matrix;
    }
    z.complete_ = pdcox::is_complete(fan);
    return z;
  }

  const Fan& fan() const { return fan_; }
  std::size_t dim() const { return fan_.lattice_rank; }
  std::size_t n_rays() const { return fan_.n_rays(); }
  std::size_t class_rank() const { return seq_.deg.rows(); }
  const ExactSequenceData& seq() const { return seq_; }
  bool is_complete() const { return complete_; }
  /** Ray indices whose classes form the coordinate basis of Cl (empty if the SNF basis is used). */
  const std::vector<std::size_t>& class_basis() const { return class_basis_; }
  /** Integral n x r matrix L with deg * L = id. */
  const IntMatrix& class_lift() const { return lift_; }

  QVector ray_class(std::size_t p) const { return to_q(seq_.deg.col(p)); }
  QVector class_of(const QVector& divisor) const { return seq_.deg * divisor; }
  QVector lift(const QVector& u) const { return lift_ * u; }

  /** Class of sum_P c_P D_P with coefficients given by ray label. */
  QVector class_of_labels(const std::vector<std::pair<std::string, Rational>>& terms) const {
    QVector d(n_rays(), Rational(0));
    for (const auto& [l, c] : terms) d[fan_.ray_index(l)] += c;
    return class_of(d);
  }

 private:
  static std::optional<std::vector<std::size_t>> first_unimodular_subset(const IntMatrix& deg) {
    const std::size_t r = deg.rows(), n = deg.cols();
    if (r == 0 || r > n) return std::nullopt;
    std::vector<std::size_t> idx(r);
    for (std::size_t k = 0; k < r; ++k) idx[k] = k;
    for (;;) {
      if (is_unimodular(deg.select_cols(idx))) return idx;
      std::size_t k = r;
      while (k > 0 && idx[k - 1] == n - r + k - 1) --k;
      if (k == 0) return std::nullopt;
      ++idx[k - 1];
      for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  Fan fan_;
  ExactSequenceData seq_;
  std::vector<std::size_t> class_basis_;
  IntMatrix lift_;
  bool complete_ = false;
};

inline ToricVariety build_toric(const Fan& fan, const ToricVariety::Options& opt = {}) {
  return ToricVariety::build(fan, opt);
}

inline void require_complete(const ToricVariety& z) {
  if (!z.is_complete()) throw Error(ErrorKind::NotComplete, "toric variety is not complete");
}

/** Eff(Z) = cone generated by the ray classes. */
inline RationalCone effective_cone(const ToricVariety& z) {
  require_complete(z);
  std::vector<QVector> g;
  for (std::size_t p = 0; p < z.n_rays(); ++p) g.push_back(z.ray_class(p));
  return RationalCone::from_generators(z.class_rank(), g);
}

/** Classes in Cl(Z)* of the invariant curves V(tau), one per wall, up to positive scaling. */
inline std::vector<QVector> mori_generators(const ToricVariety& z) {
  require_complete(z);
  std::vector<QVector> out;
  for (const auto& w : walls(z.fan())) out.push_back(to_q(z.seq().t) * w.relation);
  return out;
}

/** Nef(Z) as the dual of the cone of invariant curves. */
inline RationalCone nef_cone(const ToricVariety& z) {
  auto gens = mori_generators(z);
  return RationalCone::from_inequalities(z.class_rank(), gens);
}

namespace detail {

/** Per wall: <m_sigma, a_q> + d_q, where m_sigma is the local linear piece of the support function. */
inline std::vector<Rational> wall_convexity_gaps(const ToricVariety& z, const QVector& u) {
  require_complete(z);
  if (u.size() != z.class_rank()) throw Error(ErrorKind::DimensionMismatch, "class has wrong length");
  const Fan& f = z.fan();
  QVector dvec = z.lift(u);
  std::vector<Rational> gaps;
  for (const auto& w : walls(f)) {
    const auto& sig = f.cones[w.sigma];
    QMatrix a(sig.size(), f.lattice_rank);
    QVector rhs(sig.size());
    for (std::size_t j = 0; j < sig.size(); ++j) {
      for (std::size_t c = 0; c < f.lattice_rank; ++c) a(j, c) = f.rays[sig[j]][c];
      rhs[j] = -dvec[sig[j]];
    }
    auto m = solve(a, rhs);
    gaps.push_back(dot(*m, f.rays[w.q]) + dvec[w.q]);
  }
  return gaps;
}

}  // namespace detail

/** Nef iff the support function of a representative is convex across every wall. */
inline bool is_nef(const ToricVariety& z, const QVector& u) {
  for (const auto& g : detail::wall_convexity_gaps(z, u))
    if (g < 0) return false;
  return true;
}

inline bool is_ample(const ToricVariety& z, const QVector& u) {
  for (const auto& g : detail::wall_convexity_gaps(z, u))
    if (g <= 0) return false;
  return true;
}

/** On a complete toric variety semiample and nef agree. */
inline bool is_semiample(const ToricVariety& z, const QVector& u) { return is_nef(z, u); }

/** Polytope P_u = {m in M_Q : <m, a_P> >= -d_P} for a representative d of u. */
inline TailedPolyhedron section_polytope(const ToricVariety& z, const QVector& u) {
  QVector dvec = z.lift(u);
  std::vector<std::pair<QVector, Rational>> ineq;
  for (std::size_t p = 0; p < z.n_rays(); ++p) ineq.push_back({to_q(z.fan().rays[p]), -dvec[p]});
  return TailedPolyhedron::from_inequalities(z.dim(), ineq);
}

/** Big iff P_u is full-dimensional. */
inline bool is_big(const ToricVariety& z, const QVector& u) {
  require_complete(z);
  if (u.size() != z.class_rank()) throw Error(ErrorKind::DimensionMismatch, "class has wrong length");
  return section_polytope(z, u).dimension() == static_cast<long>(z.dim());
}

/** Signature (positive, negative, zero) of a symmetric rational matrix by congruence diagonalisation. */
struct Signature {
  std::size_t positive = 0, negative = 0, zero = 0;
};

inline Signature signature(QMatrix a) {
  const std::size_t n = a.rows();
  Signature s;
  std::size_t k = 0;
  while (k < n) {
    std::size_t p = k;
    while (p < n && a(p, p) == 0) ++p;
    if (p == n) {
      // all remaining diagonal entries zero: use an off-diagonal entry a(k, j) != 0
      std::size_t i = n, j = n;
      for (std::size_t x = k; x < n && i == n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
          if (a(x, y) != 0) {
            i = x;
            j = y;
            break;
          }
      if (i == n) {
        s.zero += n - k;
        break;
      }
      // replace row/col i by row/col i + j: new diagonal 2 a(i, j) != 0
      a.add_row(i, j, Rational(1));
      a.add_col(i, j, Rational(1));
      p = i;
    }
    a.swap_rows(k, p);
    a.swap_cols(k, p);
    const Rational piv = a(k, k);
    (piv > 0 ? s.positive : s.negative)++;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / piv;
      a.add_row(i, k, Rational(-f));
      a.add_col(i, k, Rational(-f));
    }
    ++k;
  }
  return s;
}

/**
 * Intersection data of a complete simplicial toric surface:
 * ray_form(P, Q) = D_P . D_Q and class_form = L^T * ray_form * L in the class basis.
 */
struct SurfaceForm {
  QMatrix ray_form;
  QMatrix class_form;
};

inline void require_surface(const ToricVariety& s) {
  if (s.dim() != 2) throw Error(ErrorKind::NotSurface, "not a surface");
  if (!s.is_complete()) throw Error(ErrorKind::NotSurface, "surface is not complete");
}

inline SurfaceForm surface_form(const ToricVariety& s) {
  require_surface(s);
  const Fan& f = s.fan();
  const std::size_t n = f.n_rays();
  QMatrix form(n, n);
  for (const auto& c : f.cones) {
    const auto& a = f.rays[c[0]];
    const auto& b = f.rays[c[1]];
    Integer det = abs_int(a[0] * b[1] - a[1] * b[0]);
    form(c[0], c[1]) = form(c[1], c[0]) = Rational(1) / Rational(det);
  }
  for (std::size_t i = 0; i < n; ++i) {
    // div(m) with <m, a_i> = 1 is principal, so D_i . div(m) = 0
    const auto& a = f.rays[i];
    Integer nn = a[0] * a[0] + a[1] * a[1];
    Rational self = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || form(i, j) == 0) continue;
      Rational mj = Rational(a[0] * f.rays[j][0] + a[1] * f.rays[j][1]) / Rational(nn);
      self -= mj * form(i, j);
    }
    form(i, i) = self;
  }
  QMatrix l = to_q(s.class_lift());
  return {form, l.transpose() * form * l};
}

/** u . v for classes u, v. */
inline Rational intersect_classes(const SurfaceForm& sf, const QVector& u, const QVector& v) {
  return dot(u, sf.class_form * v);
}

/** Gram matrix of the classes of the given rays; they must form a Q-basis of Cl. */
inline QMatrix surface_intersection_matrix(const ToricVariety& s, const std::vector<std::size_t>& basis) {
  require_surface(s);
  if (basis.size() != s.class_rank()) throw Error(ErrorKind::NotBasis, "basis has wrong size");
  std::vector<QVector> cls;
  for (auto k : basis) {
    if (k >= s.n_rays()) throw Error(ErrorKind::NotBasis, "basis index out of range");
    cls.push_back(s.ray_class(k));
  }
  if (rank_of_vectors(cls, s.class_rank()) != basis.size())
    throw Error(ErrorKind::NotBasis, "classes are linearly dependent");
  auto sf = surface_form(s);
  QMatrix g(basis.size(), basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) g(a, b) = sf.ray_form(basis[a], basis[b]);
  return g;
}

/** Rays whose invariant curve has negative self-intersection. */
inline std::vector<std::size_t> exceptional_rays(const ToricVariety& s) {
  auto sf = surface_form(s);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.n_rays(); ++i)
    if (sf.ray_form(i, i) < 0) out.push_back(i);
  return out;
}

}  // namespace pdcox
