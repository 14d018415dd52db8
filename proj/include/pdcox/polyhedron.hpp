#pragma once

#include "pdcox/cone.hpp"

namespace pdcox {

/** Affine halfspace <x, normal> >= bound (or = bound for equations). */
struct Halfspace {
  ZVector normal;
  Rational bound;
  bool operator==(const Halfspace&) const = default;
  bool operator<(const Halfspace& o) const {
    if (normal != o.normal) return normal < o.normal;
    return bound < o.bound;
  }
};

/**
 * Polyhedron Delta = conv(vertices) + tail + lineality in Q^d, kept as its
 * homogenization C(Delta) = closure of Q>=0 * (Delta x {1}) in Q^{d+1}.
 * Rays of C(Delta) with last coordinate > 0 are vertices, the others are tail rays.
 */
class TailedPolyhedron {
 public:
  TailedPolyhedron() = default;

  static TailedPolyhedron empty(std::size_t dim) {
    TailedPolyhedron p;
    p.dim_ = dim;
    p.empty_ = true;
    p.hom_ = RationalCone::origin(dim + 1);
    return p;
  }

  static TailedPolyhedron from_generators(std::size_t dim, const std::vector<QVector>& vertices,
                                          const std::vector<QVector>& tail_rays = {},
                                          const std::vector<QVector>& lineality = {}) {
    if (vertices.empty()) {
      if (!tail_rays.empty() || !lineality.empty())
        throw Error(ErrorKind::InvalidInput, "polyhedron with tail but no vertex");
      return empty(dim);
    }
    std::vector<QVector> g, l;
    for (const auto& v : vertices) g.push_back(lift(v, 1, dim));
    for (const auto& t : tail_rays) g.push_back(lift(t, 0, dim));
    for (const auto& x : lineality) l.push_back(lift(x, 0, dim));
    TailedPolyhedron p;
    p.dim_ = dim;
    p.hom_ = RationalCone::from_generators(dim + 1, g, l);
    return p;
  }

  /** {x : <x, n> >= b for (n, b) in ineqs, <x, n> = b for (n, b) in eqs}. */
  static TailedPolyhedron from_inequalities(std::size_t dim, const std::vector<std::pair<QVector, Rational>>& ineqs,
                                            const std::vector<std::pair<QVector, Rational>>& eqs = {}) {
    std::vector<QVector> hi, he;
    for (const auto& [n, b] : ineqs) hi.push_back(lift(n, -b, dim));
    hi.push_back(unit_q(dim + 1, dim));
    for (const auto& [n, b] : eqs) he.push_back(lift(n, -b, dim));
    return from_homogenized(dim, RationalCone::from_inequalities(dim + 1, hi, he));
  }

  /** Wraps a cone C in Q^{d+1} contained in {h >= 0}. */
  static TailedPolyhedron from_homogenized(std::size_t dim, const RationalCone& hom) {
    TailedPolyhedron p;
    p.dim_ = dim;
    p.hom_ = hom;
    bool has_vertex = false;
    for (const auto& r : hom.rays())
      if (r[dim] > 0) has_vertex = true;
    if (!has_vertex) return empty(dim);
    return p;
  }

  static TailedPolyhedron from_cone(const RationalCone& sigma) {
    return from_generators(sigma.ambient_dim(), {zero_q(sigma.ambient_dim())}, sigma.ray_list_q(),
                           sigma.lineality_list_q());
  }

  std::size_t ambient_dim() const { return dim_; }
  bool is_empty() const { return empty_; }
  const RationalCone& homogenized() const { return hom_; }

  std::vector<QVector> vertices() const {
    std::vector<QVector> v;
    for (const auto& r : hom_.rays())
      if (r[dim_] > 0) v.push_back(drop(r, Rational(r[dim_])));
    std::sort(v.begin(), v.end());
    return v;
  }
  std::vector<QVector> tail_rays() const {
    std::vector<QVector> v;
    for (const auto& r : hom_.rays())
      if (r[dim_] == 0) v.push_back(drop(r, Rational(1)));
    return v;
  }
  std::vector<QVector> lineality() const {
    std::vector<QVector> v;
    if (empty_) return v;
    for (const auto& r : hom_.lineality()) v.push_back(drop(r, Rational(1)));
    return v;
  }
  bool is_bounded() const { return !empty_ && tail_rays().empty() && lineality().empty(); }

  /** tail(Delta) as a cone in Q^d; empty polyhedron has tail {0} by convention. */
  RationalCone tail() const {
    if (empty_) return RationalCone::origin(dim_);
    return RationalCone::from_generators(dim_, tail_rays(), lineality());
  }

  /** Irredundant facet inequalities <x, n> >= b, n primitive. */
  std::vector<Halfspace> halfspaces() const {
    std::vector<Halfspace> out;
    if (empty_) return out;
    for (std::size_t f = 0; f < hom_.facets().size(); ++f) {
      if (is_far_facet(f)) continue;
      out.push_back(to_halfspace(hom_.facets()[f]));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<Halfspace> equations() const {
    std::vector<Halfspace> out;
    if (empty_) return out;
    for (const auto& e : hom_.equations()) out.push_back(to_halfspace(e));
    return out;
  }

  /** Affine dimension; -1 for the empty polyhedron. */
  long dimension() const {
    if (empty_) return -1;
    return static_cast<long>(hom_.dim()) - 1;
  }

  bool contains(const QVector& x) const {
    if (empty_) return false;
    return hom_.contains(lift(x, 1, dim_));
  }

  bool contains_origin() const { return contains(zero_q(dim_)); }

  bool operator==(const TailedPolyhedron& o) const {
    return dim_ == o.dim_ && empty_ == o.empty_ && (empty_ || hom_ == o.hom_);
  }

  /** Index of a facet of C(Delta) that only meets the far face {h = 0}. */
  bool is_far_facet(std::size_t f) const {
    const auto& n = hom_.facets()[f];
    for (const auto& r : hom_.rays())
      if (r[dim_] > 0 && dot(n, r) == 0) return false;
    return true;
  }

  static QVector lift(const QVector& v, const Rational& h, std::size_t dim) {
    if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "polyhedron: vector length");
    QVector w(v);
    w.push_back(h);
    return w;
  }

 private:
  QVector drop(const ZVector& r, const Rational& h) const {
    QVector v(dim_);
    for (std::size_t k = 0; k < dim_; ++k) v[k] = Rational(r[k]) / h;
    return v;
  }
  Halfspace to_halfspace(const ZVector& nh) const {
    ZVector n(nh.begin(), nh.begin() + static_cast<long>(dim_));
    Integer g = 0;
    for (const auto& x : n) g = gcd_int(g, x);
    if (g == 0) return {n, Rational(-nh[dim_])};
    for (auto& x : n) x /= g;
    return {n, Rational(-nh[dim_], g)};
  }

  std::size_t dim_ = 0;
  bool empty_ = false;
  RationalCone hom_;
};

/** Polar dual {x : <v, x> >= -1 for v in Delta}; needs 0 in Delta. */
inline TailedPolyhedron dual_polyhedron(const TailedPolyhedron& p) {
  if (p.is_empty() || !p.contains_origin())
    throw Error(ErrorKind::OriginNotContained, "dual_polyhedron: origin not in polyhedron");
  return TailedPolyhedron::from_homogenized(p.ambient_dim(), p.homogenized().dual());
}

/** (head, tail): head = cone over Delta from the origin, tail = recession cone. */
inline std::pair<RationalCone, RationalCone> head_and_tail(const TailedPolyhedron& p) {
  if (p.is_empty()) throw Error(ErrorKind::EmptyPolyhedron, "head_and_tail of empty polyhedron");
  std::vector<QVector> g = p.vertices();
  for (const auto& t : p.tail_rays()) g.push_back(t);
  auto head = RationalCone::from_generators(p.ambient_dim(), g, p.lineality());
  return {head, p.tail()};
}

inline TailedPolyhedron minkowski_sum(const TailedPolyhedron& a, const TailedPolyhedron& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "minkowski_sum: ambient dims differ");
  if (a.is_empty() || b.is_empty()) return TailedPolyhedron::empty(a.ambient_dim());
  std::vector<QVector> v, t = a.tail_rays(), l = a.lineality();
  for (const auto& x : a.vertices())
    for (const auto& y : b.vertices()) v.push_back(x + y);
  for (const auto& x : b.tail_rays()) t.push_back(x);
  for (const auto& x : b.lineality()) l.push_back(x);
  return TailedPolyhedron::from_generators(a.ambient_dim(), v, t, l);
}

inline TailedPolyhedron translate(const TailedPolyhedron& p, const QVector& shift) {
  if (p.is_empty()) return p;
  std::vector<QVector> v;
  for (const auto& x : p.vertices()) v.push_back(x + shift);
  return TailedPolyhedron::from_generators(p.ambient_dim(), v, p.tail_rays(), p.lineality());
}

/** Image under the linear map x -> A x (A is target x source). */
inline TailedPolyhedron linear_image(const TailedPolyhedron& p, const QMatrix& a) {
  if (a.cols() != p.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "linear_image: shape");
  if (p.is_empty()) return TailedPolyhedron::empty(a.rows());
  std::vector<QVector> v, t, l;
  for (const auto& x : p.vertices()) v.push_back(a * x);
  for (const auto& x : p.tail_rays()) t.push_back(a * x);
  for (const auto& x : p.lineality()) l.push_back(a * x);
  return TailedPolyhedron::from_generators(a.rows(), v, t, l);
}

inline TailedPolyhedron intersect(const TailedPolyhedron& a, const TailedPolyhedron& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "intersect: ambient dims differ");
  if (a.is_empty() || b.is_empty()) return TailedPolyhedron::empty(a.ambient_dim());
  return TailedPolyhedron::from_homogenized(a.ambient_dim(), a.homogenized().intersect(b.homogenized()));
}

inline TailedPolyhedron convex_hull(const TailedPolyhedron& a, const TailedPolyhedron& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  std::vector<QVector> v = a.vertices(), t = a.tail_rays(), l = a.lineality();
  for (const auto& x : b.vertices()) v.push_back(x);
  for (const auto& x : b.tail_rays()) t.push_back(x);
  for (const auto& x : b.lineality()) l.push_back(x);
  return TailedPolyhedron::from_generators(a.ambient_dim(), v, t, l);
}

/** min over Delta of <., u>; -inf if unbounded below. Empty polyhedron is an error. */
inline Extended eval_min(const TailedPolyhedron& p, const QVector& u) {
  if (p.is_empty()) throw Error(ErrorKind::EmptyPolyhedron, "eval_min on empty polyhedron");
  for (const auto& l : p.lineality())
    if (dot(l, u) != 0) return Extended::neg_inf();
  for (const auto& t : p.tail_rays())
    if (dot(t, u) < 0) return Extended::neg_inf();
  auto vs = p.vertices();
  Rational m = dot(vs.front(), u);
  for (const auto& v : vs) m = std::min(m, dot(v, u));
  return Extended::finite(m);
}

/** sup{t >= 0 : t * v in Delta}; +inf when no facet bounds the ray. Needs 0 in Delta. */
inline Extended max_dilation(const TailedPolyhedron& p, const QVector& v) {
  if (p.is_empty() || !p.contains_origin())
    throw Error(ErrorKind::OriginNotContained, "max_dilation: origin not in polyhedron");
  for (const auto& e : p.equations())
    if (dot(e.normal, v) != 0) return Extended::finite(0);
  bool bounded = false;
  Rational best = 0;
  for (const auto& h : p.halfspaces()) {
    Rational nv = dot(h.normal, v);
    if (nv >= 0) continue;
    Rational t = h.bound / nv;
    if (!bounded || t < best) best = t;
    bounded = true;
  }
  return bounded ? Extended::finite(best) : Extended::pos_inf();
}

/** A face F of Delta with 0 not in F, and the corresponding face F' of the polar dual. */
struct FacePair {
  TailedPolyhedron face;
  TailedPolyhedron dual_face;
  long dim = 0;
  long dual_dim = 0;
};

/**
 * Faces of Delta avoiding the origin together with their dual faces,
 * for Delta containing 0 (dim F + dim F' = d - 1 for full-dimensional Delta).
 */
inline std::vector<FacePair> proper_faces_without_origin(const TailedPolyhedron& p) {
  if (p.is_empty() || !p.contains_origin())
    throw Error(ErrorKind::OriginNotContained, "faces: origin not in polyhedron");
  const std::size_t d = p.ambient_dim();
  const RationalCone& h = p.homogenized();
  const RationalCone hd = h.dual();
  auto make = [d](const RationalCone& c, const boost::dynamic_bitset<>& rs) {
    std::vector<QVector> v, t;
    for (std::size_t k = 0; k < c.rays().size(); ++k) {
      if (!rs.test(k)) continue;
      const auto& r = c.rays()[k];
      QVector x(d);
      Rational hh = r[d] > 0 ? Rational(r[d]) : Rational(1);
      for (std::size_t j = 0; j < d; ++j) x[j] = Rational(r[j]) / hh;
      (r[d] > 0 ? v : t).push_back(x);
    }
    std::vector<QVector> l;
    for (const auto& x : c.lineality()) l.push_back(QVector(x.begin(), x.begin() + static_cast<long>(d)));
    return TailedPolyhedron::from_generators(d, v, t, l);
  };
  std::vector<FacePair> out;
  for (const auto& f : h.faces()) {
    bool has_vertex = false;
    for (std::size_t k = 0; k < h.rays().size(); ++k)
      if (f.rays.test(k) && h.rays()[k][d] > 0) has_vertex = true;
    if (!has_vertex) continue;
    // 0 in F iff every facet through F passes through (0, 1)
    bool avoids_origin = false;
    for (std::size_t k = 0; k < h.facets().size(); ++k)
      if (f.facets.test(k) && h.facets()[k][d] != 0) avoids_origin = true;
    if (!avoids_origin) continue;
    // facets of C(Delta) are the rays of the dual cone, in the same order
    FacePair fp;
    fp.face = make(h, f.rays);
    fp.dual_face = make(hd, f.facets);
    fp.dim = fp.face.dimension();
    fp.dual_dim = fp.dual_face.dimension();
    out.push_back(std::move(fp));
  }
  return out;
}

}  // namespace pdcox
