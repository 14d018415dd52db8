#pragma once

#include "pdcox/lattice.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>
#include <set>

namespace pdcox {

namespace detail {

struct DDOutput {
  std::vector<QVector> rays;
  std::vector<QVector> lineality;
};

inline QVector normalized(const QVector& v) { return to_q(primitive(v)); }

/**
 * Double description for {x in Q^dim : <a, x> >= 0 (a in ineqs), <e, x> = 0 (e in eqs)}.
 * Starts from the whole space (lineality = standard basis) and adds one
 * halfspace at a time; adjacency is the combinatorial test on tight sets.
 */
inline DDOutput double_description(std::size_t dim, const std::vector<QVector>& ineqs,
                                   const std::vector<QVector>& eqs) {
  std::vector<QVector> cons;
  for (const auto& e : eqs) {
    cons.push_back(e);
    cons.push_back(-e);
  }
  cons.insert(cons.end(), ineqs.begin(), ineqs.end());
  for (const auto& c : cons)
    if (c.size() != dim) throw Error(ErrorKind::DimensionMismatch, "constraint length");

  struct Ray {
    QVector v;
    boost::dynamic_bitset<> zero;
  };
  std::vector<QVector> lin;
  for (std::size_t k = 0; k < dim; ++k) lin.push_back(unit_q(dim, k));
  std::vector<Ray> rays;

  for (std::size_t k = 0; k < cons.size(); ++k) {
    const QVector& a = cons[k];
    if (is_zero(a)) {
      for (auto& r : rays) r.zero.push_back(true);
      continue;
    }
    std::size_t l0 = lin.size();
    for (std::size_t j = 0; j < lin.size(); ++j)
      if (dot(a, lin[j]) != 0) {
        l0 = j;
        break;
      }
    if (l0 < lin.size()) {
      QVector lv = lin[l0];
      Rational al = dot(a, lv);
      if (al < 0) {
        lv = -lv;
        al = -al;
      }
      std::vector<QVector> nl;
      for (std::size_t j = 0; j < lin.size(); ++j) {
        if (j == l0) continue;
        Rational c = dot(a, lin[j]);
        QVector w = c == 0 ? lin[j] : lin[j] - scale(c / al, lv);
        nl.push_back(normalized(w));
      }
      for (auto& r : rays) {
        Rational c = dot(a, r.v);
        if (c != 0) r.v = normalized(r.v - scale(c / al, lv));
        r.zero.push_back(true);
      }
      Ray nr{normalized(lv), boost::dynamic_bitset<>(k + 1)};
      nr.zero.set();
      nr.zero.reset(k);
      rays.push_back(std::move(nr));
      lin = std::move(nl);
      continue;
    }

    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      val[j] = dot(a, rays[j].v);
      if (val[j] > 0) pos.push_back(j);
      if (val[j] < 0) neg.push_back(j);
    }
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (val[j] < 0) continue;
      Ray r = rays[j];
      r.zero.push_back(val[j] == 0);
      next.push_back(std::move(r));
    }
    for (auto p : pos)
      for (auto q : neg) {
        boost::dynamic_bitset<> common = rays[p].zero & rays[q].zero;
        bool adjacent = true;
        for (std::size_t j = 0; j < rays.size() && adjacent; ++j) {
          if (j == p || j == q) continue;
          if (common.is_subset_of(rays[j].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        QVector w = scale(Rational(-val[q]), rays[p].v) + scale(val[p], rays[q].v);
        Ray nr{normalized(w), common};
        nr.zero.push_back(true);
        next.push_back(std::move(nr));
      }
    rays = std::move(next);
  }
  DDOutput out;
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  out.lineality = std::move(lin);
  return out;
}

/** Canonical basis of span(vs): RREF rows scaled to primitive integers. */
struct Subspace {
  std::vector<ZVector> basis;
  std::vector<std::size_t> pivots;

  /** Representative of v modulo the subspace with zero pivot coordinates. */
  QVector reduce(QVector v) const {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Rational& c = v[pivots[k]];
      if (c == 0) continue;
      Rational f = c / basis[k][pivots[k]];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * basis[k][j];
    }
    return v;
  }
};

inline Subspace make_subspace(const std::vector<QVector>& vs, std::size_t dim) {
  Subspace s;
  if (vs.empty()) return s;
  auto [r, piv] = rref(QMatrix::from_rows(vs, dim));
  for (std::size_t k = 0; k < piv.size(); ++k) s.basis.push_back(primitive(r.row(k)));
  s.pivots = piv;
  return s;
}

inline std::vector<ZVector> canonical_rays(const std::vector<QVector>& rays, const Subspace& lin) {
  std::set<ZVector> out;
  for (const auto& r : rays) {
    QVector red = lin.reduce(r);
    if (is_zero(red)) continue;
    out.insert(primitive(red));
  }
  return {out.begin(), out.end()};
}

}  // namespace detail

/**
 * Rational polyhedral cone held in both representations:
 * extreme rays modulo lineality, lineality basis, facet normals modulo
 * the equation space, and equations. All lists are canonical, so
 * equal cones compare equal member-wise.
 */
class RationalCone {
 public:
  RationalCone() = default;

  static RationalCone from_generators(std::size_t dim, const std::vector<QVector>& rays,
                                      const std::vector<QVector>& lineality = {}) {
    std::vector<QVector> eqs = lineality;
    auto dual = detail::double_description(dim, rays, eqs);
    return from_dual_dd(dim, dual);
  }

  static RationalCone from_generators(std::size_t dim, const std::vector<ZVector>& rays,
                                      const std::vector<ZVector>& lineality = {}) {
    std::vector<QVector> r, l;
    for (const auto& v : rays) r.push_back(to_q(v));
    for (const auto& v : lineality) l.push_back(to_q(v));
    return from_generators(dim, r, l);
  }

  static RationalCone from_inequalities(std::size_t dim, const std::vector<QVector>& ineqs,
                                        const std::vector<QVector>& eqs = {}) {
    auto primal = detail::double_description(dim, ineqs, eqs);
    auto dual = detail::double_description(dim, primal.rays, primal.lineality);
    RationalCone c;
    c.dim_ = dim;
    auto lin = detail::make_subspace(primal.lineality, dim);
    auto eq = detail::make_subspace(dual.lineality, dim);
    c.rays_ = detail::canonical_rays(primal.rays, lin);
    c.lineality_ = lin.basis;
    c.facets_ = detail::canonical_rays(dual.rays, eq);
    c.equations_ = eq.basis;
    return c;
  }

  static RationalCone whole_space(std::size_t dim) { return from_inequalities(dim, {}); }
  static RationalCone origin(std::size_t dim) {
    std::vector<QVector> eqs;
    for (std::size_t k = 0; k < dim; ++k) eqs.push_back(unit_q(dim, k));
    return from_inequalities(dim, {}, eqs);
  }
  static RationalCone orthant(std::size_t dim) {
    std::vector<QVector> r;
    for (std::size_t k = 0; k < dim; ++k) r.push_back(unit_q(dim, k));
    return from_generators(dim, r);
  }

  std::size_t ambient_dim() const { return dim_; }
  std::size_t dim() const { return dim_ - equations_.size(); }
  const std::vector<ZVector>& rays() const { return rays_; }
  const std::vector<ZVector>& lineality() const { return lineality_; }
  const std::vector<ZVector>& facets() const { return facets_; }
  const std::vector<ZVector>& equations() const { return equations_; }
  bool is_pointed() const { return lineality_.empty(); }
  bool is_full_dimensional() const { return equations_.empty(); }
  /** Simplicial: pointed with linearly independent rays. */
  bool is_simplicial() const {
    if (!is_pointed()) return false;
    std::vector<QVector> r;
    for (const auto& v : rays_) r.push_back(to_q(v));
    return rank_of_vectors(r, dim_) == rays_.size();
  }

  bool contains(const QVector& x) const {
    if (x.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "cone membership: length");
    for (const auto& e : equations_)
      if (dot(x, e) != 0) return false;
    for (const auto& f : facets_)
      if (dot(x, f) < 0) return false;
    return true;
  }
  bool contains(const ZVector& x) const { return contains(to_q(x)); }

  /** x in the relative interior. */
  bool contains_relative_interior(const QVector& x) const {
    if (!contains(x)) return false;
    for (const auto& f : facets_)
      if (dot(x, f) <= 0) return false;
    return true;
  }

  bool contains(const RationalCone& o) const {
    for (const auto& r : o.rays_)
      if (!contains(r)) return false;
    for (const auto& l : o.lineality_)
      if (!contains(l) || !contains(ZVector(-l))) return false;
    return true;
  }

  RationalCone dual() const {
    RationalCone d;
    d.dim_ = dim_;
    d.rays_ = facets_;
    d.lineality_ = equations_;
    d.facets_ = rays_;
    d.equations_ = lineality_;
    return d;
  }

  RationalCone intersect(const RationalCone& o) const {
    if (o.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "cone intersection: ambient dims");
    std::vector<QVector> ineq, eq;
    for (const auto* c : {this, &o}) {
      for (const auto& f : c->facets_) ineq.push_back(to_q(f));
      for (const auto& e : c->equations_) eq.push_back(to_q(e));
    }
    return from_inequalities(dim_, ineq, eq);
  }

  /** Sum of rays: a relative-interior point when the cone is pointed. */
  QVector interior_point() const {
    QVector p = zero_q(dim_);
    for (const auto& r : rays_) p = p + to_q(r);
    return p;
  }

  std::vector<QVector> ray_list_q() const {
    std::vector<QVector> r;
    for (const auto& v : rays_) r.push_back(to_q(v));
    return r;
  }
  std::vector<QVector> lineality_list_q() const {
    std::vector<QVector> r;
    for (const auto& v : lineality_) r.push_back(to_q(v));
    return r;
  }

  /** One face: indices into rays() and facets(), and its dimension. */
  struct Face {
    boost::dynamic_bitset<> rays;
    boost::dynamic_bitset<> facets;
    std::size_t dim = 0;
  };

  boost::dynamic_bitset<> facets_tight_on(const boost::dynamic_bitset<>& ray_set) const {
    boost::dynamic_bitset<> t(facets_.size());
    t.set();
    for (std::size_t f = 0; f < facets_.size(); ++f)
      for (std::size_t r = 0; r < rays_.size(); ++r)
        if (ray_set.test(r) && dot(facets_[f], rays_[r]) != 0) {
          t.reset(f);
          break;
        }
    return t;
  }
  boost::dynamic_bitset<> rays_tight_on(const boost::dynamic_bitset<>& facet_set) const {
    boost::dynamic_bitset<> t(rays_.size());
    t.set();
    for (std::size_t r = 0; r < rays_.size(); ++r)
      for (std::size_t f = 0; f < facets_.size(); ++f)
        if (facet_set.test(f) && dot(facets_[f], rays_[r]) != 0) {
          t.reset(r);
          break;
        }
    return t;
  }

  /** All nonempty faces (including the cone and its minimal face). */
  std::vector<Face> faces() const {
    std::vector<Face> out;
    std::set<boost::dynamic_bitset<>> seen;
    std::vector<boost::dynamic_bitset<>> todo;
    boost::dynamic_bitset<> all(rays_.size());
    all.set();
    todo.push_back(all);
    seen.insert(all);
    while (!todo.empty()) {
      auto rs = todo.back();
      todo.pop_back();
      auto fs = facets_tight_on(rs);
      Face face{rs, fs, face_dim(rs)};
      out.push_back(face);
      for (std::size_t f = 0; f < facets_.size(); ++f) {
        if (fs.test(f)) continue;
        boost::dynamic_bitset<> single(facets_.size());
        single.set(f);
        auto sub = rs & rays_tight_on(single);
        auto closed = rays_tight_on(facets_tight_on(sub) | fs | single);
        if (seen.insert(closed).second) todo.push_back(closed);
      }
    }
    std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
      if (a.dim != b.dim) return a.dim > b.dim;
      return a.rays < b.rays;
    });
    return out;
  }

  /** Cone spanned by a subset of rays plus the lineality. */
  RationalCone face_cone(const boost::dynamic_bitset<>& ray_set) const {
    std::vector<QVector> r;
    for (std::size_t k = 0; k < rays_.size(); ++k)
      if (ray_set.test(k)) r.push_back(to_q(rays_[k]));
    return from_generators(dim_, r, lineality_list_q());
  }

  bool operator==(const RationalCone&) const = default;

 private:
  std::size_t face_dim(const boost::dynamic_bitset<>& rs) const {
    std::vector<QVector> g = lineality_list_q();
    for (std::size_t k = 0; k < rays_.size(); ++k)
      if (rs.test(k)) g.push_back(to_q(rays_[k]));
    return rank_of_vectors(g, dim_);
  }

  static RationalCone from_dual_dd(std::size_t dim, const detail::DDOutput& dual) {
    auto primal = detail::double_description(dim, dual.rays, dual.lineality);
    RationalCone c;
    c.dim_ = dim;
    auto lin = detail::make_subspace(primal.lineality, dim);
    auto eq = detail::make_subspace(dual.lineality, dim);
    c.rays_ = detail::canonical_rays(primal.rays, lin);
    c.lineality_ = lin.basis;
    c.facets_ = detail::canonical_rays(dual.rays, eq);
    c.equations_ = eq.basis;
    return c;
  }

  std::size_t dim_ = 0;
  std::vector<ZVector> rays_, lineality_, facets_, equations_;
};

/** Cone dual to sigma under the standard pairing. */
inline RationalCone dual_cone(const RationalCone& sigma) { return sigma.dual(); }

namespace detail {

/** Pulling triangulation: cone over R[0] of the facets not containing it. */
inline void simplicial_cover(const RationalCone& c, std::vector<std::vector<ZVector>>& out) {
  const auto& rays = c.rays();
  if (rays.size() == c.dim()) {
    out.push_back(rays);
    return;
  }
  const ZVector& apex = rays[0];
  for (const auto& f : c.facets()) {
    if (dot(f, apex) == 0) continue;
    std::vector<ZVector> fr;
    for (const auto& r : rays)
      if (dot(f, r) == 0) fr.push_back(r);
    std::vector<std::vector<ZVector>> sub;
    simplicial_cover(RationalCone::from_generators(c.ambient_dim(), fr), sub);
    for (auto& g : sub) {
      g.push_back(apex);
      out.push_back(std::move(g));
    }
  }
}

inline Integer floor_q(const Rational& q) {
  Integer n = num(q), d = den(q), f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}

/**
 * Lattice points sum l_i g_i with 0 <= l_i < 1. With U G W = D (Smith form) they
 * are G W mu for mu_i in {0, 1/d_i, ..., (d_i - 1)/d_i}, reduced mod 1.
 */
inline void parallelepiped_points(const std::vector<ZVector>& gens, std::size_t dim, std::vector<ZVector>& out,
                                  std::size_t& budget) {
  const std::size_t k = gens.size();
  if (k == 0) return;
  IntMatrix g = IntMatrix::from_rows(gens, dim).transpose();
  SmithForm snf = smith_normal_form(g);
  std::vector<Integer> dg = snf.diagonal();
  Integer count = 1;
  for (const auto& x : dg) count *= x;
  if (count > Integer(budget)) throw Error(ErrorKind::InvalidInput, "hilbert_basis: too many lattice points");
  budget -= count.convert_to<std::size_t>();
  std::vector<Integer> a(k, Integer(0));
  for (;;) {
    QVector mu(k);
    for (std::size_t i = 0; i < k; ++i) mu[i] = Rational(a[i], dg[i]);
    QVector lam = to_q(snf.V) * mu;
    for (auto& l : lam) l -= floor_q(l);
    QVector x = to_q(g) * lam;
    ZVector z(dim);
    for (std::size_t i = 0; i < dim; ++i) z[i] = num(x[i]);
    if (!is_zero(z)) out.push_back(z);
    std::size_t i = 0;
    while (i < k && a[i] + 1 == dg[i]) a[i++] = 0;
    if (i == k) break;
    ++a[i];
  }
}

}  // namespace detail

/** Irreducible lattice points of a pointed cone, sorted. */
inline std::vector<ZVector> hilbert_basis(const RationalCone& c, std::size_t max_points = 2000000) {
  if (!c.is_pointed()) throw Error(ErrorKind::NotPointed, "hilbert_basis needs a pointed cone");
  // the rays and the parallelepiped points of a triangulation generate the monoid
  std::vector<std::vector<ZVector>> simplices;
  detail::simplicial_cover(c, simplices);
  std::vector<ZVector> cand = c.rays();
  for (const auto& s : simplices) detail::parallelepiped_points(s, c.ambient_dim(), cand, max_points);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::vector<ZVector> basis;
  for (const auto& p : cand) {
    bool reducible = false;
    for (const auto& q : cand)
      if (q != p && c.contains(ZVector(p - q))) {
        reducible = true;
        break;
      }
    if (!reducible) basis.push_back(p);
  }
  return basis;
}

}  // namespace pdcox
