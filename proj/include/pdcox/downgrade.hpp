#pragma once

#include "pdcox/pdivisor.hpp"

#include <functional>

namespace pdcox {

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t j = 0; j < k; ++j) idx[j] = j;
  for (;;) {
    f(idx);
    std::size_t j = k;
    while (j > 0 && idx[j - 1] == n - k + j - 1) --j;
    if (j == 0) return;
    ++idx[j - 1];
    for (std::size_t m = j; m < k; ++m) idx[m] = idx[m - 1] + 1;
  }
}

/**
 * Maximal cones of the coarsest common refinement of the full-dimensional
 * cones `pieces` inside `support`. The support is cut along facet
 * hyperplanes until every cell lies inside or outside each piece; the
 * chamber of a cell is then the intersection of all pieces containing it.
 */
inline std::vector<RationalCone> chamber_complex(const RationalCone& support, const std::vector<RationalCone>& pieces) {
  const std::size_t dim = support.ambient_dim();
  std::vector<RationalCone> cells{support};
  for (const auto& c : pieces) {
    std::vector<RationalCone> next;
    for (const auto& k : cells) {
      if (c.contains(k)) {
        next.push_back(k);
        continue;
      }
      auto inside = k.intersect(c);
      if (!inside.is_full_dimensional()) {
        next.push_back(k);
        continue;
      }
      next.push_back(inside);
      RationalCone rest = k;
      for (const auto& h : c.facets()) {
        auto below = rest.intersect(RationalCone::from_inequalities(dim, {-to_q(h)}));
        if (below.is_full_dimensional()) next.push_back(below);
        rest = rest.intersect(RationalCone::from_inequalities(dim, {to_q(h)}));
        if (!rest.is_full_dimensional()) break;
      }
    }
    cells = std::move(next);
  }
  std::vector<RationalCone> chambers;
  for (const auto& k : cells) {
    QVector v = k.interior_point();
    RationalCone ch = support;
    for (const auto& c : pieces)
      if (c.contains(v)) ch = ch.intersect(c);
    if (std::find(chambers.begin(), chambers.end(), ch) == chambers.end()) chambers.push_back(ch);
  }
  return chambers;
}

/** Images of the generators, and the full-dimensional images of faces of delta. */
inline std::vector<RationalCone> projected_full_faces(const RationalCone& delta, const QMatrix& pi) {
  const std::size_t d = pi.rows();
  std::vector<QVector> img;
  for (const auto& r : delta.rays()) img.push_back(pi * to_q(r));
  std::vector<RationalCone> out;
  auto add = [&](const std::vector<QVector>& g) {
    auto c = RationalCone::from_generators(d, g);
    if (c.is_full_dimensional() && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  if (delta.is_simplicial()) {
    // every full-dimensional image is triangulated by images of d-subsets
    for_each_subset(img.size(), d, [&](const std::vector<std::size_t>& s) {
      std::vector<QVector> g;
      for (auto k : s) g.push_back(img[k]);
      if (rank_of_vectors(g, d) == d) add(g);
    });
  } else {
    for (const auto& f : delta.faces()) {
      std::vector<QVector> g;
      for (std::size_t k = 0; k < img.size(); ++k)
        if (f.rays.test(k)) g.push_back(img[k]);
      if (rank_of_vectors(g, d) == d) add(g);
    }
  }
  return out;
}

/** Fan from a list of pointed full-dimensional cones. */
inline Fan fan_of_cones(std::size_t d, const std::vector<RationalCone>& cones) {
  std::vector<ZVector> rays;
  std::vector<std::vector<std::size_t>> idx;
  for (const auto& c : cones) {
    std::vector<std::size_t> m;
    for (const auto& r : c.rays()) {
      auto it = std::find(rays.begin(), rays.end(), r);
      if (it == rays.end()) {
        rays.push_back(r);
        it = rays.end() - 1;
      }
      m.push_back(static_cast<std::size_t>(it - rays.begin()));
    }
    idx.push_back(m);
  }
  return make_fan(d, rays, idx);
}

}  // namespace detail

/** Coarsest common refinement of the images pi(F) of the faces F of delta. */
inline Fan chow_fan(const RationalCone& delta, const LatticeMap& pi) {
  if (!is_surjective(pi)) throw Error(ErrorKind::NotSurjective, "chow_fan: projection is not surjective");
  if (!delta.is_pointed()) throw Error(ErrorKind::NotPointed, "chow_fan: cone is not pointed");
  if (delta.ambient_dim() != pi.source_rank()) throw Error(ErrorKind::DimensionMismatch, "chow_fan: shapes");
  const std::size_t d = pi.target_rank();
  QMatrix p = to_q(pi.matrix);
  std::vector<QVector> img;
  for (const auto& r : delta.rays()) img.push_back(p * to_q(r));
  auto support = RationalCone::from_generators(d, img);
  if (!support.is_full_dimensional())
    throw Error(ErrorKind::InvalidInput, "chow_fan: image of the cone is not full-dimensional");
  auto chambers = detail::chamber_complex(support, detail::projected_full_faces(delta, p));
  return detail::fan_of_cones(d, chambers);
}

/** Result of re-reading an affine toric variety for a subtorus action. */
struct Downgrade {
  Fan sigma;
  std::shared_ptr<const ToricVariety> y;
  PDivisor pdiv;
  IntMatrix i, pi, s, t;
  /** Fiber-minus-section and inequality descriptions coincided for every ray. */
  bool constructions_agree = true;
};

namespace detail {

/** Delta_a = t((pi^-1(a) cap delta) - s(a)), computed from the fiber. */
inline TailedPolyhedron fiber_coefficient(const RationalCone& delta, const IntMatrix& pi, const IntMatrix& s,
                                          const IntMatrix& t, const ZVector& a) {
  const std::size_t n = pi.cols();
  std::vector<std::pair<QVector, Rational>> ineq, eq;
  for (const auto& f : delta.facets()) ineq.push_back({to_q(f), Rational(0)});
  for (const auto& e : delta.equations()) eq.push_back({to_q(e), Rational(0)});
  for (std::size_t k = 0; k < pi.rows(); ++k) eq.push_back({to_q(pi.row(k)), Rational(a[k])});
  auto fiber = TailedPolyhedron::from_inequalities(n, ineq, eq);
  return linear_image(translate(fiber, -to_q(s * a)), to_q(t));
}

/** Delta_a = {x : <x, deg r> >= -<s(a), r>} over the generators r of the dual of delta. */
inline TailedPolyhedron inequality_coefficient(const RationalCone& delta, const IntMatrix& deg, const IntMatrix& s,
                                               const ZVector& a) {
  const std::size_t r = deg.rows();
  ZVector sa = s * a;
  std::vector<std::pair<QVector, Rational>> ineq, eq;
  const RationalCone dd = delta.dual();
  for (const auto& g : dd.rays()) ineq.push_back({to_q(deg * g), Rational(-dot(sa, g))});
  for (const auto& l : dd.lineality()) eq.push_back({to_q(deg * l), Rational(-dot(sa, l))});
  return TailedPolyhedron::from_inequalities(r, ineq, eq);
}

}  // namespace detail

/**
 * p-divisor of the affine toric variety of delta under the subtorus given by
 * deg: Z^n -> M. pi defaults to the transpose of a saturated kernel basis
 * of deg; s defaults to the SNF section of pi.
 */
inline Downgrade downgrade(const RationalCone& delta, const IntMatrix& deg, std::optional<IntMatrix> s = std::nullopt,
                           std::optional<IntMatrix> pi = std::nullopt) {
  const std::size_t n = deg.cols(), r = deg.rows();
  if (delta.ambient_dim() != n) throw Error(ErrorKind::DimensionMismatch, "downgrade: cone and degree map differ");
  if (!is_surjective(LatticeMap(deg))) throw Error(ErrorKind::NotSurjective, "downgrade: degree map not surjective");
  if (!delta.is_pointed()) throw Error(ErrorKind::NotPointed, "downgrade: cone is not pointed");
  Downgrade out;
  out.i = deg.transpose();
  if (pi) {
    if (pi->cols() != n || pi->rows() != n - r || *pi * out.i != IntMatrix(n - r, r) ||
        !is_surjective(LatticeMap(*pi)))
      throw Error(ErrorKind::InconsistentSequence, "downgrade: projection does not match the degree map");
    out.pi = *pi;
  } else {
    out.pi = kernel_basis(deg).transpose();
  }
  const std::size_t d = out.pi.rows();
  if (s) {
    if (s->rows() != n || s->cols() != d || out.pi * *s != IntMatrix::identity(d))
      throw Error(ErrorKind::SectionInvalid, "downgrade: not a section of the projection");
    out.s = *s;
  } else {
    out.s = section_of_surjection(LatticeMap(out.pi)).matrix;
  }
  out.t = cosection(LatticeMap(out.i), LatticeMap(out.s)).matrix;
  out.sigma = chow_fan(delta, LatticeMap(out.pi));
  out.y = std::make_shared<const ToricVariety>(build_toric(out.sigma));

  std::vector<QVector> tail_ineq, tail_eq;
  const RationalCone dd = delta.dual();
  for (const auto& g : dd.rays()) tail_ineq.push_back(to_q(deg * g));
  for (const auto& l : dd.lineality()) tail_eq.push_back(to_q(deg * l));
  out.pdiv = PDivisor(out.y, RationalCone::from_inequalities(r, tail_ineq, tail_eq));
  for (std::size_t k = 0; k < out.sigma.n_rays(); ++k) {
    const ZVector& a = out.sigma.rays[k];
    auto by_fiber = detail::fiber_coefficient(delta, out.pi, out.s, out.t, a);
    auto by_ineq = detail::inequality_coefficient(delta, deg, out.s, a);
    if (!(by_fiber == by_ineq)) out.constructions_agree = false;
    out.pdiv.set_coefficient(k, by_ineq);
  }
  return out;
}

}  // namespace pdcox
