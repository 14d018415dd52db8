#pragma once

#include "pdcox/polyhedron.hpp"

namespace pdcox {

/** Function that is linear on each cone of a finite family; -inf off the support. */
struct FanwiseLinear {
  std::size_t dim = 0;
  std::vector<RationalCone> cones;
  std::vector<QVector> functionals;

  Extended evaluate(const QVector& v) const {
    for (std::size_t k = 0; k < cones.size(); ++k)
      if (cones[k].contains(v)) return Extended::finite(dot(functionals[k], v));
    return Extended::neg_inf();
  }

  FanwiseLinear negated() const {
    FanwiseLinear g = *this;
    for (auto& f : g.functionals) f = -f;
    return g;
  }
};

/** Support function of Delta: on the normal cone of each vertex w, u -> <w, u>. */
inline FanwiseLinear pwl_of_polyhedron(const TailedPolyhedron& p) {
  if (p.is_empty()) throw Error(ErrorKind::EmptyPolyhedron, "pwl_of_polyhedron: empty polyhedron");
  const std::size_t d = p.ambient_dim();
  RationalCone domain = p.tail().dual();
  auto vs = p.vertices();
  FanwiseLinear f;
  f.dim = d;
  for (const auto& w : vs) {
    std::vector<QVector> ineq;
    for (const auto& fa : domain.facets()) ineq.push_back(to_q(fa));
    for (const auto& w2 : vs)
      if (w2 != w) ineq.push_back(w2 - w);
    std::vector<QVector> eq;
    for (const auto& e : domain.equations()) eq.push_back(to_q(e));
    auto cone = RationalCone::from_inequalities(d, ineq, eq);
    if (cone.dim() != domain.dim()) continue;
    f.cones.push_back(cone);
    f.functionals.push_back(w);
  }
  return f;
}

/** Pairs of cones sharing a common facet. */
inline std::vector<std::pair<std::size_t, std::size_t>> adjacent_cone_pairs(const FanwiseLinear& f) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < f.cones.size(); ++a)
    for (std::size_t b = a + 1; b < f.cones.size(); ++b) {
      auto c = f.cones[a].intersect(f.cones[b]);
      if (c.dim() + 1 == f.cones[a].dim() && f.cones[a].dim() == f.cones[b].dim()) out.emplace_back(a, b);
    }
  return out;
}

/** f(v1 + v2) <= f(v1) + f(v2) for generators of adjacent cones. */
inline bool is_concave(const FanwiseLinear& f) {
  auto gens = [](const RationalCone& c) {
    std::vector<QVector> g = c.ray_list_q();
    for (const auto& l : c.lineality()) {
      g.push_back(to_q(l));
      g.push_back(-to_q(l));
    }
    return g;
  };
  for (auto [a, b] : adjacent_cone_pairs(f))
    for (const auto& v1 : gens(f.cones[a]))
      for (const auto& v2 : gens(f.cones[b])) {
        Extended s = f.evaluate(v1 + v2);
        if (!s.is_finite()) return false;
        if (s.value > dot(f.functionals[a], v1) + dot(f.functionals[b], v2)) return false;
      }
  return true;
}

/**
 * For concave f >= 0: nabla_f = conv({0} u {g / f(g) : f(g) > 0}) + cone{g : f(g) = 0}
 * over cone generators g, and Delta_f = dual(nabla_f). Returns (Delta_f, nabla_f).
 */
inline std::pair<TailedPolyhedron, TailedPolyhedron> polyhedron_of_pwl(const FanwiseLinear& f) {
  if (f.cones.empty()) throw Error(ErrorKind::InvalidInput, "polyhedron_of_pwl: no cones");
  if (!is_concave(f)) throw Error(ErrorKind::NotConcave, "fanwise linear function is not concave");
  std::vector<QVector> verts{zero_q(f.dim)}, tail, lin;
  for (std::size_t k = 0; k < f.cones.size(); ++k) {
    const auto& phi = f.functionals[k];
    for (const auto& l : f.cones[k].lineality()) {
      if (dot(phi, l) != 0) throw Error(ErrorKind::InvalidInput, "polyhedron_of_pwl: f not >= 0");
      lin.push_back(to_q(l));
    }
    for (const auto& g : f.cones[k].rays()) {
      Rational v = dot(phi, g);
      if (v < 0) throw Error(ErrorKind::InvalidInput, "polyhedron_of_pwl: f not >= 0");
      if (v == 0)
        tail.push_back(to_q(g));
      else
        verts.push_back(scale(1 / v, to_q(g)));
    }
  }
  auto nabla = TailedPolyhedron::from_generators(f.dim, verts, tail, lin);
  return {dual_polyhedron(nabla), nabla};
}

}  // namespace pdcox
