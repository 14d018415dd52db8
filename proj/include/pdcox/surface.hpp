#pragma once

#include "pdcox/cox.hpp"

namespace pdcox {

/** D = positive + sum_i a_i [E_i], positive nef and orthogonal to each E_i with a_i > 0. */
struct ZariskiDecomposition {
  QVector positive;
  std::map<std::size_t, Rational> negative;  // ray index -> a_i > 0
};

/**
 * Support of the negative part grown one curve at a time: solve
 * (P . E_j) = 0 on the current support, then add the first invariant curve
 * meeting P negatively.
 */
inline ZariskiDecomposition zariski(const ToricVariety& s, const QVector& d) {
  require_surface(s);
  if (d.size() != s.class_rank()) throw Error(ErrorKind::DimensionMismatch, "zariski: class length");
  if (!effective_cone(s).contains(d)) throw Error(ErrorKind::NotEffective, "zariski: class is not effective");
  const auto sf = surface_form(s);
  const std::size_t n = s.n_rays();
  std::vector<std::size_t> supp;
  ZariskiDecomposition z;
  for (;;) {
    QMatrix g(supp.size(), supp.size());
    QVector rhs(supp.size());
    for (std::size_t a = 0; a < supp.size(); ++a) {
      rhs[a] = intersect_classes(sf, d, s.ray_class(supp[a]));
      for (std::size_t b = 0; b < supp.size(); ++b) g(a, b) = sf.ray_form(supp[a], supp[b]);
    }
    QVector coef = supp.empty() ? QVector{} : *solve(g, rhs);
    QVector p = d;
    for (std::size_t a = 0; a < supp.size(); ++a) p = p - scale(coef[a], s.ray_class(supp[a]));
    std::optional<std::size_t> next;
    for (std::size_t k = 0; k < n && !next; ++k)
      if (intersect_classes(sf, p, s.ray_class(k)) < 0) next = k;
    if (!next) {
      z.positive = p;
      for (std::size_t a = 0; a < supp.size(); ++a)
        if (coef[a] != 0) z.negative[supp[a]] = coef[a];
      return z;
    }
    if (sf.ray_form(*next, *next) >= 0)
      throw Error(ErrorKind::InvalidInput, "zariski: negative pairing with a curve of non-negative square");
    supp.push_back(*next);
  }
}

/** Leading principal minors of -G all positive. */
inline bool is_negative_definite(const QMatrix& g) {
  for (std::size_t k = 1; k <= g.rows(); ++k) {
    QMatrix m(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) m(a, b) = -g(a, b);
    if (determinant(m) <= 0) return false;
  }
  return true;
}

struct ZariskiCheck {
  bool sum = false, positive_nef = false, orthogonal = false, negative_definite = false;
  bool all() const { return sum && positive_nef && orthogonal && negative_definite; }
};

inline ZariskiCheck check_zariski(const ToricVariety& s, const QVector& d, const ZariskiDecomposition& z) {
  const auto sf = surface_form(s);
  ZariskiCheck c;
  QVector total = z.positive;
  for (const auto& [k, a] : z.negative) total = total + scale(a, s.ray_class(k));
  c.sum = total == d;
  c.positive_nef = is_nef(s, z.positive);
  c.orthogonal = true;
  std::vector<std::size_t> supp;
  for (const auto& [k, a] : z.negative) {
    if (a <= 0 || intersect_classes(sf, z.positive, s.ray_class(k)) != 0) c.orthogonal = false;
    supp.push_back(k);
  }
  QMatrix g(supp.size(), supp.size());
  for (std::size_t a = 0; a < supp.size(); ++a)
    for (std::size_t b = 0; b < supp.size(); ++b) g(a, b) = sf.ray_form(supp[a], supp[b]);
  c.negative_definite = is_negative_definite(g);
  return c;
}

struct SurfaceCoefficient {
  std::size_t ray = 0;
  TailedPolyhedron delta;  // in Cl(S)_Q
  TailedPolyhedron nabla;  // in Cl(S)_Q
};

/**
 * For each negative curve E_i:
 *   Delta_i = {D in Eff : D.E_i >= -1, D.E_j >= 0 (j != i)},
 *   nabla_i = [0, E_i] + sum_{j != i} Q>=0 E_j + Nef(S).
 */
inline std::vector<SurfaceCoefficient> surface_cox_coefficients(const ToricVariety& s) {
  require_surface(s);
  const auto sf = surface_form(s);
  const std::size_t r = s.class_rank();
  const auto neg = exceptional_rays(s);
  const auto eff = effective_cone(s);
  const auto nef = nef_cone(s);
  std::vector<SurfaceCoefficient> out;
  for (auto i : neg) {
    std::vector<std::pair<QVector, Rational>> ineq;
    for (const auto& f : eff.facets()) ineq.push_back({to_q(f), Rational(0)});
    for (auto j : neg) ineq.push_back({sf.class_form * s.ray_class(j), Rational(j == i ? -1 : 0)});
    SurfaceCoefficient c;
    c.ray = i;
    c.delta = TailedPolyhedron::from_inequalities(r, ineq);
    std::vector<QVector> rays = nef.ray_list_q();
    for (auto j : neg)
      if (j != i) rays.push_back(s.ray_class(j));
    c.nabla = TailedPolyhedron::from_generators(r, {zero_q(r), s.ray_class(i)}, rays);
    out.push_back(std::move(c));
  }
  return out;
}

/** Cl* -> Cl along the intersection pairing: w -> K^{-1} w. */
inline QMatrix dual_to_class(const ToricVariety& s) {
  auto k = surface_form(s).class_form;
  auto inv = inverse(k);
  if (!inv) throw Error(ErrorKind::InvalidInput, "intersection form is degenerate");
  return *inv;
}

inline QVector anticanonical_class(const ToricVariety& s) {
  return s.class_of(QVector(s.n_rays(), Rational(1)));
}

inline bool is_del_pezzo(const ToricVariety& s) {
  require_surface(s);
  return is_ample(s, anticanonical_class(s));
}

struct OrthogonalityReport {
  bool passed = true;
  std::size_t checked = 0;
  std::vector<QVector> failures;
};

/** Negative parts of the Zariski decompositions of the samples consist of pairwise orthogonal curves. */
inline OrthogonalityReport orthogonality_check(const ToricVariety& s, const std::vector<QVector>& samples) {
  if (!is_del_pezzo(s)) throw Error(ErrorKind::NotDelPezzo, "orthogonality_check needs a del Pezzo surface");
  const auto sf = surface_form(s);
  OrthogonalityReport rep;
  for (const auto& d : samples) {
    auto z = zariski(s, d);
    ++rep.checked;
    bool ok = true;
    for (const auto& [a, x] : z.negative)
      for (const auto& [b, y] : z.negative)
        if (a < b && sf.ray_form(a, b) != 0) ok = false;
    if (!ok) rep.failures.push_back(d);
  }
  rep.passed = rep.failures.empty();
  return rep;
}

/** sum_k v_k (w_k . x) = x for all x, i.e. sum_k v_k w_k^T K = id. */
inline bool is_identity_decomposition(const ToricVariety& s, const std::vector<std::pair<QVector, QVector>>& terms) {
  const auto k = surface_form(s).class_form;
  const std::size_t r = s.class_rank();
  QMatrix acc(r, r);
  for (const auto& [v, w] : terms) {
    QVector wk = k.transpose() * w;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) acc(a, b) += v[a] * wk[b];
  }
  return acc == QMatrix::identity(r);
}

}  // namespace pdcox
