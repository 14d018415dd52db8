#pragma once

#include "pdcox/downgrade.hpp"
#include "pdcox/lp.hpp"

#include <random>

namespace pdcox {

/** lambda(E, P): a(E) = sum_P lambda(E, P) a(P), supported on the minimal cone C_E of F containing a(E). */
struct MultiplicityTable {
  QMatrix lambda;  // rays of Sigma x rays of F
  std::vector<std::vector<std::size_t>> support;

  QVector row(std::size_t e) const { return lambda.row(e); }
};

inline MultiplicityTable lambda_table(const Fan& f, const Fan& sigma) {
  if (!is_simplicial(f)) throw Error(ErrorKind::NotSimplicial, "lambda_table: coarse fan is not simplicial");
  if (f.lattice_rank != sigma.lattice_rank) throw Error(ErrorKind::DimensionMismatch, "lambda_table: ranks differ");
  std::vector<RationalCone> fcones;
  for (std::size_t k = 0; k < f.cones.size(); ++k) fcones.push_back(f.cone(k));
  for (std::size_t k = 0; k < sigma.cones.size(); ++k) {
    auto c = sigma.cone(k);
    if (std::none_of(fcones.begin(), fcones.end(), [&](const RationalCone& fc) { return fc.contains(c); }))
      throw Error(ErrorKind::NotRefinement, "a cone of the fine fan lies in no cone of the coarse fan");
  }
  MultiplicityTable t;
  t.lambda = QMatrix(sigma.n_rays(), f.n_rays());
  for (std::size_t e = 0; e < sigma.n_rays(); ++e) {
    const QVector a = to_q(sigma.rays[e]);
    std::optional<std::vector<std::size_t>> best;
    QVector coef;
    for (std::size_t k = 0; k < f.cones.size(); ++k) {
      const auto& cone = f.cones[k];
      std::vector<QVector> cols;
      for (auto p : cone) cols.push_back(to_q(f.rays[p]));
      auto mu = solve(QMatrix::from_cols(cols, f.lattice_rank), a);
      if (!mu || std::any_of(mu->begin(), mu->end(), [](const Rational& x) { return x < 0; })) continue;
      std::vector<std::size_t> supp;
      QVector c;
      for (std::size_t j = 0; j < cone.size(); ++j)
        if ((*mu)[j] > 0) {
          supp.push_back(cone[j]);
          c.push_back((*mu)[j]);
        }
      if (!best || supp.size() < best->size()) {
        best = supp;
        coef = c;
      }
    }
    if (!best) throw Error(ErrorKind::NotRefinement, "ray of the fine fan outside the support of the coarse fan");
    for (std::size_t j = 0; j < best->size(); ++j) t.lambda(e, (*best)[j]) = coef[j];
    t.support.push_back(*best);
  }
  return t;
}

/**
 * Cox p-divisor of Z on its Chow quotient Y, split as psi^* + D'.
 * Coefficients live in Cl(Z)*_Q in the dual of the class basis of Z.
 */
struct CoxPDivisor {
  std::shared_ptr<const ToricVariety> z, y;
  MultiplicityTable lambda;
  /** e(E) = sum_P lambda_E(P) e(P) in Q^n, one row per ray of Y. */
  QMatrix e;
  /** beta_E = t(e(E)) in Cl(Z)*; b(E) = i(beta_E) = e(E) - s(a(E)). */
  std::vector<QVector> beta;
  std::vector<QVector> b;
  PDivisor prime_part;
  /** D_Cox = psi^* + D' with psi^* realised by the translations beta_E. */
  PDivisor assembled;
  /** Coefficients of the downgrade of the Cox cone, per ray of Y. */
  std::vector<TailedPolyhedron> raw;
  bool downgrade_constructions_agree = true;
  /** raw_E == Delta_E + beta_E for every ray E. */
  bool splitting_consistent = true;

  const ToricVariety& base() const { return *y; }
  std::size_t n_y() const { return y->n_rays(); }
  const TailedPolyhedron& delta(std::size_t e) const { return prime_part.coefficient(e); }
  std::vector<std::size_t> exceptional() const {
    std::vector<std::size_t> out;
    for (const auto& [k, d] : prime_part.nontrivial()) out.push_back(k);
    return out;
  }
};

/** Delta_E = {w : <w, [P]> >= -lambda_E(P) for all rays P of Z}. */
inline TailedPolyhedron cox_coefficient(const ToricVariety& z, const QVector& lambda_row) {
  std::vector<std::pair<QVector, Rational>> ineq;
  for (std::size_t p = 0; p < z.n_rays(); ++p) ineq.push_back({z.ray_class(p), -lambda_row[p]});
  return TailedPolyhedron::from_inequalities(z.class_rank(), ineq);
}

inline CoxPDivisor cox_pdivisor(const ToricVariety& z_in) {
  require_complete(z_in);
  auto z = std::make_shared<const ToricVariety>(z_in);
  const auto& seq = z->seq();
  const std::size_t n = z->n_rays(), r = z->class_rank();
  Downgrade dg = downgrade(RationalCone::orthant(n), seq.deg, seq.s, seq.pi);
  if (dg.t != seq.t) throw Error(ErrorKind::InconsistentSequence, "cosection of the downgrade differs");

  // keep the labels of Z for rays that survive, name the new ones
  Fan sig = dg.sigma;
  std::size_t fresh = 0;
  for (std::size_t k = 0; k < sig.n_rays(); ++k) {
    if (auto p = z->fan().find_ray(sig.rays[k]))
      sig.labels[k] = z->fan().labels[*p];
    else
      sig.labels[k] = "Y" + std::to_string(fresh++);
  }
  CoxPDivisor c;
  c.z = z;
  // same ray set as Z: read Cl(Y) in the class coordinates of Z
  ToricVariety::Options yopt;
  if (sig.n_rays() == n && !z->class_basis().empty()) {
    std::vector<std::size_t> b;
    for (auto p : z->class_basis()) b.push_back(*sig.find_ray(z->fan().rays[p]));
    yopt.class_basis = b;
  }
  c.y = std::make_shared<const ToricVariety>(build_toric(sig, yopt));
  c.lambda = lambda_table(z->fan(), sig);
  c.e = c.lambda.lambda;
  c.downgrade_constructions_agree = dg.constructions_agree;

  std::vector<QVector> tail_ineq;
  for (std::size_t p = 0; p < n; ++p) tail_ineq.push_back(z->ray_class(p));
  c.prime_part = PDivisor(c.y, RationalCone::from_inequalities(r, tail_ineq));
  c.assembled = PDivisor(c.y, c.prime_part.tail());
  const QMatrix t = to_q(seq.t), i = to_q(seq.i);
  for (std::size_t k = 0; k < sig.n_rays(); ++k) {
    QVector ek = c.e.row(k);
    c.beta.push_back(t * ek);
    c.b.push_back(i * c.beta.back());
    if (c.b.back() != ek - to_q(seq.s * sig.rays[k])) c.splitting_consistent = false;
    auto delta = cox_coefficient(*z, ek);
    c.raw.push_back(dg.pdiv.coefficient(k));
    if (!(c.raw.back() == translate(delta, c.beta.back()))) c.splitting_consistent = false;
    c.prime_part.set_coefficient(k, delta);
    c.assembled.set_coefficient(k, c.raw.back());
  }
  return c;
}

/** Dual coefficient conv{[P] / lambda_E(P)} with v/0 read as the ray through v; contains 0. */
inline TailedPolyhedron nabla(const CoxPDivisor& c, std::size_t e) {
  const ToricVariety& z = *c.z;
  std::vector<QVector> verts{zero_q(z.class_rank())}, rays;
  for (std::size_t p = 0; p < z.n_rays(); ++p) {
    Rational l = c.lambda.lambda(e, p);
    if (l > 0)
      verts.push_back(scale(Rational(1 / l), z.ray_class(p)));
    else
      rays.push_back(z.ray_class(p));
  }
  return TailedPolyhedron::from_generators(z.class_rank(), verts, rays);
}

/** min <e, d> over d >= 0 with deg(d) = u, by exact simplex. */
inline Rational stable_mult_lp(const ToricVariety& z, const QVector& e, const QVector& u) {
  if (u.size() != z.class_rank()) throw Error(ErrorKind::DimensionMismatch, "stable_mult_lp: class length");
  auto res = lp_minimize(e, to_q(z.seq().deg), u);
  if (res.status == LpResult::Status::Infeasible)
    throw Error(ErrorKind::Infeasible, "stable_mult_lp: class is not effective");
  if (res.status != LpResult::Status::Optimal)
    throw Error(ErrorKind::Infeasible, "stable_mult_lp: unbounded (weights must be non-negative)");
  return res.value;
}

inline Rational stable_mult_lp(const CoxPDivisor& c, std::size_t e, const QVector& u) {
  return stable_mult_lp(*c.z, c.e.row(e), u);
}

/** psi^*(u) as an invariant divisor on Y, from a lift of u to Z. */
inline QVector psi_pullback(const CoxPDivisor& c, const QVector& u) { return c.e * c.z->lift(u); }

struct Retraction {
  QVector divisor;  // multiplicity per ray of Y
  QVector y_class;  // class in Cl(Y)_Q
  bool nef = false;
};

/** D_Cox(u) = sum_E (<beta_E, u> + min<Delta_E, u>) E on Y, with a nef certificate. */
inline Retraction retraction(const CoxPDivisor& c, const QVector& u) {
  if (u.size() != c.z->class_rank()) throw Error(ErrorKind::DimensionMismatch, "retraction: class length");
  if (!c.prime_part.tail().dual().contains(u)) throw Error(ErrorKind::NotEffective, "retraction: class not effective");
  Retraction out;
  out.divisor.assign(c.n_y(), Rational(0));
  for (std::size_t k = 0; k < c.n_y(); ++k) out.divisor[k] = dot(c.beta[k], u) + eval_min(c.delta(k), u).value;
  out.y_class = c.y->class_of(out.divisor);
  out.nef = is_nef(*c.y, out.y_class);
  return out;
}

/** Mov(Z): classes lying in the cone of the other rays, for every ray. */
inline RationalCone movable_cone(const ToricVariety& z) {
  require_complete(z);
  RationalCone m = effective_cone(z);
  for (std::size_t p = 0; p < z.n_rays(); ++p) {
    std::vector<QVector> g;
    for (std::size_t q = 0; q < z.n_rays(); ++q)
      if (q != p) g.push_back(z.ray_class(q));
    m = m.intersect(RationalCone::from_generators(z.class_rank(), g));
  }
  return m;
}

/** A chamber of Mov(Z): the nef cone of a small modification, with that model's fan. */
struct MovChamber {
  RationalCone nef;
  std::vector<std::vector<std::size_t>> cones;  // maximal cones, as ray indices of Z
};

/**
 * Chambers of the secondary fan (chamber complex of the ray classes) lying
 * in Mov(Z). The fan of a chamber with interior class u has the cones
 * spanned by the complements of the r-sets T with u interior to cone([T]).
 */
inline std::vector<MovChamber> mov_chambers(const ToricVariety& z) {
  require_complete(z);
  if (z.dim() > 3) throw Error(ErrorKind::DimensionUnsupported, "mov_chambers supports dimension at most 3");
  const std::size_t n = z.n_rays(), r = z.class_rank();
  std::vector<QVector> cls;
  for (std::size_t p = 0; p < n; ++p) cls.push_back(z.ray_class(p));
  std::vector<RationalCone> pieces;
  std::vector<std::vector<std::size_t>> subsets;
  detail::for_each_subset(n, r, [&](const std::vector<std::size_t>& s) {
    std::vector<QVector> g;
    for (auto k : s) g.push_back(cls[k]);
    if (rank_of_vectors(g, r) != r) return;
    subsets.push_back(s);
    auto c = RationalCone::from_generators(r, g);
    if (std::find(pieces.begin(), pieces.end(), c) == pieces.end()) pieces.push_back(c);
  });
  const RationalCone mov = movable_cone(z);
  std::vector<MovChamber> out;
  if (!mov.is_full_dimensional()) return out;
  for (const auto& ch : detail::chamber_complex(mov, pieces)) {
    QVector u = ch.interior_point();
    MovChamber m{ch, {}};
    for (const auto& s : subsets) {
      std::vector<QVector> g;
      for (auto k : s) g.push_back(cls[k]);
      if (!RationalCone::from_generators(r, g).contains_relative_interior(u)) continue;
      std::vector<std::size_t> comp;
      for (std::size_t p = 0; p < n; ++p)
        if (!std::binary_search(s.begin(), s.end(), p)) comp.push_back(p);
      m.cones.push_back(comp);
    }
    std::sort(m.cones.begin(), m.cones.end());
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const MovChamber& a, const MovChamber& b) { return a.cones < b.cones; });
  return out;
}

/**
 * Lattice classes in Eff(Z) for property checks: the Hilbert basis of Eff,
 * all pairwise sums, and `random_count` random non-negative combinations
 * of ray classes (coefficients 0..4) from a fixed seed.
 */
inline std::vector<QVector> sample_effective_classes(const ToricVariety& z, std::uint64_t seed,
                                                     std::size_t random_count) {
  auto eff = effective_cone(z);
  std::vector<QVector> out;
  auto hb = hilbert_basis(eff);
  for (const auto& h : hb) out.push_back(to_q(h));
  for (std::size_t a = 0; a < hb.size(); ++a)
    for (std::size_t b = a; b < hb.size(); ++b) out.push_back(to_q(ZVector(hb[a] + hb[b])));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(0, 4);
  for (std::size_t k = 0; k < random_count; ++k) {
    QVector d(z.n_rays());
    for (auto& x : d) x = coef(rng);
    out.push_back(z.class_of(d));
  }
  return out;
}

}  // namespace pdcox
