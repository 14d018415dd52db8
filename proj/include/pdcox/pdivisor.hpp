#pragma once

#include "pdcox/toric.hpp"

#include <map>
#include <memory>

namespace pdcox {

/** T-invariant Q-divisor on the base: one multiplicity per base ray. */
struct InvariantDivisor {
  QVector multiplicities;
  bool operator==(const InvariantDivisor&) const = default;
};

/**
 * Polyhedral divisor sum_E Delta_E (x) D_E on a toric base Y with tail cone sigma.
 * Only coefficients different from sigma itself are stored.
 */
class PDivisor {
 public:
  PDivisor() = default;
  PDivisor(std::shared_ptr<const ToricVariety> base, RationalCone tail)
      : base_(std::move(base)), tail_(std::move(tail)), trivial_(TailedPolyhedron::from_cone(tail_)) {}

  const ToricVariety& base() const { return *base_; }
  std::shared_ptr<const ToricVariety> base_ptr() const { return base_; }
  const RationalCone& tail() const { return tail_; }
  std::size_t torus_rank() const { return tail_.ambient_dim(); }
  const std::map<std::size_t, TailedPolyhedron>& nontrivial() const { return coeffs_; }

  const TailedPolyhedron& coefficient(std::size_t e) const {
    auto it = coeffs_.find(e);
    return it == coeffs_.end() ? trivial_ : it->second;
  }

  void set_coefficient(std::size_t e, TailedPolyhedron delta) {
    if (e >= base_->n_rays()) throw Error(ErrorKind::InvalidInput, "coefficient for unknown base ray");
    if (delta.ambient_dim() != torus_rank()) throw Error(ErrorKind::DimensionMismatch, "coefficient dimension");
    if (delta.is_empty() || delta.tail() != tail_)
      throw Error(ErrorKind::InvalidInput, "coefficient tail differs from the p-divisor tail");
    if (delta == trivial_)
      coeffs_.erase(e);
    else
      coeffs_[e] = std::move(delta);
  }

  /** D(u) = sum_E min<Delta_E, u> D_E, or nullopt when u is outside the dual of the tail. */
  std::optional<InvariantDivisor> evaluate(const QVector& u) const {
    if (u.size() != torus_rank()) throw Error(ErrorKind::DimensionMismatch, "evaluate: covector length");
    if (!tail_.dual().contains(u)) return std::nullopt;
    InvariantDivisor d{QVector(base_->n_rays(), Rational(0))};
    for (const auto& [e, delta] : coeffs_) d.multiplicities[e] = eval_min(delta, u).value;
    return d;
  }

  bool operator==(const PDivisor& o) const {
    return base_->fan() == o.base_->fan() && tail_ == o.tail_ && coeffs_ == o.coeffs_;
  }

 private:
  std::shared_ptr<const ToricVariety> base_;
  RationalCone tail_;
  TailedPolyhedron trivial_;
  std::map<std::size_t, TailedPolyhedron> coeffs_;
};

struct ProperReport {
  bool passed = true;
  std::vector<QVector> semiample_points;
  std::vector<QVector> big_points;
  std::vector<std::pair<QVector, std::string>> failures;
};

/**
 * Semiample at the Hilbert basis of the weight cone, big at the sum of its
 * rays and at the extra interior points supplied by the caller.
 */
inline ProperReport is_proper_pdivisor(const PDivisor& d, const std::vector<QVector>& interior_samples = {}) {
  const ToricVariety& y = d.base();
  require_complete(y);
  ProperReport rep;
  const RationalCone weights = d.tail().dual();
  auto class_at = [&](const QVector& u) { return y.class_of(d.evaluate(u)->multiplicities); };
  for (const auto& h : hilbert_basis(weights)) {
    QVector u = to_q(h);
    rep.semiample_points.push_back(u);
    if (!is_semiample(y, class_at(u))) rep.failures.push_back({u, "not semiample"});
  }
  QVector bary = zero_q(d.torus_rank());
  for (const auto& r : weights.rays()) bary = bary + to_q(r);
  rep.big_points.push_back(bary);
  for (const auto& u : interior_samples) {
    if (!weights.contains_relative_interior(u))
      throw Error(ErrorKind::InvalidInput, "bigness sample is not interior to the weight cone");
    rep.big_points.push_back(u);
  }
  for (const auto& u : rep.big_points)
    if (!is_big(y, class_at(u))) rep.failures.push_back({u, "not big"});
  rep.passed = rep.failures.empty();
  return rep;
}

/** Per base ray E a vector v_E in N_Q; Delta_E moves to Delta_E + v_E. */
using DivisorShift = std::map<std::size_t, QVector>;

inline PDivisor translate_by_principal(const PDivisor& d, const DivisorShift& shift) {
  PDivisor out(d.base_ptr(), d.tail());
  for (std::size_t e = 0; e < d.base().n_rays(); ++e) {
    auto it = shift.find(e);
    if (it == shift.end()) {
      if (d.nontrivial().count(e)) out.set_coefficient(e, d.coefficient(e));
      continue;
    }
    if (it->second.size() != d.torus_rank()) throw Error(ErrorKind::DimensionMismatch, "shift vector length");
    out.set_coefficient(e, translate(d.coefficient(e), it->second));
  }
  for (const auto& [e, v] : shift)
    if (e >= d.base().n_rays()) throw Error(ErrorKind::InvalidInput, "shift names an unknown base ray");
  return out;
}

inline DivisorShift negate(const DivisorShift& s) {
  DivisorShift out;
  for (const auto& [e, v] : s) out[e] = -v;
  return out;
}

struct SpecialFiber {
  TailedPolyhedron polyhedron;
  std::size_t vertex_count = 0;
};

/** Delta_y = tail + sum of Delta_E over the rays E of tau (tau given by ray indices). */
inline SpecialFiber special_fiber(const PDivisor& d, std::vector<std::size_t> tau) {
  std::sort(tau.begin(), tau.end());
  const Fan& f = d.base().fan();
  bool found = tau.empty();
  for (const auto& c : f.cones)
    if (std::includes(c.begin(), c.end(), tau.begin(), tau.end())) found = true;
  if (!found) throw Error(ErrorKind::ConeNotInFan, "cone is not in the fan of the base");
  TailedPolyhedron p = TailedPolyhedron::from_cone(d.tail());
  for (auto e : tau) p = minkowski_sum(p, d.coefficient(e));
  return {p, p.vertices().size()};
}

}  // namespace pdcox
