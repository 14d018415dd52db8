#pragma once

#include "pdcox/cone.hpp"

#include <numeric>
#include <string>

namespace pdcox {

/** Fan given by primitive rays (sorted lexicographically) and maximal cones as ray-index sets. */
struct Fan {
  std::size_t lattice_rank = 0;
  std::vector<ZVector> rays;
  std::vector<std::vector<std::size_t>> cones;
  std::vector<std::string> labels;

  std::size_t n_rays() const { return rays.size(); }

  std::size_t ray_index(const std::string& label) const {
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (labels[k] == label) return k;
    throw Error(ErrorKind::InvalidInput, "unknown ray label: " + label);
  }
  std::optional<std::size_t> find_ray(const ZVector& v) const {
    auto it = std::lower_bound(rays.begin(), rays.end(), v);
    if (it != rays.end() && *it == v) return static_cast<std::size_t>(it - rays.begin());
    return std::nullopt;
  }

  RationalCone cone(std::size_t k) const {
    std::vector<ZVector> g;
    for (auto r : cones[k]) g.push_back(rays[r]);
    return RationalCone::from_generators(lattice_rank, g);
  }

  bool operator==(const Fan&) const = default;
};

/**
 * Validates and canonicalizes: rays must be primitive, nonzero and distinct;
 * rays are sorted with labels following, cones sorted and deduplicated.
 * Missing labels become "r0", "r1", ... in canonical order.
 */
inline Fan make_fan(std::size_t rank, std::vector<ZVector> rays, std::vector<std::vector<std::size_t>> cones,
                    std::vector<std::string> labels = {}) {
  for (const auto& r : rays) {
    if (r.size() != rank) throw Error(ErrorKind::DimensionMismatch, "ray length differs from lattice rank");
    if (is_zero(r) || !is_primitive(r)) throw Error(ErrorKind::InvalidInput, "ray is not primitive");
  }
  if (!labels.empty() && labels.size() != rays.size())
    throw Error(ErrorKind::InvalidInput, "label count differs from ray count");
  {
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorKind::InvalidInput, "ray labels are not unique");
  }
  std::vector<std::size_t> order(rays.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rays[a] < rays[b]; });
  std::vector<std::size_t> where(rays.size());
  Fan f;
  f.lattice_rank = rank;
  for (std::size_t k = 0; k < order.size(); ++k) {
    where[order[k]] = k;
    f.rays.push_back(rays[order[k]]);
    if (k > 0 && f.rays[k] == f.rays[k - 1]) throw Error(ErrorKind::InvalidInput, "duplicate ray");
    f.labels.push_back(labels.empty() ? "r" + std::to_string(k) : labels[order[k]]);
  }
  std::set<std::vector<std::size_t>> cs;
  for (std::size_t c = 0; c < cones.size(); ++c) {
    std::vector<std::size_t> m;
    for (auto i : cones[c]) {
      if (i >= rays.size())
        throw Error(ErrorKind::InvalidInput, "cone " + std::to_string(c) + " has ray index out of range");
      m.push_back(where[i]);
    }
    std::sort(m.begin(), m.end());
    if (std::adjacent_find(m.begin(), m.end()) != m.end())
      throw Error(ErrorKind::InvalidInput, "cone " + std::to_string(c) + " repeats a ray");
    cs.insert(m);
  }
  f.cones.assign(cs.begin(), cs.end());
  return f;
}

inline bool is_simplicial(const Fan& f) {
  for (const auto& c : f.cones) {
    std::vector<QVector> g;
    for (auto r : c) g.push_back(to_q(f.rays[r]));
    if (rank_of_vectors(g, f.lattice_rank) != c.size()) return false;
  }
  return true;
}

/** Ray-index sets of the facets of maximal cone k. */
inline std::vector<std::vector<std::size_t>> cone_facets(const Fan& f, std::size_t k) {
  auto c = f.cone(k);
  std::vector<std::vector<std::size_t>> out;
  for (const auto& n : c.facets()) {
    std::vector<std::size_t> idx;
    for (auto r : f.cones[k])
      if (dot(n, f.rays[r]) == 0) idx.push_back(r);
    out.push_back(idx);
  }
  return out;
}

/** Full-dimensional maximal cones, each facet shared by exactly two of them. */
inline bool is_complete(const Fan& f) {
  if (f.cones.empty()) return false;
  std::map<std::vector<std::size_t>, int> count;
  for (std::size_t k = 0; k < f.cones.size(); ++k) {
    auto c = f.cone(k);
    if (!c.is_full_dimensional() || !c.is_pointed()) return false;
    for (auto& fa : cone_facets(f, k)) ++count[fa];
  }
  for (const auto& [fa, n] : count)
    if (n != 2) return false;
  return true;
}

/** Every maximal cone pointed and pairwise intersections are common faces. */
inline bool is_valid_fan(const Fan& f) {
  std::vector<RationalCone> cs;
  for (std::size_t k = 0; k < f.cones.size(); ++k) {
    cs.push_back(f.cone(k));
    if (!cs.back().is_pointed()) return false;
  }
  auto is_face_rays = [&](std::size_t k, const std::vector<std::size_t>& sub) {
    // the sub-ray set must be closed: rays of cone k tight on all facets tight on sub
    for (auto r : f.cones[k]) {
      if (std::find(sub.begin(), sub.end(), r) != sub.end()) continue;
      bool tight_all = true;
      for (const auto& n : cs[k].facets()) {
        bool tight_sub = std::all_of(sub.begin(), sub.end(), [&](std::size_t s) { return dot(n, f.rays[s]) == 0; });
        if (tight_sub && dot(n, f.rays[r]) != 0) tight_all = false;
      }
      if (tight_all) return false;
    }
    return true;
  };
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b) {
      std::vector<std::size_t> common;
      std::set_intersection(f.cones[a].begin(), f.cones[a].end(), f.cones[b].begin(), f.cones[b].end(),
                            std::back_inserter(common));
      std::vector<ZVector> g;
      for (auto r : common) g.push_back(f.rays[r]);
      if (cs[a].intersect(cs[b]) != RationalCone::from_generators(f.lattice_rank, g)) return false;
      if (!is_face_rays(a, common) || !is_face_rays(b, common)) return false;
    }
  return true;
}

/** Wall between maximal cones sigma = tau + {p} and sigma' = tau + {q} of a simplicial fan. */
struct Wall {
  std::vector<std::size_t> tau;
  std::size_t sigma = 0, sigma_prime = 0;
  std::size_t p = 0, q = 0;
  /** Linear relation c with sum_k c_k a_k = 0, c_q = 1, c_p > 0. */
  QVector relation;
};

inline std::vector<Wall> walls(const Fan& f) {
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> owners;
  for (std::size_t k = 0; k < f.cones.size(); ++k)
    for (auto& fa : cone_facets(f, k)) owners[fa].push_back(k);
  std::vector<Wall> out;
  for (const auto& [tau, ks] : owners) {
    if (ks.size() != 2) continue;
    Wall w;
    w.tau = tau;
    w.sigma = ks[0];
    w.sigma_prime = ks[1];
    for (auto r : f.cones[ks[0]])
      if (!std::binary_search(tau.begin(), tau.end(), r)) w.p = r;
    for (auto r : f.cones[ks[1]])
      if (!std::binary_search(tau.begin(), tau.end(), r)) w.q = r;
    const auto& sig = f.cones[ks[0]];
    std::vector<QVector> cols;
    for (auto r : sig) cols.push_back(to_q(f.rays[r]));
    auto mu = solve(QMatrix::from_cols(cols, f.lattice_rank), to_q(f.rays[w.q]));
    if (!mu) throw Error(ErrorKind::NotSimplicial, "wall relation: maximal cone is not full-dimensional");
    w.relation.assign(f.n_rays(), Rational(0));
    w.relation[w.q] = 1;
    for (std::size_t j = 0; j < sig.size(); ++j) w.relation[sig[j]] -= (*mu)[j];
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace pdcox
