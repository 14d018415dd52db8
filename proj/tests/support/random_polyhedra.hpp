#pragma once

#include "pdcox/polyhedron.hpp"

#include <random>

namespace pdcox::testing {

inline Rational random_rational(std::mt19937& rng, int lo, int hi, int max_den) {
  std::uniform_int_distribution<int> n(lo * max_den, hi * max_den), d(1, max_den);
  return Rational(n(rng), d(rng));
}

inline QVector random_qvector(std::mt19937& rng, std::size_t dim, int lo, int hi, int max_den = 3) {
  QVector v(dim);
  for (auto& x : v) x = random_rational(rng, lo, hi, max_den);
  return v;
}

inline QVector random_nonzero_zvector(std::mt19937& rng, std::size_t dim, int lo, int hi) {
  std::uniform_int_distribution<int> c(lo, hi);
  for (;;) {
    QVector v(dim);
    for (auto& x : v) x = c(rng);
    if (!is_zero(v)) return v;
  }
}

/** Random polyhedron of dimension <= dim that contains the origin. */
inline TailedPolyhedron random_polyhedron_with_origin(std::mt19937& rng, std::size_t dim) {
  std::uniform_int_distribution<int> nv(1, 5), nt(0, 2), coin(0, 9);
  std::vector<QVector> verts, tail, lin;
  verts.push_back(zero_q(dim));
  int k = nv(rng);
  for (int i = 0; i < k; ++i) verts.push_back(random_qvector(rng, dim, -3, 3));
  if (coin(rng) < 4) {
    // make the origin interior-ish: add the negated barycenter direction
    QVector s = zero_q(dim);
    for (const auto& v : verts) s = s + v;
    verts.push_back(-s);
  }
  int t = nt(rng);
  for (int i = 0; i < t; ++i) tail.push_back(random_nonzero_zvector(rng, dim, -2, 2));
  if (coin(rng) == 0) lin.push_back(random_nonzero_zvector(rng, dim, -1, 1));
  return TailedPolyhedron::from_generators(dim, verts, tail, lin);
}

}  // namespace pdcox::testing
