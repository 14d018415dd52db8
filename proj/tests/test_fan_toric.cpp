#include "pdcox/toric.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

using namespace pdcox;
using namespace pdcox::testing;

namespace {

const char* kSurfaces[] = {"p2", "p1xp1", "s1", "s2"};
const char* kAll[] = {"p2", "p1xp1", "s1", "s2", "bl2p3"};

QVector cls(const ToricVariety& z, std::initializer_list<std::pair<const char*, long>> terms) {
  std::vector<std::pair<std::string, Rational>> t;
  for (auto [l, c] : terms) t.push_back({l, Rational(c)});
  return z.class_of_labels(t);
}

Fan cyclic_fan(std::vector<ZVector> rays) {
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t k = 0; k < rays.size(); ++k) cones.push_back({k, (k + 1) % rays.size()});
  return make_fan(2, rays, cones);
}

}  // namespace

TEST(Fan, CanonicalOrderAndLabels) {
  auto doc = fixture("s1");
  EXPECT_EQ(doc.fan.n_rays(), 5u);
  EXPECT_EQ(doc.fan.cones.size(), 5u);
  EXPECT_EQ(doc.fan.rays.front(), zv({-1, -1}));
  EXPECT_EQ(doc.fan.labels.front(), "B");
  EXPECT_EQ(doc.fan.rays[doc.fan.ray_index("E1")], zv({1, 1}));
}

TEST(Fan, RejectsBadInput) {
  EXPECT_THROW(make_fan(2, {zv({2, 0})}, {{0}}), Error);
  EXPECT_THROW(make_fan(2, {zv({1, 0}), zv({1, 0})}, {{0, 1}}), Error);
  EXPECT_THROW(make_fan(2, {zv({1, 0})}, {{0, 3}}), Error);
}

TEST(Fan, CompletenessAndSimpliciality) {
  auto p2 = fixture("p2").fan;
  EXPECT_TRUE(is_complete(p2));
  EXPECT_TRUE(is_simplicial(p2));
  EXPECT_TRUE(is_valid_fan(p2));
  auto quadrant = make_fan(2, {zv({1, 0}), zv({0, 1})}, {{0, 1}});
  EXPECT_FALSE(is_complete(quadrant));
  auto s2 = fixture("s2").fan;
  EXPECT_TRUE(is_complete(s2));
  EXPECT_TRUE(is_simplicial(s2));
  auto bl = fixture("bl2p3").fan;
  EXPECT_TRUE(is_complete(bl));
  EXPECT_TRUE(is_valid_fan(bl));
  // overlapping cones are not a fan
  auto bad = make_fan(2, {zv({1, 0}), zv({0, 1}), zv({1, 1})}, {{0, 1}, {0, 2}});
  EXPECT_FALSE(is_valid_fan(bad));
  // a square cone is not simplicial
  auto sq = make_fan(3, {zv({1, 1, 1}), zv({-1, 1, 1}), zv({1, -1, 1}), zv({-1, -1, 1})}, {{0, 1, 2, 3}});
  EXPECT_FALSE(is_simplicial(sq));
}

TEST(BuildToric, ProjectivePlane) {
  auto z = fixture_toric("p2");
  EXPECT_EQ(z.class_rank(), 1u);
  EXPECT_EQ(z.seq().deg, to_z(qm({{1, 1, 1}})));
  EXPECT_TRUE(z.seq().identities_hold());
}

TEST(BuildToric, S1HasRankThree) {
  auto z = fixture_toric("s1");
  EXPECT_EQ(z.class_rank(), 3u);
  EXPECT_TRUE(z.seq().identities_hold());
  // B = E0 + E1, A = E0 + E2
  EXPECT_EQ(cls(z, {{"B", 1}}), cls(z, {{"E0", 1}, {"E1", 1}}));
  EXPECT_EQ(cls(z, {{"A", 1}}), cls(z, {{"E0", 1}, {"E2", 1}}));
}

TEST(BuildToric, TorsionDetection) {
  // (1,1) and (-1,0) already span Z^2, so this class group is free of rank 1
  auto free = build_toric(cyclic_fan({zv({1, 1}), zv({1, -1}), zv({-1, 0})}));
  EXPECT_EQ(free.class_rank(), 1u);
  EXPECT_EQ(cokernel(LatticeMap(free.seq().div)), (Cokernel{1, {}}));
  // (+-1, +-1) span an index-2 sublattice: torsion Z/2
  try {
    build_toric(cyclic_fan({zv({1, 1}), zv({-1, 1}), zv({-1, -1}), zv({1, -1})}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TorsionClassGroup);
  }
}

TEST(BuildToric, Errors) {
  auto sq = make_fan(3, {zv({1, 1, 1}), zv({-1, 1, 1}), zv({1, -1, 1}), zv({-1, -1, 1})}, {{0, 1, 2, 3}});
  try {
    build_toric(sq);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSimplicial);
  }
  auto line = make_fan(2, {zv({1, 0}), zv({-1, 0})}, {{0}, {1}});
  try {
    build_toric(line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RaysDoNotSpan);
  }
}

TEST(BuildToric, CustomSectionAndBasis) {
  auto doc = fixture("p2");
  // rays sorted: (-1,-1), (0,1), (1,0)
  IntMatrix s = to_z(qm({{0, 0}, {0, 1}, {1, 0}}));
  auto z = doc.toric(s);
  EXPECT_EQ(z.seq().s, s);
  EXPECT_TRUE(z.seq().identities_hold());
  try {
    doc.toric(to_z(qm({{0, 0}, {0, 1}, {0, 0}})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SectionInvalid);
  }
  auto s1 = fixture("s1");
  ToricVariety::Options opt;
  opt.class_basis = std::vector<std::size_t>{s1.fan.ray_index("E0"), s1.fan.ray_index("E1"), s1.fan.ray_index("B")};
  try {
    build_toric(s1.fan, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBasis);
  }
}

TEST(Cones, EffectiveAndNef) {
  auto p2 = fixture_toric("p2");
  EXPECT_EQ(effective_cone(p2), RationalCone::orthant(1));
  auto s1 = fixture_toric("s1");
  EXPECT_EQ(effective_cone(s1), RationalCone::from_generators(3, {cls(s1, {{"E0", 1}}), cls(s1, {{"E1", 1}}),
                                                                  cls(s1, {{"E2", 1}})}));
  auto s2 = fixture_toric("s2");
  EXPECT_EQ(effective_cone(s2), RationalCone::from_generators(3, {cls(s2, {{"E0", 1}}), cls(s2, {{"E1", 1}}),
                                                                  cls(s2, {{"E2", 1}})}));
  auto h = cls(s1, {{"E0", 1}, {"E1", 1}, {"E2", 1}});
  EXPECT_EQ(nef_cone(s1), RationalCone::from_generators(3, {cls(s1, {{"A", 1}}), cls(s1, {{"B", 1}}), h}));
  EXPECT_EQ(nef_cone(s2), RationalCone::from_generators(3, {cls(s2, {{"A", 1}}), cls(s2, {{"B", 1}}),
                                                             cls(s2, {{"E0", 2}, {"E1", 1}, {"E2", 2}})}));
  auto quadrant = build_toric(make_fan(2, {zv({1, 0}), zv({0, 1})}, {{0, 1}}));
  try {
    effective_cone(quadrant);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotComplete);
  }
}

TEST(Cones, NefBigExamples) {
  auto p2 = fixture_toric("p2");
  EXPECT_TRUE(is_nef(p2, qv({1})));
  EXPECT_TRUE(is_big(p2, qv({1})));
  EXPECT_TRUE(is_semiample(p2, qv({1})));
  EXPECT_TRUE(is_ample(p2, qv({1})));
  EXPECT_FALSE(is_big(p2, qv({0})));
  auto s1 = fixture_toric("s1");
  EXPECT_FALSE(is_nef(s1, cls(s1, {{"E1", 1}})));
  EXPECT_TRUE(is_nef(s1, cls(s1, {{"A", 1}})));
  EXPECT_FALSE(is_ample(s1, cls(s1, {{"A", 1}})));
  EXPECT_FALSE(is_big(s1, cls(s1, {{"A", 1}})));
  EXPECT_TRUE(is_big(s1, cls(s1, {{"A", 1}, {"B", 1}})));
}

TEST(Cones, NefAgreesWithMoriDual) {
  for (auto name : kAll) {
    auto z = fixture_toric(name);
    auto nef = nef_cone(z);
    auto eff = effective_cone(z);
    const std::size_t r = z.class_rank();
    // grid of classes in [-2, 2]^r
    std::vector<long> c(r, -2);
    for (;;) {
      QVector u;
      for (auto x : c) u.push_back(x);
      EXPECT_EQ(is_nef(z, u), nef.contains(u)) << name;
      EXPECT_EQ(is_big(z, u), eff.contains_relative_interior(u)) << name;
      std::size_t k = 0;
      while (k < r && c[k] == 2) c[k++] = -2;
      if (k == r) break;
      ++c[k];
    }
    EXPECT_TRUE(z.seq().identities_hold()) << name;
  }
}

TEST(Surface, IntersectionMatrices) {
  auto s1d = fixture("s1");
  auto s1 = s1d.toric();
  std::vector<std::size_t> b1{s1d.fan.ray_index("E0"), s1d.fan.ray_index("E1"), s1d.fan.ray_index("E2")};
  EXPECT_EQ(surface_intersection_matrix(s1, b1), qm({{-1, 1, 1}, {1, -1, 0}, {1, 0, -1}}));
  // S2 from its fan: E0 meets E2 and B, E1 meets A and E2
  auto s2d = fixture("s2");
  auto s2 = s2d.toric();
  std::vector<std::size_t> b2{s2d.fan.ray_index("E0"), s2d.fan.ray_index("E1"), s2d.fan.ray_index("E2")};
  auto g2 = surface_intersection_matrix(s2, b2);
  EXPECT_EQ(g2, qm({{-1, 0, 1}, {0, -2, 1}, {1, 1, -1}}));
  EXPECT_EQ(determinant(g2), Rational(1));
  auto p2d = fixture("p2");
  EXPECT_EQ(surface_intersection_matrix(p2d.toric(), {0}), qm({{1}}));
  try {
    surface_intersection_matrix(s1, {b1[0], b1[0], b1[1]});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBasis);
  }
  try {
    surface_intersection_matrix(fixture_toric("bl2p3"), {0, 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSurface);
  }
}

TEST(Surface, SingularSurfaceHasRationalNumbers) {
  // weighted projective plane P(1,1,2): rays (1,0), (0,1), (-1,-2)
  auto z = build_toric(cyclic_fan({zv({1, 0}), zv({0, 1}), zv({-1, -2})}));
  auto sf = surface_form(z);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(sf.ray_form(i, j), sf.ray_form(j, i));
  // principal divisors pair to zero with everything
  for (const auto& m : {qv({1, 0}), qv({0, 1})}) {
    QVector d(3);
    for (std::size_t k = 0; k < 3; ++k) d[k] = dot(m, z.fan().rays[k]);
    EXPECT_TRUE(is_zero(sf.ray_form * d));
  }
  bool has_fraction = false;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) has_fraction = has_fraction || !is_integral(sf.ray_form(i, j));
  EXPECT_TRUE(has_fraction);
}

TEST(Surface, ExceptionalRays) {
  EXPECT_TRUE(exceptional_rays(fixture_toric("p2")).empty());
  EXPECT_TRUE(exceptional_rays(fixture_toric("p1xp1")).empty());
  for (auto name : {"s1", "s2"}) {
    auto d = fixture(name);
    auto ex = exceptional_rays(d.toric());
    std::vector<std::string> labels;
    for (auto k : ex) labels.push_back(d.fan.labels[k]);
    std::sort(labels.begin(), labels.end());
    EXPECT_EQ(labels, (std::vector<std::string>{"E0", "E1", "E2"})) << name;
  }
  auto d2 = fixture("s2");
  auto sf = surface_form(d2.toric());
  auto e1 = d2.fan.ray_index("E1");
  EXPECT_EQ(sf.ray_form(e1, e1), Rational(-2));
}

TEST(Surface, HodgeIndex) {
  for (auto name : kSurfaces) {
    auto z = fixture_toric(name);
    auto sf = surface_form(z);
    EXPECT_EQ(sf.class_form, sf.class_form.transpose()) << name;
    auto sig = signature(sf.class_form);
    EXPECT_EQ(sig.positive, 1u) << name;
    EXPECT_EQ(sig.negative, z.class_rank() - 1) << name;
    EXPECT_EQ(sig.zero, 0u) << name;
  }
}
