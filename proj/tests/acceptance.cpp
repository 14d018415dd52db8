// Acceptance checks. One line per criterion: "AC<n> PASS|FAIL <what> | <detail>".
// All comparisons are exact (tolerance 0); runtime limits are wall clock.

#include "pdcox/cli.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_polyhedra.hpp"
#include "support/random_surfaces.hpp"

#include <chrono>
#include <cstring>
#include <functional>

using namespace pdcox;
using namespace pdcox::testing;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  const char* what;
  double limit_s;  // 0: no runtime limit
  std::function<Verdict()> run;
};

std::string show(const QVector& v) { return io::to_json(v).dump(); }
std::string show(const QMatrix& m) { return io::to_json(m).dump(); }

QVector cls(const ToricVariety& z, const char* label) { return z.ray_class(z.fan().ray_index(label)); }

std::set<QVector> vertex_set(const TailedPolyhedron& p) {
  auto v = p.vertices();
  return {v.begin(), v.end()};
}

/** The coefficient document printed by the CLI, read back in class coordinates. */
std::map<std::string, TailedPolyhedron> cli_class_view(const std::string& name) {
  std::ostringstream out, err;
  std::istringstream in;
  if (cli::run_cli({"cox", "pdiv", fixture_path(name)}, out, err, in) != 0) throw std::runtime_error(err.str());
  auto j = Json::parse(out.str());
  std::map<std::string, TailedPolyhedron> m;
  for (const auto& rec : j["cox"]["class_view"]) m[rec["ray"].get<std::string>()] = polyhedron_from_json(rec);
  return m;
}

Verdict ac1() {
  Verdict v;
  auto z = fixture_toric("s1");
  auto view = cli_class_view("s1");
  QVector h = qv({1, 1, 1});  // [H] = [E0] + [E1] + [E2]
  auto nef = RationalCone::from_generators(3, {cls(z, "A"), cls(z, "B"), h});
  v.require(nef_cone(z) == nef, "Nef(S1) is not generated by [A],[B],[H]");
  v.require(view.size() == 3, "expected three nontrivial coefficients, got " + std::to_string(view.size()));
  for (auto label : {"E0", "E1", "E2"}) {
    auto expect = TailedPolyhedron::from_generators(3, {zero_q(3), cls(z, label)}, nef.ray_list_q());
    v.require(view.count(label) && view[label] == expect, std::string("Delta_") + label + " differs");
  }
  v.detail = v.pass ? "Delta_Ei = conv{0,[Ei]} + cone([A],[B],[H]) for i=0,1,2" : v.detail;
  return v;
}

Verdict ac2() {
  Verdict v;
  auto z = fixture_toric("s2");
  auto view = cli_class_view("s2");
  const QVector c = qv({2, 1, 2});
  v.require(nef_cone(z) == RationalCone::from_generators(3, {cls(z, "A"), cls(z, "B"), c}),
            "Nef(S2) is not generated by [A],[B],[C]");
  const QVector o = zero_q(3);
  std::map<std::string, std::set<QVector>> expect{
      {"E0", {o, qv({1, 0, 0})}},
      {"E1", {o, QVector{Rational(0), Rational(1, 2), Rational(0)}, qv({0, 1, 1})}},
      {"E2", {o, qv({0, 0, 1}), qv({0, 1, 2})}}};
  for (const auto& [label, verts] : expect) {
    if (!view.count(label)) {
      v.require(false, "no coefficient for " + label);
      continue;
    }
    v.require(vertex_set(view[label]) == verts, "compact part of Delta_" + label + " differs");
    v.require(view[label].tail() == nef_cone(z), "tail of Delta_" + label + " is not Nef(S2)");
  }
  v.detail = v.pass ? "compact parts {0,[E0]}, {0,1/2[E1],[E1]+[E2]}, {0,[E2],[E1]+2[E2]}; C=(2,1,2)" : v.detail;
  return v;
}

Verdict ac3() {
  Verdict v;
  auto check = [&](const char* name, const QMatrix& printed) {
    auto s = fixture_toric(name);
    std::vector<std::size_t> basis;
    for (auto l : {"E0", "E1", "E2"}) basis.push_back(s.fan().ray_index(l));
    QMatrix got = surface_intersection_matrix(s, basis);
    v.require(got == printed, std::string(name) + ": computed " + show(got) + ", expected " + show(printed) +
                                  (determinant(printed) == 0 ? " (expected matrix is singular)" : ""));
  };
  check("s1", qm({{-1, 1, 1}, {1, -1, 0}, {1, 0, -1}}));
  check("s2", qm({{-1, 1, 0}, {1, -2, 1}, {0, 1, -1}}));
  if (v.pass) v.detail = "both matrices match";
  return v;
}

Verdict ac4() {
  Verdict v;
  // sum_k v_k (w_k . x) = x for every basis class x, with the pairing read off the fan
  auto holds = [](const ToricVariety& s, const std::vector<std::pair<QVector, QVector>>& terms) {
    const auto sf = surface_form(s);
    for (std::size_t j = 0; j < s.class_rank(); ++j) {
      QVector x = unit_q(s.class_rank(), j), acc = zero_q(s.class_rank());
      for (const auto& [a, w] : terms) acc = acc + scale(intersect_classes(sf, w, x), a);
      if (acc != x) return false;
    }
    return true;
  };
  auto s1 = fixture_toric("s1");
  v.require(holds(s1, {{qv({1, 1, 1}), cls(s1, "E0")}, {cls(s1, "A"), cls(s1, "E1")}, {cls(s1, "B"), cls(s1, "E2")}}),
            "S1: [H](x)[E0] + [A](x)[E1] + [B](x)[E2] is not the identity");
  auto s2 = fixture_toric("s2");
  v.require(cls(s2, "A") == qv({1, 0, 1}) && cls(s2, "B") == qv({1, 1, 2}), "S2: [A] or [B] differs");
  v.require(holds(s2, {{cls(s2, "A"), cls(s2, "E1")}, {qv({2, 1, 2}), cls(s2, "E2")}, {cls(s2, "B"), cls(s2, "E0")}}),
            "S2: [A](x)[E1] + [C](x)[E2] + [B](x)[E0] is not the identity");
  if (v.pass) v.detail = "S1 and S2 identities hold";
  return v;
}

Verdict ac5() {
  Verdict v;
  std::vector<std::pair<std::string, ToricVariety>> surfaces;
  for (auto n : {"s1", "s2", "p1xp1"}) surfaces.push_back({n, fixture_toric(n)});
  std::mt19937 rng(20240611);
  for (int k = 0; k < 20; ++k) surfaces.push_back({"random" + std::to_string(k), random_smooth_surface(rng, 10)});
  std::size_t checks = 0, min_samples = SIZE_MAX, rays = 0;
  for (const auto& [name, s] : surfaces) {
    v.require(s.n_rays() <= 10, name + " has more than 10 rays");
    auto c = cox_pdivisor(s);
    auto samples = sample_effective_classes(s, 7, 100);
    std::vector<QVector> lattice;
    for (const auto& u : samples)
      if (all_integral(u)) lattice.push_back(u);
    min_samples = std::min(min_samples, lattice.size());
    for (auto e : exceptional_rays(s)) {
      ++rays;
      for (const auto& u : lattice) {
        Extended ev = eval_min(c.delta(e), u);
        Rational lp = stable_mult_lp(s, unit_q(s.n_rays(), e), u);
        ++checks;
        v.require(ev.is_finite() && ev.value == -lp,
                  name + ": ray " + s.fan().labels[e] + " at " + show(u) + ": eval_min " + ev.str() +
                      ", stable_mult " + to_string(lp));
      }
    }
  }
  v.require(min_samples >= 100, "fewer than 100 samples on some surface");
  if (v.pass)
    v.detail = std::to_string(surfaces.size()) + " surfaces, " + std::to_string(rays) + " exceptional rays, " +
               std::to_string(checks) + " comparisons, >= " + std::to_string(min_samples) + " classes each";
  return v;
}

Verdict ac6() {
  Verdict v;
  std::mt19937 rng(6);
  std::size_t n = 0, vertex_checks = 0;
  for (std::size_t dim = 1; dim <= 4; ++dim)
    for (int k = 0; k < 260; ++k, ++n) {
      auto p = random_polyhedron_with_origin(rng, dim);
      auto d = dual_polyhedron(p);
      v.require(dual_polyhedron(d) == p, "(D^v)^v != D in dimension " + std::to_string(dim));
      v.require(d.tail() == head_and_tail(p).first.dual(), "tail(D^v) != head(D)^v in dimension " + std::to_string(dim));
      // brute-force vertex enumeration of D^v = {u : <v,u> >= -1, <r,u> >= 0, <l,u> = 0}
      if (p.dimension() == static_cast<long>(dim)) {
        std::vector<std::pair<QVector, Rational>> ineq;
        for (const auto& x : p.vertices()) ineq.push_back({x, Rational(-1)});
        for (const auto& r : p.tail_rays()) ineq.push_back({r, Rational(0)});
        for (const auto& l : p.lineality()) {
          ineq.push_back({l, Rational(0)});
          ineq.push_back({-l, Rational(0)});
        }
        v.require(oracle::vertices(dim, ineq) == vertex_set(d), "vertices of D^v differ from enumeration");
        ++vertex_checks;
      }
    }
  if (v.pass)
    v.detail = std::to_string(n) + " polyhedra in dims 1..4, " + std::to_string(vertex_checks) +
               " dual vertex sets cross-checked";
  return v;
}

Verdict ac7() {
  Verdict v;
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::size_t trials = 0;
  for (auto name : {"s1", "s2"}) {
    auto doc = fixture(name);
    auto base = cox_pdivisor(doc.toric());
    const auto& seq0 = base.z->seq();
    for (int k = 0; k < 6; ++k, ++trials) {
      IntMatrix x(seq0.i.cols(), seq0.pi.rows());
      for (std::size_t a = 0; a < x.rows(); ++a)
        for (std::size_t b = 0; b < x.cols(); ++b) x(a, b) = coef(rng);
      IntMatrix s = seq0.s + seq0.i * x;
      auto c = cox_pdivisor(doc.toric(s));
      v.require(c.prime_part == base.prime_part, std::string(name) + ": coefficients changed with the section");
      const QMatrix iq = to_q(c.z->seq().i);
      for (std::size_t e = 0; e < c.n_y(); ++e) {
        // b(E) = e(E) - s(a(E)), then the shift solves i(beta) = b(E)
        QVector b = c.e.row(e) - to_q(s * c.y->fan().rays[e]);
        auto beta = solve(iq, b);
        v.require(beta.has_value() && all_integral(b), std::string(name) + ": b(E) is not in the image of i");
        if (beta) v.require(c.raw[e] == translate(c.delta(e), *beta), std::string(name) + ": raw != Delta + b(E)");
      }
    }
  }
  if (v.pass) v.detail = std::to_string(trials) + " random sections on S1 and S2";
  return v;
}

Verdict ac8() {
  Verdict v;
  std::size_t n = 0;
  for (auto name : {"p2", "p1xp1", "s1", "s2"}) {
    auto s = fixture_toric(name);
    const auto sf = surface_form(s);
    auto samples = sample_effective_classes(s, 8, 100);
    v.require(samples.size() >= 100, std::string(name) + ": fewer than 100 samples");
    for (const auto& d : samples) {
      auto z = zariski(s, d);
      ++n;
      QVector sum = z.positive;
      std::vector<std::size_t> supp;
      for (const auto& [k, a] : z.negative) {
        sum = sum + scale(a, s.ray_class(k));
        supp.push_back(k);
        v.require(a > 0 && intersect_classes(sf, z.positive, s.ray_class(k)) == 0,
                  std::string(name) + ": positive part not orthogonal at " + show(d));
      }
      v.require(sum == d, std::string(name) + ": parts do not sum to " + show(d));
      v.require(is_nef(s, z.positive), std::string(name) + ": positive part not nef at " + show(d));
      QMatrix g(supp.size(), supp.size());
      for (std::size_t a = 0; a < supp.size(); ++a)
        for (std::size_t b = 0; b < supp.size(); ++b) g(a, b) = sf.ray_form(supp[a], supp[b]);
      if (!supp.empty()) {
        auto sig = signature(g);
        v.require(sig.negative == supp.size(), std::string(name) + ": Gram matrix not negative definite at " + show(d));
      }
      for (std::size_t e = 0; e < s.n_rays(); ++e) {
        Rational a = z.negative.count(e) ? z.negative.at(e) : Rational(0);
        v.require(a == stable_mult_lp(s, unit_q(s.n_rays(), e), d), std::string(name) + ": a_i differs from the LP at " + show(d));
      }
    }
  }
  if (v.pass) v.detail = std::to_string(n) + " decompositions on P2, P1xP1, S1, S2";
  return v;
}

Verdict ac9() {
  Verdict v;
  auto z = fixture_toric("bl2p3");
  auto c = cox_pdivisor(z);
  const auto& sig = c.y->fan();
  const auto& f = z.fan();
  bool refines = true;
  for (std::size_t k = 0; k < sig.cones.size(); ++k) {
    auto sc = sig.cone(k);
    bool inside = false;
    for (std::size_t m = 0; m < f.cones.size() && !inside; ++m) inside = f.cone(m).contains(sc);
    refines = refines && inside;
  }
  v.require(refines && sig != f && sig.n_rays() > f.n_rays(), "Chow fan does not strictly refine the fan");
  v.require(c.y->class_rank() == 4, "Picard rank of Y is " + std::to_string(c.y->class_rank()));

  auto ch = mov_chambers(z);
  v.require(ch.size() == 2, "expected 2 chambers, got " + std::to_string(ch.size()));
  if (ch.size() == 2) v.require(!ch[0].nef.intersect(ch[1].nef).is_full_dimensional(), "chamber interiors meet");

  auto nef_y = nef_cone(*c.y);
  v.require(nef_y.dim() == 4, "Nef(Y) is not 4-dimensional");
  std::size_t sampled = 0;
  for (const auto& u : sample_effective_classes(z, 9, 60)) {
    ++sampled;
    v.require(retraction(c, u).nef, "retraction of " + show(u) + " is not nef on Y");
  }
  // each chamber maps onto a 3-dimensional face of Nef(Y)
  std::vector<RationalCone> faces;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    std::vector<QVector> img;
    for (const auto& r : ch[k].nef.ray_list_q()) img.push_back(retraction(c, r).y_class);
    auto face = RationalCone::from_generators(4, img);
    std::vector<QVector> tight;
    for (const auto& fct : nef_y.facets()) {
      bool all0 = true;
      for (const auto& x : img) all0 = all0 && dot(to_q(fct), x) == 0;
      if (all0) tight.push_back(to_q(fct));
    }
    std::vector<QVector> all_facets;
    for (const auto& fct : nef_y.facets()) all_facets.push_back(to_q(fct));
    auto smallest = RationalCone::from_inequalities(4, all_facets, tight);
    v.require(face == smallest, "chamber " + std::to_string(k) + " does not map onto a face of Nef(Y)");
    v.require(face.dim() == 3, "chamber " + std::to_string(k) + " maps to a face of dimension " + std::to_string(face.dim()));
    QVector mid = ch[k].nef.interior_point();
    v.require(face.contains_relative_interior(retraction(c, mid).y_class),
              "interior class of chamber " + std::to_string(k) + " misses the relative interior of its face");
    faces.push_back(face);
  }
  v.require(faces.size() == 2 && faces[0] != faces[1], "chambers map to the same face");
  if (v.pass)
    v.detail = "Sigma has " + std::to_string(sig.n_rays()) + " rays, rank Cl(Y)=4, 2 chambers onto two 3-faces, " +
               std::to_string(sampled) + " retractions nef";
  return v;
}

Verdict ac10() {
  Verdict v;
  for (auto name : {"p2", "p1xp1", "s1", "s2", "bl2p3"}) {
    auto c = cox_pdivisor(fixture_toric(name));
    auto eff = effective_cone(*c.z);
    std::vector<QVector> interior{eff.interior_point()};
    for (const auto& u : sample_effective_classes(*c.z, 10, 20))
      if (eff.contains_relative_interior(u)) interior.push_back(u);
    auto rep = is_proper_pdivisor(c.assembled, interior);
    std::string why;
    for (const auto& [u, w] : rep.failures) why += " " + show(u) + " " + w;
    v.require(rep.passed, std::string(name) + ":" + why);
    v.detail += std::string(v.detail.empty() ? "" : ", ") + name + " " + std::to_string(rep.semiample_points.size()) +
                "+" + std::to_string(rep.big_points.size());
  }
  if (v.pass) v.detail = "semiample+big points: " + v.detail;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {1, "S1 Cox coefficients", 1.0, ac1},
      {2, "S2 compact parts and nef generators", 1.0, ac2},
      {3, "intersection matrices of S1 and S2", 0, ac3},
      {4, "identity decompositions of Cl(S1), Cl(S2)", 0, ac4},
      {5, "evaluation equals minus the stabilized multiplicity", 60.0, ac5},
      {6, "polyhedral duality suite", 30.0, ac6},
      {7, "section invariance", 0, ac7},
      {8, "Zariski decompositions", 0, ac8},
      {9, "Bl2P3 Chow fan, chambers and retraction", 30.0, ac9},
      {10, "properness of the assembled p-divisor", 0, ac10},
  };
  int only = 0;
  for (int k = 1; k < argc; ++k)
    if (!std::strcmp(argv[k], "--criterion") && k + 1 < argc) only = std::atoi(argv[++k]);

  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) v.require(false, "runtime over the limit");
    char timing[96];
    if (c.limit_s > 0)
      std::snprintf(timing, sizeof timing, "tol=exact, %.2fs < %.0fs", secs, c.limit_s);
    else
      std::snprintf(timing, sizeof timing, "tol=exact, %.2fs", secs);
    std::printf("AC%d %s %s | %s | %s\n", c.id, v.pass ? "PASS" : "FAIL", c.what, v.detail.c_str(), timing);
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
