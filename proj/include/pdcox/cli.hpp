#pragma once

#include "pdcox/io.hpp"
#include "pdcox/surface.hpp"

#include "CLI11.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <iostream>

namespace pdcox::cli {

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
  return os.str();
}

struct Options {
  std::string input = "-";
  std::string section;  // path or inline JSON matrix
  std::string cls;      // "1,2,1" or a JSON array
  std::string ray;
  std::uint64_t seed = 1;
  std::size_t samples = 100;
};

/** Report commands exit 1 when a check fails; the report itself is still printed. */
struct Outcome {
  Json body;
  bool ok = true;
};

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path != "-") return io::read_file(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline IntMatrix to_intmatrix(const Json& j, const std::string& where) {
  QMatrix q = io::to_qmatrix(j, where);
  IntMatrix m(q.rows(), q.cols());
  for (std::size_t a = 0; a < q.rows(); ++a)
    for (std::size_t b = 0; b < q.cols(); ++b) {
      if (!is_integral(q(a, b))) throw ParseError(where, "expected an integer matrix");
      m(a, b) = num(q(a, b));
    }
  return m;
}

inline std::optional<IntMatrix> section_option(const Options& o) {
  if (o.section.empty()) return std::nullopt;
  std::string text = o.section.front() == '[' ? o.section : io::read_file(o.section);
  return to_intmatrix(io::parse_json(text), "--section");
}

inline QVector class_option(const Options& o, std::size_t r) {
  if (o.cls.empty()) throw ParseError("--class", "a divisor class is required");
  QVector v;
  if (o.cls.front() == '[') {
    v = io::to_qvector(io::parse_json(o.cls), "--class");
  } else {
    std::stringstream ss(o.cls);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        v.push_back(parse_rational(item));
      } catch (const Error&) {
        throw ParseError("--class", "cannot read \"" + item + "\" as a rational");
      }
    }
  }
  if (v.size() != r) throw ParseError("--class", "expected " + std::to_string(r) + " coordinates");
  return v;
}

inline Json labeled(const Fan& f, const std::map<std::size_t, Rational>& m) {
  Json j = Json::object();
  for (const auto& [k, a] : m) j[f.labels[k]] = io::to_json(a);
  return j;
}

inline Json labeled_poly(const std::string& label, const TailedPolyhedron& p) {
  Json rec;
  rec["ray"] = label;
  Json pj = polyhedron_to_json(p);
  for (auto& [key, v] : pj.items()) rec[key] = v;
  return rec;
}

inline FanDocument y_document(const CoxPDivisor& c) {
  FanDocument d;
  d.fan = c.y->fan();
  d.class_basis = c.y->class_basis();
  return d;
}

inline std::vector<std::size_t> ray_selection(const ToricVariety& y, const Options& o) {
  if (!o.ray.empty()) {
    try {
      return {y.fan().ray_index(o.ray)};
    } catch (const Error& e) {
      throw ParseError("--ray", e.what());
    }
  }
  std::vector<std::size_t> all(y.n_rays());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

struct Property {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    ++checked;
    if (!ok && failures.size() < 20) failures.push_back(what);
    passed = passed && ok;
  }
  Json json() const {
    Json j;
    j["name"] = name;
    j["passed"] = passed;
    j["checked"] = checked;
    if (!failures.empty()) j["failures"] = failures;
    return j;
  }
};

inline std::string show(const QVector& v) { return io::to_json(v).dump(); }

}  // namespace detail

inline Outcome fan_check(const std::string& text) {
  auto doc = parse_fan(text);
  Outcome o;
  const auto& f = doc.fan;
  o.body["fan"] = fan_to_json(doc);
  o.body["n_rays"] = f.n_rays();
  o.body["n_cones"] = f.cones.size();
  o.body["valid"] = is_valid_fan(f);
  o.body["simplicial"] = is_simplicial(f);
  o.body["complete"] = is_complete(f);
  o.ok = o.body["valid"].get<bool>();
  return o;
}

inline Outcome toric_classgroup(const std::string& text, const Options& opt) {
  auto doc = parse_fan(text);
  const auto& f = doc.fan;
  Outcome o;
  auto cok = cokernel(LatticeMap(IntMatrix::from_rows(f.rays, f.lattice_rank)));
  o.body["free_rank"] = cok.free_rank;
  o.body["torsion"] = io::to_json(cok.torsion);
  if (!cok.torsion.empty() || !is_simplicial(f)) return o;
  auto z = doc.toric(detail::section_option(opt));
  Json basis = Json::array();
  for (auto k : z.class_basis()) basis.push_back(f.labels[k]);
  o.body["class_basis"] = basis;
  Json classes = Json::object();
  for (std::size_t k = 0; k < z.n_rays(); ++k) classes[f.labels[k]] = io::to_json(z.ray_class(k));
  o.body["ray_classes"] = classes;
  o.body["section"] = io::to_json(z.seq().s);
  o.body["cosection"] = io::to_json(z.seq().t);
  o.body["effective_cone"] = cone_to_json(effective_cone(z));
  if (z.is_complete()) o.body["nef_cone"] = cone_to_json(nef_cone(z));
  return o;
}

inline Outcome poly_dual(const std::string& text) {
  return {polyhedron_to_json(dual_polyhedron(polyhedron_from_json(io::parse_json(text)))), true};
}

inline Outcome run_downgrade(const std::string& text, const Options& opt, const Json& provenance) {
  Json j = io::parse_json(text);
  RationalCone delta = cone_from_json(io::field(j, "cone", "downgrade"), "downgrade.cone");
  IntMatrix deg = detail::to_intmatrix(io::field(j, "deg", "downgrade"), "downgrade.deg");
  std::optional<IntMatrix> s, pi;
  if (j.contains("section")) s = detail::to_intmatrix(j["section"], "downgrade.section");
  if (auto cli_s = detail::section_option(opt)) s = cli_s;
  if (j.contains("pi")) pi = detail::to_intmatrix(j["pi"], "downgrade.pi");
  Downgrade dg = downgrade(delta, deg, s, pi);
  PDivisorDocument doc{FanDocument{"", dg.sigma, dg.y->class_basis()}, dg.pdiv, provenance};
  Outcome o{pdivisor_to_json(doc), true};
  o.body["sequence"] = {{"i", io::to_json(dg.i)}, {"pi", io::to_json(dg.pi)}, {"s", io::to_json(dg.s)},
                        {"t", io::to_json(dg.t)}};
  o.body["constructions_agree"] = dg.constructions_agree;
  return o;
}

inline Outcome cox_pdiv(const std::string& text, const Options& opt, const Json& provenance) {
  auto zdoc = parse_fan(text);
  auto c = cox_pdivisor(zdoc.toric(detail::section_option(opt)));
  const auto& yf = c.y->fan();
  const auto& zf = c.z->fan();
  PDivisorDocument doc{detail::y_document(c), c.prime_part, provenance};
  Outcome o{pdivisor_to_json(doc), true};
  Json cox;
  if (!zdoc.name.empty()) cox["variety"] = zdoc.name;
  Json lam = Json::object(), beta = Json::object(), b = Json::object();
  for (std::size_t k = 0; k < c.n_y(); ++k) {
    std::map<std::size_t, Rational> row;
    for (std::size_t p = 0; p < zf.n_rays(); ++p)
      if (c.lambda.lambda(k, p) != 0) row[p] = c.lambda.lambda(k, p);
    Json r = Json::object();
    for (const auto& [p, x] : row) r[zf.labels[p]] = io::to_json(x);
    lam[yf.labels[k]] = r;
    beta[yf.labels[k]] = io::to_json(c.beta[k]);
    b[yf.labels[k]] = io::to_json(c.b[k]);
  }
  cox["lambda"] = lam;
  cox["beta"] = beta;
  cox["b"] = b;
  cox["downgrade_constructions_agree"] = c.downgrade_constructions_agree;
  cox["splitting_consistent"] = c.splitting_consistent;
  if (c.z->dim() == 2) {
    // coefficients read in Cl(S) through the intersection form
    const QMatrix to_cl = dual_to_class(*c.z);
    Json view = Json::array();
    for (auto e : c.exceptional()) view.push_back(detail::labeled_poly(yf.labels[e], linear_image(c.delta(e), to_cl)));
    cox["class_view"] = view;
  }
  o.body["cox"] = cox;
  return o;
}

inline Outcome cox_nabla(const std::string& text, const Options& opt) {
  auto zdoc = parse_fan(text);
  auto c = cox_pdivisor(zdoc.toric(detail::section_option(opt)));
  Json arr = Json::array();
  for (auto e : detail::ray_selection(*c.y, opt)) arr.push_back(detail::labeled_poly(c.y->fan().labels[e], nabla(c, e)));
  return {Json{{"nabla", arr}}, true};
}

inline Outcome cox_oracle(const std::string& text, const Options& opt) {
  auto zdoc = parse_fan(text);
  auto c = cox_pdivisor(zdoc.toric(detail::section_option(opt)));
  std::vector<QVector> us;
  if (!opt.cls.empty())
    us.push_back(detail::class_option(opt, c.z->class_rank()));
  else
    us = sample_effective_classes(*c.z, opt.seed, opt.samples);
  Outcome o;
  Json recs = Json::array();
  std::size_t checked = 0;
  for (const auto& u : us)
    for (auto e : detail::ray_selection(*c.y, opt)) {
      Extended ev = eval_min(c.delta(e), u);
      Rational lp = stable_mult_lp(c, e, u);
      bool agree = ev.is_finite() && ev.value == -lp;
      o.ok = o.ok && agree;
      ++checked;
      recs.push_back(Json{{"class", io::to_json(u)},
                          {"ray", c.y->fan().labels[e]},
                          {"eval_min", io::to_json(ev)},
                          {"stable_mult", io::to_json(lp)},
                          {"agree", agree}});
    }
  o.body["checked"] = checked;
  o.body["all_agree"] = o.ok;
  o.body["records"] = recs;
  return o;
}

inline Outcome surface_zariski(const std::string& text, const Options& opt) {
  auto s = parse_fan(text).toric();
  require_surface(s);
  QVector d = detail::class_option(opt, s.class_rank());
  auto z = zariski(s, d);
  auto chk = check_zariski(s, d, z);
  Outcome o;
  o.body["class"] = io::to_json(d);
  o.body["positive"] = io::to_json(z.positive);
  o.body["negative"] = detail::labeled(s.fan(), z.negative);
  o.body["checks"] = {{"sum", chk.sum},
                      {"positive_nef", chk.positive_nef},
                      {"orthogonal", chk.orthogonal},
                      {"negative_definite", chk.negative_definite}};
  o.ok = chk.all();
  return o;
}

inline Outcome surface_coefficients(const std::string& text) {
  auto s = parse_fan(text).toric();
  require_surface(s);
  const auto& f = s.fan();
  const auto sf = surface_form(s);
  Outcome o;
  o.body["del_pezzo"] = is_del_pezzo(s);
  Json basis = Json::array();
  for (auto k : s.class_basis()) basis.push_back(f.labels[k]);
  o.body["intersection_matrix"] = {{"basis", basis},
                                   {"matrix", io::to_json(surface_intersection_matrix(s, s.class_basis()))}};
  Json arr = Json::array();
  for (const auto& c : surface_cox_coefficients(s)) {
    Json rec;
    rec["ray"] = f.labels[c.ray];
    rec["self_intersection"] = io::to_json(sf.ray_form(c.ray, c.ray));
    rec["delta"] = polyhedron_to_json(c.delta);
    rec["nabla"] = polyhedron_to_json(c.nabla);
    arr.push_back(rec);
  }
  o.body["coefficients"] = arr;
  return o;
}

/** Every cross-check on one variety; one record per property. */
inline Outcome verify_all(const std::string& text, const Options& opt) {
  using detail::Property;
  using detail::show;
  auto zdoc = parse_fan(text);
  auto section = detail::section_option(opt);
  auto c = cox_pdivisor(zdoc.toric(section));
  const auto& z = *c.z;
  const auto& yl = c.y->fan().labels;
  auto samples = sample_effective_classes(z, opt.seed, opt.samples);
  std::vector<Property> props;

  Property dual{"duality_involution"};
  for (std::size_t e = 0; e < c.n_y(); ++e) {
    auto dd = dual_polyhedron(c.delta(e));
    auto nb = nabla(c, e);
    dual.check(dual_polyhedron(dd) == c.delta(e), yl[e] + ": dual of dual differs");
    dual.check(dd == nb, yl[e] + ": dual differs from nabla");
    auto [head, tail] = head_and_tail(c.delta(e));
    dual.check(dd.tail() == head.dual(), yl[e] + ": tail of dual is not the dual of the head");
  }
  props.push_back(dual);

  Property split{"splitting_consistency"};
  split.check(c.splitting_consistent, "raw coefficients are not the translates by beta");
  split.check(c.downgrade_constructions_agree, "fiber and inequality constructions disagree");
  for (std::size_t k = 0; k < c.n_y(); ++k)
    split.check(all_integral(c.b[k]) && c.b[k] == c.e.row(k) - to_q(z.seq().s * c.y->fan().rays[k]),
                yl[k] + ": b(E) differs from e(E) - s(a(E))");
  for (std::size_t j = 0; j < z.class_rank(); ++j) {
    QVector u = unit_q(z.class_rank(), j), via(c.n_y());
    for (std::size_t k = 0; k < c.n_y(); ++k) via[k] = dot(c.beta[k], u);
    split.check(c.y->class_of(via) == c.y->class_of(psi_pullback(c, u)), "pullback of basis class " + std::to_string(j));
  }
  props.push_back(split);

  Property oracle{"oracle_equivalence"};
  for (const auto& u : samples)
    for (std::size_t e = 0; e < c.n_y(); ++e) {
      Extended ev = eval_min(c.delta(e), u);
      oracle.check(ev.is_finite() && ev.value == -stable_mult_lp(c, e, u), yl[e] + " at " + show(u));
    }
  props.push_back(oracle);

  Property proper{"properness"};
  auto rep = is_proper_pdivisor(c.assembled);
  proper.checked = rep.semiample_points.size() + rep.big_points.size();
  proper.passed = rep.passed;
  for (const auto& [u, why] : rep.failures) proper.failures.push_back(show(u) + ": " + why);
  props.push_back(proper);

  Property retr{"retraction_nef"};
  for (const auto& u : samples) retr.check(retraction(c, u).nef, show(u));
  props.push_back(retr);

  Property inv{"section_invariance"};
  {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    const auto& seq = z.seq();
    for (int trial = 0; trial < 3; ++trial) {
      IntMatrix x(seq.i.cols(), seq.pi.rows());
      for (std::size_t a = 0; a < x.rows(); ++a)
        for (std::size_t b = 0; b < x.cols(); ++b) x(a, b) = coef(rng);
      auto other = cox_pdivisor(zdoc.toric(IntMatrix(seq.s + seq.i * x)));
      inv.check(other.prime_part == c.prime_part, "coefficients changed with the section");
      bool shifted = true;
      for (std::size_t k = 0; k < other.n_y(); ++k)
        shifted = shifted && other.raw[k] == translate(other.delta(k), other.beta[k]);
      inv.check(shifted, "raw coefficients are not the beta translates");
    }
  }
  props.push_back(inv);

  if (z.dim() <= 3) {
    Property mov{"mov_chambers"};
    auto ch = mov_chambers(z);
    for (std::size_t a = 0; a < ch.size(); ++a) {
      auto model = build_toric(make_fan(z.dim(), z.fan().rays, ch[a].cones, z.fan().labels),
                               {z.class_basis(), std::nullopt});
      mov.check(is_valid_fan(model.fan()) && model.is_complete(), "chamber " + std::to_string(a) + ": model fan");
      mov.check(nef_cone(model) == ch[a].nef, "chamber " + std::to_string(a) + ": nef cone of the model");
      for (std::size_t b = a + 1; b < ch.size(); ++b)
        mov.check(!ch[a].nef.intersect(ch[b].nef).is_full_dimensional(), "chambers overlap");
    }
    props.push_back(mov);
  }

  if (z.dim() == 2) {
    Property zar{"zariski_invariants"};
    for (const auto& d : samples) {
      auto zd = zariski(z, d);
      bool ok = check_zariski(z, d, zd).all();
      for (std::size_t e = 0; e < z.n_rays(); ++e) {
        Rational a = zd.negative.count(e) ? zd.negative.at(e) : Rational(0);
        ok = ok && a == stable_mult_lp(c, e, d);
      }
      zar.check(ok, show(d));
    }
    props.push_back(zar);
    if (is_del_pezzo(z)) {
      Property orth{"orthogonality"};
      auto r = orthogonality_check(z, samples);
      orth.checked = r.checked;
      orth.passed = r.passed;
      for (const auto& d : r.failures) orth.failures.push_back(show(d));
      props.push_back(orth);
    }
  }

  Outcome o;
  Json arr = Json::array();
  for (const auto& p : props) {
    arr.push_back(p.json());
    o.ok = o.ok && p.passed;
  }
  if (!zdoc.name.empty()) o.body["variety"] = zdoc.name;
  o.body["seed"] = opt.seed;
  o.body["samples"] = samples.size();
  o.body["properties"] = arr;
  o.body["all_passed"] = o.ok;
  return o;
}

inline Json error_json(const std::string& kind, const std::string& message, const std::string& where = "") {
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  if (!where.empty()) e["where"] = where;
  return Json{{"error", e}};
}

/** Exit codes: 0 success, 1 domain error or failed check, 2 parse or usage error. */
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   std::istream& in = std::cin) {
  CLI::App app{"Cox rings of toric varieties as polyhedral divisors", "pdcox"};
  app.require_subcommand(1);
  Options opt;

  auto input = [&](CLI::App* sc) { sc->add_option("input", opt.input, "JSON document, - for stdin"); };
  auto section = [&](CLI::App* sc) {
    sc->add_option("--section", opt.section, "section of the ray map: JSON matrix or a file holding one");
  };
  auto cls = [&](CLI::App* sc) { sc->add_option("--class", opt.cls, "divisor class, e.g. 1,2,1"); };
  auto ray = [&](CLI::App* sc) { sc->add_option("--ray", opt.ray, "restrict to one ray label"); };
  auto sampling = [&](CLI::App* sc) {
    sc->add_option("--seed", opt.seed, "seed for sampled classes");
    sc->add_option("--samples", opt.samples, "number of random sampled classes");
  };
  auto group = [&](const char* name, const char* desc) {
    auto* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    return g;
  };

  auto* fan = group("fan", "fan documents");
  input(fan->add_subcommand("check", "validate a fan"));
  auto* toric = group("toric", "toric varieties");
  auto* cg = toric->add_subcommand("classgroup", "class group, ray classes, Eff and Nef");
  input(cg);
  section(cg);
  auto* poly = group("poly", "polyhedra");
  input(poly->add_subcommand("dual", "dual polyhedron"));
  auto* dg = app.add_subcommand("downgrade", "p-divisor of an affine toric variety for a subtorus action");
  input(dg);
  section(dg);
  auto* cox = group("cox", "Cox ring p-divisor");
  auto* pd = cox->add_subcommand("pdiv", "p-divisor of the Cox ring");
  input(pd);
  section(pd);
  auto* nb = cox->add_subcommand("nabla", "nabla polyhedra in the class group");
  input(nb);
  section(nb);
  ray(nb);
  auto* orc = cox->add_subcommand("oracle", "evaluation against the stabilized multiplicity LP");
  input(orc);
  section(orc);
  cls(orc);
  ray(orc);
  sampling(orc);
  auto* surf = group("surface", "toric surfaces");
  auto* zar = surf->add_subcommand("zariski", "Zariski decomposition of a class");
  input(zar);
  cls(zar);
  input(surf->add_subcommand("coefficients", "coefficients through the intersection form"));
  auto* verify = group("verify", "cross-checks");
  auto* va = verify->add_subcommand("all", "run every cross-check");
  input(va);
  section(va);
  sampling(va);

  std::string command;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    for (auto* top : app.get_subcommands()) {
      command = top->get_name();
      for (auto* sub : top->get_subcommands()) command += " " + sub->get_name();
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    out << error_json("UsageError", e.what()).dump(2) << "\n";
    err << e.what() << "\n";
    return 2;
  }

  try {
    std::string text = detail::read_input(opt.input, in);
    Json prov;
    prov["command"] = command;
    prov["input_sha256"] = sha256_hex(text);
    if (!opt.section.empty()) prov["section"] = io::to_json(*detail::section_option(opt));
    Outcome res;
    if (command == "fan check") res = fan_check(text);
    else if (command == "toric classgroup") res = toric_classgroup(text, opt);
    else if (command == "poly dual") res = poly_dual(text);
    else if (command == "downgrade") res = run_downgrade(text, opt, prov);
    else if (command == "cox pdiv") res = cox_pdiv(text, opt, prov);
    else if (command == "cox nabla") res = cox_nabla(text, opt);
    else if (command == "cox oracle") res = cox_oracle(text, opt);
    else if (command == "surface zariski") res = surface_zariski(text, opt);
    else if (command == "surface coefficients") res = surface_coefficients(text);
    else if (command == "verify all") res = verify_all(text, opt);
    else throw std::logic_error("unhandled command " + command);
    out << res.body.dump(2) << "\n";
    return res.ok ? 0 : 1;
  } catch (const ParseError& e) {
    out << error_json("ParseError", e.what(), e.where()).dump(2) << "\n";
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    out << error_json(error_kind_name(e.kind()), e.what()).dump(2) << "\n";
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace pdcox::cli
