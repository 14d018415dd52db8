#pragma once

#include "pdcox/pdivisor.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace pdcox {

using Json = nlohmann::ordered_json;

/** Malformed document; `where` names the offending field. */
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace io {

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("document", e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + "." + key, "missing field");
  return j.at(key);
}

inline Rational to_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(Integer(j.dump()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error&) {
  }
  throw ParseError(where, "expected an integer or a \"p/q\" string");
}

inline Integer to_integer(const Json& j, const std::string& where) {
  Rational q = to_rational(j, where);
  if (!is_integral(q)) throw ParseError(where, "expected an integer");
  return num(q);
}

inline QVector to_qvector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  QVector v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(to_rational(j[k], where + "[" + std::to_string(k) + "]"));
  return v;
}

inline ZVector to_zvector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  ZVector v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(to_integer(j[k], where + "[" + std::to_string(k) + "]"));
  return v;
}

inline std::vector<QVector> to_qvectors(const Json& j, const std::string& where, std::size_t dim) {
  if (!j.is_array()) throw ParseError(where, "expected an array of vectors");
  std::vector<QVector> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    std::string w = where + "[" + std::to_string(k) + "]";
    out.push_back(to_qvector(j[k], w));
    if (out.back().size() != dim) throw ParseError(w, "vector has length " + std::to_string(out.back().size()) +
                                                        ", expected " + std::to_string(dim));
  }
  return out;
}

inline QMatrix to_qmatrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of rows");
  std::vector<QVector> rows;
  for (std::size_t k = 0; k < j.size(); ++k) rows.push_back(to_qvector(j[k], where + "[" + std::to_string(k) + "]"));
  try {
    return QMatrix::from_rows(rows);
  } catch (const Error&) {
    throw ParseError(where, "ragged matrix");
  }
}

/** Integers stay JSON numbers when small, otherwise strings; fractions are "p/q". */
inline Json to_json(const Rational& q) {
  if (is_integral(q) && abs_int(num(q)) < Integer(1) << 53) return Json(num(q).convert_to<long long>());
  return Json(to_string(q));
}
inline Json to_json(const Integer& z) { return to_json(Rational(z)); }

template <class T>
Json to_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

template <class T>
Json to_json(const Matrix<T>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Json to_json(const Extended& e) {
  if (e.is_finite()) return to_json(e.value);
  return Json(e.str());
}

}  // namespace io

/** Fan document: the fan plus an optional display name and class basis. */
struct FanDocument {
  std::string name;
  Fan fan;
  std::optional<std::vector<std::size_t>> class_basis;

  ToricVariety toric(std::optional<IntMatrix> section = std::nullopt) const {
    ToricVariety::Options opt;
    opt.class_basis = class_basis;
    opt.section = std::move(section);
    return build_toric(fan, opt);
  }
};

inline FanDocument fan_from_json(const Json& j) {
  FanDocument doc;
  if (!j.is_object()) throw ParseError("fan", "expected an object");
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("fan.name", "expected a string");
    doc.name = j["name"].get<std::string>();
  }
  const Json& jr = io::field(j, "lattice_rank", "fan");
  if (!jr.is_number_unsigned()) throw ParseError("fan.lattice_rank", "expected a non-negative integer");
  std::size_t rank = jr.get<std::size_t>();
  const Json& rays = io::field(j, "rays", "fan");
  if (!rays.is_array()) throw ParseError("fan.rays", "expected an array");
  std::vector<ZVector> rv;
  for (std::size_t k = 0; k < rays.size(); ++k) {
    std::string w = "fan.rays[" + std::to_string(k) + "]";
    rv.push_back(io::to_zvector(rays[k], w));
    if (rv.back().size() != rank) throw ParseError(w, "length differs from lattice_rank");
    if (is_zero(rv.back()) || !is_primitive(rv.back())) throw ParseError(w, "ray is not primitive");
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const Json& jl = j["labels"];
    if (!jl.is_array() || jl.size() != rv.size()) throw ParseError("fan.labels", "expected one label per ray");
    for (std::size_t k = 0; k < jl.size(); ++k) {
      if (!jl[k].is_string()) throw ParseError("fan.labels[" + std::to_string(k) + "]", "expected a string");
      labels.push_back(jl[k].get<std::string>());
    }
  }
  const Json& cones = io::field(j, "maximal_cones", "fan");
  if (!cones.is_array()) throw ParseError("fan.maximal_cones", "expected an array");
  std::vector<std::vector<std::size_t>> cv;
  for (std::size_t c = 0; c < cones.size(); ++c) {
    std::string w = "fan.maximal_cones[" + std::to_string(c) + "]";
    if (!cones[c].is_array()) throw ParseError(w, "expected an array of ray indices");
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < cones[c].size(); ++k) {
      const Json& x = cones[c][k];
      if (!x.is_number_unsigned() || x.get<std::size_t>() >= rv.size())
        throw ParseError(w, "cone " + std::to_string(c) + " has an invalid ray index at position " + std::to_string(k));
      idx.push_back(x.get<std::size_t>());
    }
    cv.push_back(idx);
  }
  try {
    doc.fan = make_fan(rank, rv, cv, labels);
  } catch (const Error& e) {
    throw ParseError("fan", e.what());
  }
  if (j.contains("class_basis")) {
    const Json& jb = j["class_basis"];
    if (!jb.is_array()) throw ParseError("fan.class_basis", "expected an array of ray labels");
    std::vector<std::size_t> b;
    for (std::size_t k = 0; k < jb.size(); ++k) {
      std::string w = "fan.class_basis[" + std::to_string(k) + "]";
      if (!jb[k].is_string()) throw ParseError(w, "expected a ray label");
      try {
        b.push_back(doc.fan.ray_index(jb[k].get<std::string>()));
      } catch (const Error& e) {
        throw ParseError(w, e.what());
      }
    }
    doc.class_basis = b;
  }
  return doc;
}

inline Json fan_to_json(const FanDocument& doc) {
  Json j;
  if (!doc.name.empty()) j["name"] = doc.name;
  j["lattice_rank"] = doc.fan.lattice_rank;
  Json rays = Json::array();
  for (const auto& r : doc.fan.rays) rays.push_back(io::to_json(r));
  j["rays"] = rays;
  j["labels"] = doc.fan.labels;
  j["maximal_cones"] = doc.fan.cones;
  if (doc.class_basis) {
    Json b = Json::array();
    for (auto k : *doc.class_basis) b.push_back(doc.fan.labels[k]);
    j["class_basis"] = b;
  }
  return j;
}

inline FanDocument parse_fan(const std::string& text) { return fan_from_json(io::parse_json(text)); }
inline std::string emit_fan(const FanDocument& doc) { return fan_to_json(doc).dump(2) + "\n"; }
inline FanDocument load_fan(const std::string& path) { return parse_fan(io::read_file(path)); }

inline Json vectors_to_json(std::vector<QVector> vs) {
  std::sort(vs.begin(), vs.end());
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(io::to_json(v));
  return a;
}

inline Json cone_to_json(const RationalCone& c) {
  Json j;
  j["ambient_dim"] = c.ambient_dim();
  j["rays"] = vectors_to_json(c.ray_list_q());
  if (!c.is_pointed()) j["lineality"] = vectors_to_json(c.lineality_list_q());
  return j;
}

inline RationalCone cone_from_json(const Json& j, const std::string& where = "cone") {
  const Json& jd = io::field(j, "ambient_dim", where);
  if (!jd.is_number_unsigned()) throw ParseError(where + ".ambient_dim", "expected a non-negative integer");
  std::size_t d = jd.get<std::size_t>();
  auto rays = io::to_qvectors(io::field(j, "rays", where), where + ".rays", d);
  std::vector<QVector> lin;
  if (j.contains("lineality")) lin = io::to_qvectors(j["lineality"], where + ".lineality", d);
  return RationalCone::from_generators(d, rays, lin);
}

/** Polyhedron document: vertices, tail rays and optional lineality, all in canonical order. */
inline Json polyhedron_to_json(const TailedPolyhedron& p) {
  Json j;
  j["ambient_dim"] = p.ambient_dim();
  if (p.is_empty()) {
    j["empty"] = true;
    return j;
  }
  j["vertices"] = vectors_to_json(p.vertices());
  j["rays"] = vectors_to_json(p.tail_rays());
  if (!p.lineality().empty()) j["lineality"] = vectors_to_json(p.lineality());
  return j;
}

inline TailedPolyhedron polyhedron_from_json(const Json& j, const std::string& where = "polyhedron") {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  const Json& jd = io::field(j, "ambient_dim", where);
  if (!jd.is_number_unsigned()) throw ParseError(where + ".ambient_dim", "expected a non-negative integer");
  std::size_t d = jd.get<std::size_t>();
  if (j.contains("empty") && j["empty"] == true) return TailedPolyhedron::empty(d);
  auto verts = io::to_qvectors(io::field(j, "vertices", where), where + ".vertices", d);
  std::vector<QVector> rays, lin;
  if (j.contains("rays")) rays = io::to_qvectors(j["rays"], where + ".rays", d);
  if (j.contains("lineality")) lin = io::to_qvectors(j["lineality"], where + ".lineality", d);
  if (verts.empty() && (!rays.empty() || !lin.empty())) throw ParseError(where + ".vertices", "tail without vertices");
  return TailedPolyhedron::from_generators(d, verts, rays, lin);
}

/** A p-divisor with its base fan embedded and a provenance block. */
struct PDivisorDocument {
  FanDocument base;
  PDivisor pdiv;
  Json provenance = Json::object();
};

inline Json pdivisor_to_json(const PDivisorDocument& doc) {
  const auto& d = doc.pdiv;
  Json j;
  j["base"] = fan_to_json(doc.base);
  j["tail"] = cone_to_json(d.tail());
  Json coeffs = Json::array();
  for (std::size_t k = 0; k < d.base().n_rays(); ++k) {
    Json c = polyhedron_to_json(d.coefficient(k));
    c.erase("ambient_dim");
    Json rec;
    rec["ray"] = d.base().fan().labels[k];
    for (auto& [key, v] : c.items()) rec[key] = v;
    coeffs.push_back(rec);
  }
  j["coefficients"] = coeffs;
  j["provenance"] = doc.provenance;
  return j;
}

inline PDivisorDocument pdivisor_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("pdivisor", "expected an object");
  PDivisorDocument doc;
  doc.base = fan_from_json(io::field(j, "base", "pdivisor"));
  RationalCone tail = cone_from_json(io::field(j, "tail", "pdivisor"), "pdivisor.tail");
  std::shared_ptr<const ToricVariety> y;
  try {
    y = std::make_shared<const ToricVariety>(doc.base.toric());
  } catch (const Error& e) {
    throw ParseError("pdivisor.base", e.what());
  }
  doc.pdiv = PDivisor(y, tail);
  const Json& coeffs = io::field(j, "coefficients", "pdivisor");
  if (!coeffs.is_array()) throw ParseError("pdivisor.coefficients", "expected an array");
  std::set<std::size_t> seen;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    std::string w = "pdivisor.coefficients[" + std::to_string(k) + "]";
    const Json& rec = coeffs[k];
    const Json& jl = io::field(rec, "ray", w);
    if (!jl.is_string()) throw ParseError(w + ".ray", "expected a ray label");
    std::size_t e;
    try {
      e = y->fan().ray_index(jl.get<std::string>());
    } catch (const Error& err) {
      throw ParseError(w + ".ray", err.what());
    }
    if (!seen.insert(e).second) throw ParseError(w + ".ray", "ray listed twice");
    Json pj = rec;
    pj.erase("ray");
    pj["ambient_dim"] = tail.ambient_dim();
    try {
      doc.pdiv.set_coefficient(e, polyhedron_from_json(pj, w));
    } catch (const Error& err) {
      throw ParseError(w, err.what());
    }
  }
  if (j.contains("provenance")) doc.provenance = j["provenance"];
  return doc;
}

}  // namespace pdcox
