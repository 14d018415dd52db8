#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdcox {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using ZVector = std::vector<Integer>;
using QVector = std::vector<Rational>;

/** Domain error kinds surfaced by the library and mapped to CLI error codes. */
enum class ErrorKind {
  InvalidInput,
  NotSurjective,
  InconsistentSequence,
  OriginNotContained,
  DimensionMismatch,
  NotConcave,
  NotSimplicial,
  RaysDoNotSpan,
  TorsionClassGroup,
  NotComplete,
  NotSurface,
  NotBasis,
  ConeNotInFan,
  SectionInvalid,
  NotRefinement,
  Infeasible,
  NotEffective,
  DimensionUnsupported,
  NotDelPezzo,
  NotPointed,
  EmptyPolyhedron,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::InconsistentSequence: return "InconsistentSequence";
    case ErrorKind::OriginNotContained: return "OriginNotContained";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotConcave: return "NotConcave";
    case ErrorKind::NotSimplicial: return "NotSimplicial";
    case ErrorKind::RaysDoNotSpan: return "RaysDoNotSpan";
    case ErrorKind::TorsionClassGroup: return "TorsionClassGroup";
    case ErrorKind::NotComplete: return "NotComplete";
    case ErrorKind::NotSurface: return "NotSurface";
    case ErrorKind::NotBasis: return "NotBasis";
    case ErrorKind::ConeNotInFan: return "ConeNotInFan";
    case ErrorKind::SectionInvalid: return "SectionInvalid";
    case ErrorKind::NotRefinement: return "NotRefinement";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NotEffective: return "NotEffective";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::NotDelPezzo: return "NotDelPezzo";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::EmptyPolyhedron: return "EmptyPolyhedron";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }
inline bool is_integral(const Rational& q) { return den(q) == 1; }

inline Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Integer gcd_int(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}
inline Integer lcm_int(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_int(a / gcd_int(a, b) * b);
}

/** "p/q" for non-integers, "p" otherwise. */
inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(const Integer& z) { return z.str(); }

/** Parses "p", "-p" or "p/q" with q > 0. Throws Error(InvalidInput) on malformed text. */
inline Rational parse_rational(std::string_view s) {
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  std::string_view n = s.substr(0, slash);
  std::string_view d = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!is_int(n) || !is_int(d) || d[0] == '-' || d[0] == '+')
    throw Error(ErrorKind::InvalidInput, "malformed rational: " + std::string(s));
  std::string ns(n);
  if (ns[0] == '+') ns.erase(0, 1);
  Integer nn(ns), dd{std::string(d)};
  if (dd == 0) throw Error(ErrorKind::InvalidInput, "zero denominator: " + std::string(s));
  return Rational(nn, dd);
}

// ---- vector helpers -------------------------------------------------------

inline QVector to_q(const ZVector& v) { return QVector(v.begin(), v.end()); }

inline QVector zero_q(std::size_t n) { return QVector(n, Rational(0)); }

inline QVector unit_q(std::size_t n, std::size_t k) {
  QVector v(n, Rational(0));
  v[k] = 1;
  return v;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot: length mismatch");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const QVector& a, const ZVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline Rational dot(const ZVector& a, const QVector& b) { return dot(b, a); }

template <class T>
std::vector<T> operator+(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "add: length mismatch");
  std::vector<T> r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

template <class T>
std::vector<T> operator-(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "sub: length mismatch");
  std::vector<T> r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

template <class T>
std::vector<T> operator-(const std::vector<T>& a) {
  std::vector<T> r(a);
  for (auto& x : r) x = -x;
  return r;
}

template <class T, class S>
std::vector<T> scale(const S& c, const std::vector<T>& a) {
  std::vector<T> r(a);
  for (auto& x : r) x *= c;
  return r;
}

template <class T>
bool is_zero(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x == 0; });
}

/** Positive multiple of v with coprime integer entries (zero stays zero). */
inline ZVector primitive(const QVector& v) {
  Integer l = 1;
  for (const auto& x : v)
    if (x != 0) l = lcm_int(l, den(x));
  ZVector z(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    z[i] = num(v[i]) * (l / den(v[i]));
    g = gcd_int(g, z[i]);
  }
  if (g > 1)
    for (auto& x : z) x /= g;
  return z;
}

inline ZVector primitive(const ZVector& v) { return primitive(to_q(v)); }

inline bool is_primitive(const ZVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd_int(g, x);
  return g == 1;
}

inline bool all_integral(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integral(x); });
}

inline ZVector to_z(const QVector& v) {
  ZVector z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_integral(v[i])) throw Error(ErrorKind::InvalidInput, "to_z: non-integral entry");
    z[i] = num(v[i]);
  }
  return z;
}

/** Value in Q u {-inf, +inf}; used for support functions and dilation bounds. */
struct Extended {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  Rational value = 0;

  static Extended neg_inf() { return {Kind::NegInf, 0}; }
  static Extended pos_inf() { return {Kind::PosInf, 0}; }
  static Extended finite(const Rational& q) { return {Kind::Finite, q}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool operator==(const Extended& o) const {
    return kind == o.kind && (kind != Kind::Finite || value == o.value);
  }
  std::string str() const {
    if (kind == Kind::NegInf) return "-inf";
    if (kind == Kind::PosInf) return "inf";
    return to_string(value);
  }
};

}  // namespace pdcox
