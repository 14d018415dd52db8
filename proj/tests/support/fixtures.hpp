#pragma once

#include "pdcox/io.hpp"

#ifndef PDCOX_FIXTURE_DIR
#error "PDCOX_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace pdcox::testing {

inline std::string fixture_path(const std::string& name) { return std::string(PDCOX_FIXTURE_DIR) + "/" + name + ".json"; }

inline FanDocument fixture(const std::string& name) { return load_fan(fixture_path(name)); }

inline ToricVariety fixture_toric(const std::string& name) { return fixture(name).toric(); }

inline QVector qv(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.push_back(x);
  return v;
}

inline ZVector zv(std::initializer_list<long> xs) {
  ZVector v;
  for (long x : xs) v.push_back(x);
  return v;
}

inline QMatrix qm(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<QVector> r;
  for (auto row : rows) r.push_back(qv(row));
  return QMatrix::from_rows(r);
}

}  // namespace pdcox::testing
