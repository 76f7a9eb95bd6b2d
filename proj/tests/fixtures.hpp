#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>

#include "mqms/core.hpp"

namespace fixtures {

template <class M>
M matrix(std::initializer_list<std::string> rows) {
  const int n = static_cast<int>(rows.size());
  const int k = n ? static_cast<int>(rows.begin()->size()) : 0;
  M out(n, k);
  int r = 0;
  for (const auto& row : rows) {
    for (int c = 0; c < k; ++c) out.set(r, c, row[c] == '1');
    ++r;
  }
  return out;
}

inline mqms::ConnectivityMatrix conn(std::initializer_list<std::string> rows) {
  return matrix<mqms::ConnectivityMatrix>(rows);
}
inline mqms::Matching match(std::initializer_list<std::string> rows) { return matrix<mqms::Matching>(rows); }
inline mqms::ServiceOutcomeMatrix service(std::initializer_list<std::string> rows) {
  return matrix<mqms::ServiceOutcomeMatrix>(rows);
}

// Full cycle instance: q1-s1, q2-s2/s3, q3-s1/s3.
inline mqms::ConnectivityMatrix cycle_instance() { return conn({"100", "011", "101"}); }
// Interchange instance: q1-s1, q2-s2/s3, q3-s1.
inline mqms::ConnectivityMatrix interchange_instance() { return conn({"100", "011", "100"}); }

}  // namespace fixtures
