#pragma once

#include <string>
#include <vector>

#include <doctest.h>

#include "cpotts/report.hpp"

// every record passes; prints the failing ones
inline void require_all_pass(const std::vector<cpotts::CheckRecord>& rs) {
  REQUIRE_FALSE(rs.empty());
  for (const auto& r : rs) {
    INFO(cpotts::to_json(r).dump());
    CHECK(r.pass);
  }
}

inline const cpotts::CheckRecord* find_check(const std::vector<cpotts::CheckRecord>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return &r;
  return nullptr;
}
