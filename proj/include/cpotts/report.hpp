#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

namespace cpotts {

constexpr const char* kSchemaVersion = "1.0";

struct CheckRecord {
  std::string id;        // dotted check id, e.g. "monodromy.ybe1"
  std::string relation;  // equation label the check reproduces
  nlohmann::json inputs = nlohmann::json::object();
  bool pass = false;
  bool exact = true;     // exact identity, otherwise residual vs tolerance
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

nlohmann::json to_json(const CheckRecord& r, bool with_timing = false);

struct Report {
  std::vector<CheckRecord> checks;

  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  void append(const std::vector<CheckRecord>& rs) { checks.insert(checks.end(), rs.begin(), rs.end()); }
  long passed() const;
  long failed() const;
  bool all_pass() const { return failed() == 0; }
  const CheckRecord* first_failure() const;
  nlohmann::json to_json(const nlohmann::json& config, bool with_timing = false) const;
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// exact pass/fail record
CheckRecord exact_check(std::string id, std::string relation, nlohmann::json inputs, bool pass,
                        std::string detail = {});
// residual record; passes iff residual <= tol (NaN fails)
CheckRecord residual_check(std::string id, std::string relation, nlohmann::json inputs, double residual,
                           double tol, std::string detail = {});

}  // namespace cpotts
