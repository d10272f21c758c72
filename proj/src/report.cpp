#include "cpotts/report.hpp"

#include <cmath>

namespace cpotts {

nlohmann::json to_json(const CheckRecord& r, bool with_timing) {
  nlohmann::json j = {{"id", r.id},
                      {"relation", r.relation},
                      {"inputs", r.inputs},
                      {"status", r.pass ? "pass" : "fail"}};
  if (r.exact) {
    j["exact"] = true;
  } else {
    j["residual"] = std::isfinite(r.residual) ? nlohmann::json(r.residual) : nlohmann::json("nan");
    j["tolerance"] = r.tolerance;
  }
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (with_timing) j["wall_time_s"] = r.seconds;
  return j;
}

long Report::passed() const {
  long n = 0;
  for (const auto& c : checks) n += c.pass;
  return n;
}

long Report::failed() const { return static_cast<long>(checks.size()) - passed(); }

const CheckRecord* Report::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

nlohmann::json Report::to_json(const nlohmann::json& config, bool with_timing) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(cpotts::to_json(c, with_timing));
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"config", config},
                      {"checks", arr},
                      {"summary", {{"total", checks.size()}, {"passed", passed()}, {"failed", failed()}}}};
  if (const auto* f = first_failure()) j["summary"]["first_failure"] = f->id;
  return j;
}

CheckRecord exact_check(std::string id, std::string relation, nlohmann::json inputs, bool pass,
                        std::string detail) {
  CheckRecord r;
  r.id = std::move(id);
  r.relation = std::move(relation);
  r.inputs = std::move(inputs);
  r.pass = pass;
  r.detail = std::move(detail);
  return r;
}

CheckRecord residual_check(std::string id, std::string relation, nlohmann::json inputs, double residual,
                           double tol, std::string detail) {
  CheckRecord r;
  r.id = std::move(id);
  r.relation = std::move(relation);
  r.inputs = std::move(inputs);
  r.exact = false;
  r.residual = residual;
  r.tolerance = tol;
  r.pass = std::isfinite(residual) && residual <= tol;
  r.detail = std::move(detail);
  return r;
}

}  // namespace cpotts
