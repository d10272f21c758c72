#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cpotts/suites.hpp"

using namespace cpotts;

namespace {

std::string line(const CheckRecord& r) {
  std::string s = r.id + " " + r.inputs.dump();
  if (!r.exact) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " residual %.3g > %.1g", r.residual, r.tolerance);
    s += buf;
  }
  if (!r.detail.empty()) s += " (" + r.detail + ")";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0, workers = 1;
  bool verbose = false;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "list every failing check");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (const auto& c : criteria()) {
    if (only && c.id != only) continue;
    auto res = run_criterion(c.id, workers);
    long failed = 0;
    for (auto& r : res.checks) failed += !r.pass;
    std::printf("criterion %2d: %s  %s  [%zu checks, %ld failed, %.2f s]\n", c.id, res.pass ? "PASS" : "FAIL",
                c.title.c_str(), res.checks.size(), failed, res.seconds);
    if (!res.pass) {
      all = false;
      for (auto& r : res.checks)
        if (!r.pass) {
          std::printf("    failed: %s\n", line(r).c_str());
          if (!verbose) break;
        }
    }
    for (auto& r : res.informational)
      std::printf("    info: %s  %s residual %.3g (tol %.1g)\n", r.pass ? "pass" : "fail", r.id.c_str(), r.residual,
                  r.tolerance);
  }
  return all ? 0 : 1;
}
