#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cpotts/loopalg.hpp"
#include "cpotts/report.hpp"
#include "cpotts/spectrum.hpp"

namespace cpotts {

using GridPoint = std::pair<int, int>;  // (N, L)

// (2,2), (2,4), (3,3), (3,6)
const std::vector<GridPoint>& default_grid();

// Runs tasks on up to `workers` threads; results come back in task order.
std::vector<std::vector<CheckRecord>> run_parallel(
    const std::vector<std::function<std::vector<CheckRecord>()>>& tasks, int workers);
std::vector<CheckRecord> flatten(std::vector<std::vector<CheckRecord>> parts);

struct SuiteOptions {
  SerreScope serre_scope = SerreScope::Operator;
  ArithMode mode = ArithMode::Exact;
  std::string suite = "all";  // all | monodromy | drinfeld | loopalg | spectrum
  bool tau_commutation = true;
  SpectrumConfig spectrum_cfg;
};

using Task = std::function<std::vector<CheckRecord>()>;

// Q-independent checks at (N, L): monodromy identities, divided powers
std::vector<Task> shared_tasks(int N, int L, const SuiteOptions& opt);
// checks of sector Q: tau_2 blocks, Drinfeld data, loop algebra, spectrum
std::vector<Task> sector_tasks(int N, int L, int Q, const SuiteOptions& opt);

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0: no runtime bound
};

const std::vector<Criterion>& criteria();

struct CriterionResult {
  Criterion criterion;
  bool pass = false;
  double seconds = 0;
  std::vector<CheckRecord> checks;
  std::vector<CheckRecord> informational;  // reported, not part of the verdict
  const CheckRecord* first_failure() const;
};

CriterionResult run_criterion(int id, int workers = 1);

}  // namespace cpotts
