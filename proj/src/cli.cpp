#include "cpotts/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpotts/drinfeld.hpp"
#include "cpotts/loopalg.hpp"
#include "cpotts/oracle.hpp"
#include "cpotts/space.hpp"
#include "cpotts/spectrum.hpp"
#include "cpotts/suites.hpp"

namespace cpotts {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int N = 0, L = 0;
  std::string Q = "all";
  std::string mode = "exact";
  std::string serre_scope = "operator";
  std::string suite = "all";
  std::optional<double> tol;
  std::string out;
  int workers = 1;
  bool timing = false;
  double kp = 0.37;
  std::vector<double> lambda_p{0.61, 0.23};
  std::vector<double> lambda_q{1.3, -0.4, 0.7, 0.9};
  std::string op = "C0";
  int m = 1;
  std::string oracle;
  std::string inputs = "{}";
};

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = {{"N", c.N},       {"L", c.L},           {"Q", c.Q},
                      {"mode", c.mode}, {"serre_scope", c.serre_scope}, {"suite", c.suite},
                      {"workers", c.workers}};
  if (c.tol) j["tol"] = *c.tol;
  return j;
}

void check_size(int N, int L) {
  if (N < 2) throw ConfigError("N must be at least 2");
  if (L < 1) throw ConfigError("L must be positive");
  double d = std::pow(double(N), L);
  if (d > double(kDefaultStateCap)) throw ConfigError("N^L exceeds the state cap");
}

std::vector<int> sectors(const RunConfig& c, int N) {
  if (c.Q == "all") {
    std::vector<int> q(N);
    for (int i = 0; i < N; ++i) q[i] = i;
    return q;
  }
  int q;
  try {
    size_t pos;
    q = std::stoi(c.Q, &pos);
    if (pos != c.Q.size()) throw std::invalid_argument(c.Q);
  } catch (const std::exception&) {
    throw ConfigError("--Q must be an integer or 'all'");
  }
  if (q < 0 || q >= N) throw ConfigError("--Q must lie in 0..N-1");
  return {q};
}

SpectrumConfig spectrum_config(const RunConfig& c) {
  SpectrumConfig s;
  s.kp = c.kp;
  if (c.lambda_p.size() != 2) throw ConfigError("--lambda-p takes re im");
  if (c.lambda_q.empty() || c.lambda_q.size() % 2) throw ConfigError("--lambda-q takes re im pairs");
  s.lambda_p = {c.lambda_p[0], c.lambda_p[1]};
  s.lambda_q.clear();
  for (size_t i = 0; i < c.lambda_q.size(); i += 2) s.lambda_q.emplace_back(c.lambda_q[i], c.lambda_q[i + 1]);
  if (c.tol) s.tol_anchor = s.tol_ratio = s.tol_vector = s.tol_ladder = s.tol_q0 = *c.tol;
  if (!(s.kp > 0 && s.kp < 1)) throw ConfigError("--kp must lie in (0, 1)");
  return s;
}

void emit(const nlohmann::json& j, const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ConfigError("cannot open " + c.out);
  f << j.dump(2) << "\n";
}

nlohmann::json cj(cd z) { return {z.real(), z.imag()}; }

nlohmann::json big(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<GridPoint> grid;
  if (c.N == 0 && c.L == 0) {
    grid = default_grid();
    if (c.Q != "all") throw ConfigError("--Q needs --N and --L");
  } else {
    if (c.N == 0 || c.L == 0) throw ConfigError("--N and --L go together");
    grid = {{c.N, c.L}};
  }
  SuiteOptions opt;
  if (c.mode != "exact" && c.mode != "float") throw ConfigError("--mode is exact or float");
  if (c.serre_scope != "states" && c.serre_scope != "operator") throw ConfigError("--serre-scope is states or operator");
  opt.mode = c.mode == "exact" ? ArithMode::Exact : ArithMode::Float;
  opt.serre_scope = c.serre_scope == "states" ? SerreScope::States : SerreScope::Operator;
  opt.spectrum_cfg = spectrum_config(c);
  opt.suite = c.suite;

  static const std::vector<std::string> suites{"all", "monodromy", "drinfeld", "loopalg", "spectrum"};
  if (std::find(suites.begin(), suites.end(), c.suite) == suites.end()) throw ConfigError("unknown --suite " + c.suite);
  bool algebra = c.suite == "all" || c.suite == "loopalg" || c.suite == "spectrum";

  std::vector<Task> tasks;
  for (auto [N, L] : grid) {
    check_size(N, L);
    if (algebra && L % N != 0)
      throw ConfigError("L = " + std::to_string(L) + " is not a multiple of N = " + std::to_string(N) +
                        " (required by the loop algebra suites)");
    auto qs = sectors(c, N);
    // Q-independent checks only when every sector is requested
    if (qs.size() == size_t(N))
      for (auto& t : shared_tasks(N, L, opt)) tasks.push_back(t);
    for (int Q : qs)
      for (auto& t : sector_tasks(N, L, Q, opt)) tasks.push_back(t);
  }
  Stopwatch sw;
  Report rep;
  rep.append(flatten(run_parallel(tasks, c.workers)));
  emit(rep.to_json(to_json(c), c.timing), c, out);
  err << rep.passed() << " passed, " << rep.failed() << " failed (" << sw.seconds() << " s)\n";
  if (const auto* f = rep.first_failure()) {
    err << "first failure: " << f->id << " [" << f->relation << "] " << f->inputs.dump();
    if (!f->detail.empty()) err << ": " << f->detail;
    err << "\n";
    return kExitCheckFailure;
  }
  return kExitPass;
}

int cmd_drinfeld(const RunConfig& c, std::ostream& out) {
  check_size(c.N, c.L);
  nlohmann::json arr = nlohmann::json::array();
  for (int Q : sectors(c, c.N)) {
    auto d = make_drinfeld(c.N, c.L, Q);
    nlohmann::json j = {{"N", d.N}, {"L", d.L}, {"Q", d.Q}, {"mQ", d.mQ}};
    for (auto& v : d.lambda) j["lambda"].push_back(big(v));
    j["roots"] = nlohmann::json::array();
    for (auto z : d.roots) j["roots"].push_back(cj(z));
    j["root_residual"] = d.stats.max_residual;
    j["min_separation"] = d.stats.min_separation;
    if (d.mQ > 0) {
      j["vandermonde_residual"] = vandermonde_residual(d.roots, d.beta);
      std::vector<cd> inv;
      for (auto z : d.roots) inv.push_back(1.0 / z);
      j["vandermonde_star_residual"] = vandermonde_residual(inv, d.beta_star);
    }
    for (auto s : d.S) j["S"].push_back(cj(s));
    arr.push_back(j);
  }
  nlohmann::json j = {{"schema_version", kSchemaVersion}, {"drinfeld", arr}};
  emit(j, c, out);
  return kExitPass;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  check_size(c.N, c.L);
  if (c.L % c.N != 0) throw ConfigError("L must be a multiple of N for the spectrum");
  auto cfg = spectrum_config(c);
  nlohmann::json arr = nlohmann::json::array();
  for (int Q : sectors(c, c.N)) arr.push_back(spectrum_summary(c.N, c.L, Q, cfg));
  emit({{"schema_version", kSchemaVersion}, {"spectrum", arr}}, c, out);
  return kExitPass;
}

int cmd_dump(const RunConfig& c, std::ostream& out) {
  nlohmann::json j = {{"schema_version", kSchemaVersion}};
  if (!c.oracle.empty()) {
    nlohmann::json in;
    try {
      in = nlohmann::json::parse(c.inputs);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("--inputs: ") + e.what());
    }
    try {
      j["oracle"] = c.oracle;
      j["inputs"] = in;
      j["value"] = oracle::run(c.oracle, in);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    check_size(c.N, c.L);
    static const std::vector<std::pair<std::string, DPKind>> kinds{
        {"C0", DPKind::C0}, {"B1", DPKind::B1}, {"CL1", DPKind::CL1}, {"BL", DPKind::BL}};
    auto it = std::find_if(kinds.begin(), kinds.end(), [&](auto& k) { return k.first == c.op; });
    if (it == kinds.end()) throw ConfigError("--op is C0, B1, CL1 or BL");
    if (c.m < 0) throw ConfigError("--m must be nonnegative");
    auto a = divided_power_operator(c.N, c.L, it->second, c.m);
    j["operator"] = {{"N", c.N}, {"L", c.L}, {"kind", c.op}, {"m", c.m}};
    j["triplets"] = triplets(a);
  }
  emit(j, c, out);
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cpotts: superintegrable chiral Potts / tau_2 identity checker"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--N", c.N, "number of states");
    s->add_option("--L", c.L, "chain length");
    s->add_option("--Q", c.Q, "sector, or 'all'");
    s->add_option("--tol", c.tol, "override the spectrum tolerances");
    s->add_option("--out", c.out, "write JSON here instead of stdout");
  };
  auto spec_opts = [&](CLI::App* s) {
    s->add_option("--kp", c.kp, "k' in (0, 1)");
    s->add_option("--lambda-p", c.lambda_p, "re im")->expected(2);
    s->add_option("--lambda-q", c.lambda_q, "re im pairs")->expected(2, 16);
  };

  auto* verify = app.add_subcommand("verify", "run the identity suites; exit 0 iff all pass");
  common(verify);
  spec_opts(verify);
  verify->add_option("--mode", c.mode, "exact | float");
  verify->add_option("--serre-scope", c.serre_scope, "states | operator");
  verify->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--suite", c.suite, "all | monodromy | drinfeld | loopalg | spectrum");
  verify->add_flag("--timing", c.timing, "add wall time per check");

  auto* drin = app.add_subcommand("drinfeld", "Drinfeld polynomial data as JSON");
  common(drin);
  drin->get_option("--N")->required();
  drin->get_option("--L")->required();

  auto* spect = app.add_subcommand("spectrum", "predicted ladders and transfer-matrix spectrum as JSON");
  common(spect);
  spec_opts(spect);
  spect->get_option("--N")->required();
  spect->get_option("--L")->required();

  auto* dump = app.add_subcommand("dump", "divided-power triplets or an oracle value");
  common(dump);
  dump->add_option("--op", c.op, "C0 | B1 | CL1 | BL");
  dump->add_option("--m", c.m, "divided power order");
  dump->add_option("--oracle", c.oracle, "compositions | sector_size | gaussian_binomial");
  dump->add_option("--inputs", c.inputs, "oracle inputs as JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (*verify) return cmd_verify(c, out, err);
    if (*drin) return cmd_drinfeld(c, out);
    if (*spect) return cmd_spectrum(c, out);
    if (*dump) return cmd_dump(c, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitConfigError;
}

}  // namespace cpotts
