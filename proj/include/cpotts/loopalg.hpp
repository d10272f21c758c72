#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "cpotts/drinfeld.hpp"
#include "cpotts/report.hpp"
#include "cpotts/space.hpp"
#include "cpotts/zmat.hpp"

namespace cpotts {

// bar-normalized divided powers C0^(m), B1^(m), C_{L-1}^(m), B_L^(m)
enum class DPKind { C0, B1, CL1, BL };

std::string to_string(DPKind k);
// charge change of kind^{(m)}
int dp_shift(DPKind k, int m);

// closed composition sum on the full edge space; entries lie in Z[omega]
ExactOperator divided_power_operator(int N, int L, DPKind kind, int m);

// Sector blocks of the divided powers, built on demand and memoized.
class DividedPowers {
 public:
  DividedPowers(int N, int L);

  int N() const { return N_; }
  int L() const { return L_; }
  const SectorBasis& sector(int c) const { return sectors_.at(c); }
  // kind^{(m)} restricted to charge sector c_in, as a map into sector c_in + shift
  const ZwMatrix<i128>& block(DPKind kind, int m, int c_in);
  // product op_1 op_2 ... op_k (rightmost acts first) on the sector c_in
  ZwMatrix<i128> chain(const std::vector<std::pair<DPKind, int>>& ops, int c_in);
  // same product applied to a block of column vectors living in sector c_in
  ZwMatrix<i128> apply(const std::vector<std::pair<DPKind, int>>& ops, ZwMatrix<i128> v, int c_in);
  // unit vector of a state in its sector
  ZwMatrix<i128> unit(const std::vector<int>& state) const;

 private:
  int N_, L_;
  std::vector<SectorBasis> sectors_;
  std::map<std::tuple<int, int, int>, ZwMatrix<i128>> cache_;
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

std::shared_ptr<DividedPowers> shared_divided_powers(int N, int L);

// run f.template operator()<i128>(), retrying with mpz_class on overflow
template <class F>
decltype(auto) with_fallback(F&& f) {
  try {
    return f.template operator()<i128>();
  } catch (const IntOverflow&) {
    return f.template operator()<mpz_class>();
  }
}

// |Omega> and |Omega-bar> in the charge-0 sector
std::vector<int> omega_state(int L);
std::vector<int> omega_bar_state(int N, int L);

// x^-_n (n >= 1), x^+_n (n >= 0), h_n (n >= 1) on the charge-0 sector
template <class Int>
struct LoopGenerators {
  int N = 0, L = 0, Q = 0, mQ = 0;
  bool barred = false;
  std::vector<mpz_class> lambda;
  std::map<int, Scaled<Int>> xm, xp, h;
};

// unbarred: x^-_1 = (omega^Q/Lambda_0) C0^(Q) B1^(N+Q), x^+_0 = (omega^Q/Lambda_0) C0^(N+Q) B1^(Q);
// barred: prefactor omega^{Q(Q+1)}/Lambda_0 with B1 and C0 swapped.
// Recursion through h_1 up to max_index (default 2 m_Q).
template <class Int>
LoopGenerators<Int> build_loop_generators(DividedPowers& dp, int Q, bool barred = false, int max_index = -1);

using MatrixXcld = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

struct Sl2Family {
  int Q = 0, mQ = 0;
  bool barred = false;
  std::vector<Eigen::MatrixXcd> Ep, Em, H;  // index m = 0..m_Q-1 pairs with root z_{m+1}
};

template <class Int>
MatrixXcld to_cld(const Scaled<Int>& a);

template <class Int>
Sl2Family build_sl2(const LoopGenerators<Int>& g, const DrinfeldData& d);

// numeric operators on the sector for the spectrum module
struct LoopNumeric {
  int N = 0, L = 0, Q = 0;
  DrinfeldData drinfeld, drinfeld_bar;
  Sl2Family sl2, barred;  // barred uses index (N - Q) mod N
};

LoopNumeric build_loop_numeric(int N, int L, int Q);

// The sl2 family acting on vectors at 50 digits. A word of steps is applied with the
// vector kept at full precision throughout, so large cancellations off the ground span
// do not leak into the result.
class Sl2Action {
 public:
  enum class Op { Ep, Em, H, Lift };
  struct Step {
    Op op;
    int m;
    Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero();  // Lift: (a00+a11)/2 + (a00-a11)/2 H + a01 E+ + a10 E-
  };

  // index Q family; barred uses the barred generators with the same index
  Sl2Action(int N, int L, int Q, bool barred);
  ~Sl2Action();
  Sl2Action(Sl2Action&&) noexcept;

  int mQ() const;
  long dim() const;
  // steps[0] acts first
  Eigen::VectorXcd apply(const std::vector<Step>& steps, const Eigen::VectorXcd& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class SerreScope { States, Operator };
enum class ArithMode { Exact, Float };

std::vector<CheckRecord> verify_divided_power_identities(int N, int L);
// [tau_2, C0 B1]-type commutation for all index pairs up to m_Q, exact per t-coefficient
std::vector<CheckRecord> verify_tau_commutation(int N, int L, int Q);
// eigenvector spans, exact ranks and numeric eigenvalue clusters
std::vector<CheckRecord> verify_degenerate_eigenspaces(int N, int L, int Q);
std::vector<CheckRecord> verify_d_identities(int N, int L, int Q);
std::vector<CheckRecord> verify_sl2_structure(int N, int L, int Q);
std::vector<CheckRecord> verify_loop_relations(int N, int L, int Q);
std::vector<CheckRecord> verify_serre(int N, int L, int Q, SerreScope scope, ArithMode mode = ArithMode::Exact);

}  // namespace cpotts
