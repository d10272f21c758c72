#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "cpotts/report.hpp"
#include "cpotts/space.hpp"
#include "cpotts/zmat.hpp"

namespace cpotts {

// Operator-valued polynomial; coeffs[k] multiplies s^k with s = -omega t.
struct OperatorPolynomial {
  std::vector<ExactOperator> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const ExactOperator& operator[](int k) const { return coeffs.at(k); }
};

struct MonodromyFamily {
  int N = 0, L = 0;
  OperatorPolynomial A, B, C, D;
};

using LocalSquare = std::array<std::array<OperatorPolynomial, 2>, 2>;

// U^{(2)} of site j, entries indexed by the vertical pair
LocalSquare build_local_square(int N, int L, int j);
MonodromyFamily build_monodromy(int N, int L);
// memoized per (N, L); safe to call from several threads
std::shared_ptr<const MonodromyFamily> shared_monodromy(int N, int L);

// coefficients of t^k, i.e. (-omega)^k X_k
std::vector<ExactOperator> t_coefficients(const OperatorPolynomial& p);

// tau_2|_Q = A(t) + omega^{-Q} D(t) on the charge-0 sector, coefficients of t^k
struct Tau2Block {
  int N = 0, L = 0, Q = 0;
  std::vector<Eigen::SparseMatrix<Cyclo>> coeffs;
};

Tau2Block build_tau2_block(const MonodromyFamily& fam, int Q);
Eigen::SparseMatrix<Cyclo> evaluate(const Tau2Block& tau, const Cyclo& t);
Eigen::MatrixXcd evaluate(const Tau2Block& tau, std::complex<double> t);
std::vector<ZwMatrix<i128>> to_zw(const Tau2Block& tau);
// memoized tau_2 blocks, Q taken mod N
std::shared_ptr<const Tau2Block> shared_tau2(int N, int L, int Q);

// (1 - omega t)^L + omega^{-Q} (1 - t)^L and its partner with omega^{-Q} moved
std::vector<Cyclo> ground_eigenvalue(int N, int L, int Q, bool antiferro);

std::vector<CheckRecord> verify_leading_coefficients(const MonodromyFamily& fam);
std::vector<CheckRecord> verify_ground_states(const MonodromyFamily& fam);
CheckRecord verify_tau2_commuting(const Tau2Block& tau);
CheckRecord verify_d0_identity(const MonodromyFamily& fam);
std::vector<CheckRecord> verify_three_term_relations(const MonodromyFamily& fam);
std::vector<CheckRecord> verify_boundary_and_induction(const MonodromyFamily& fam, int n_max);

}  // namespace cpotts
