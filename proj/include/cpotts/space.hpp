#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <json.hpp>

#include "cpotts/cyclo.hpp"
#include "cpotts/zmat.hpp"

namespace cpotts {

constexpr long kDefaultStateCap = 2'000'000;

// Edge-variable states n = (n_1..n_L), n_j in 0..N-1, indexed lexicographically
// (n_1 most significant).
long full_dim(int N, int L, long cap = kDefaultStateCap);
std::vector<int> decode_state(int N, int L, long idx);
long encode_state(int N, const std::vector<int>& s);
int state_charge(int N, const std::vector<int>& s);

struct SectorBasis {
  int N = 0, L = 0, c = 0;
  std::vector<std::vector<int>> states;
  std::vector<long> full_index;
  std::vector<long> sector_of_full;  // -1 outside the sector

  long size() const { return static_cast<long>(states.size()); }
  long index_of(const std::vector<int>& s) const;
};

SectorBasis enumerate_sector(int N, int L, int c, long cap = kDefaultStateCap);

// Operator on the full edge space that changes the total charge by `shift` (mod N).
template <class S>
struct LinearOperator {
  int N = 0, L = 0;
  int shift = 0;
  Eigen::SparseMatrix<S> m;
};

using ExactOperator = LinearOperator<Cyclo>;
using FloatOperator = LinearOperator<std::complex<double>>;

ExactOperator identity_operator(int N, int L);
ExactOperator build_Z(int N, int L, int j);
ExactOperator build_X(int N, int L, int j);
ExactOperator build_Xinv(int N, int L, int j);
// (1-omega) e_j = X_j^{-1}(1 - Z_j),  (1-omega) f_j = (1 - Z_j) X_j
ExactOperator build_e(int N, int L, int j);
ExactOperator build_f(int N, int L, int j);

template <class S>
LinearOperator<S> compose(const LinearOperator<S>& a, const LinearOperator<S>& b);
template <class S>
LinearOperator<S> add(const LinearOperator<S>& a, const LinearOperator<S>& b);
template <class S>
LinearOperator<S> scale(const S& c, const LinearOperator<S>& a);
template <class S>
LinearOperator<S> commutator(const LinearOperator<S>& a, const LinearOperator<S>& b);
template <class S>
void prune(LinearOperator<S>& a);
template <class S>
bool is_zero(const LinearOperator<S>& a);
// block from charge sector c_in to sector c_in + shift
template <class S>
Eigen::SparseMatrix<S> sector_block(const LinearOperator<S>& a, int c_in);
// every stored entry connects charge c to charge c + shift
template <class S>
bool respects_grading(const LinearOperator<S>& a);

FloatOperator to_complex(const ExactOperator& a);
CycloMatrix to_dense(const ExactOperator& a);
Eigen::MatrixXcd to_dense(const FloatOperator& a);
CycloMatrix to_dense(const Eigen::SparseMatrix<Cyclo>& a);

// entries must be cyclotomic integers
ZwMatrix<i128> to_zw(int N, const Eigen::SparseMatrix<Cyclo>& a);
ZwMatrix<i128> to_zw(int N, const CycloMatrix& a);

// [[row, col, [c_0, ..., c_{phi-1}]], ...] with rational coefficients as strings
nlohmann::json triplets(const ExactOperator& a);

}  // namespace cpotts
