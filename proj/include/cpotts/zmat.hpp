#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

#include "cpotts/cyclo.hpp"

namespace cpotts {

using i128 = __int128;

struct IntOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Matrix over Z[omega]: phi(N) integer planes, entry = sum_k plane_k(r,c) omega^k.
template <class Int>
class ZwMatrix {
 public:
  using Plane = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

  ZwMatrix() = default;
  ZwMatrix(int N, Eigen::Index rows, Eigen::Index cols);
  static ZwMatrix identity(int N, Eigen::Index n);

  int order() const { return n_; }
  int phi() const { return static_cast<int>(p_.size()); }
  Eigen::Index rows() const { return p_.empty() ? 0 : p_[0].rows(); }
  Eigen::Index cols() const { return p_.empty() ? 0 : p_[0].cols(); }

  Plane& plane(int k) { return p_[k]; }
  const Plane& plane(int k) const { return p_[k]; }

  void add_to(Eigen::Index r, Eigen::Index c, const std::vector<long long>& z, long long sign = 1);
  Cyclo at(Eigen::Index r, Eigen::Index c) const;
  ZwMatrix col(Eigen::Index c) const;
  ZwMatrix row(Eigen::Index r) const;

 private:
  int n_ = 0;
  std::vector<Plane> p_;
};

template <class Int>
ZwMatrix<Int> product(const ZwMatrix<Int>& a, const ZwMatrix<Int>& b);
template <class Int>
ZwMatrix<Int> sum(const ZwMatrix<Int>& a, const ZwMatrix<Int>& b, const Int& ca = Int(1), const Int& cb = Int(1));
template <class Int>
ZwMatrix<Int> times_omega(const ZwMatrix<Int>& a, long k);
template <class Int>
bool is_zero(const ZwMatrix<Int>& a);
template <class Int>
mpz_class content(const ZwMatrix<Int>& a);
template <class Int>
void divide_exact(ZwMatrix<Int>& a, const mpz_class& g);
template <class Int>
double log2_max_abs(const ZwMatrix<Int>& a);
template <class Int>
Eigen::MatrixXcd to_complex(const ZwMatrix<Int>& a, double scale = 1.0);
// a * sum_k z_k omega^k
template <class Int>
ZwMatrix<Int> times(const ZwMatrix<Int>& a, const std::vector<long long>& z);
template <class To, class From>
ZwMatrix<To> convert(const ZwMatrix<From>& a);
template <class Int>
CycloMatrix to_cyclo(const ZwMatrix<Int>& a);

// rational scale times integer matrix, kept with content pulled into the scale
template <class Int>
struct Scaled {
  mpq_class scale = 1;
  ZwMatrix<Int> m;
};

template <class Int>
void normalize(Scaled<Int>& s);
template <class Int>
Scaled<Int> product(const Scaled<Int>& a, const Scaled<Int>& b);
template <class Int>
Scaled<Int> commutator(const Scaled<Int>& a, const Scaled<Int>& b);
template <class Int>
Scaled<Int> combine(const mpq_class& ca, const Scaled<Int>& a, const mpq_class& cb, const Scaled<Int>& b);
template <class Int>
Scaled<Int> scaled(const mpq_class& c, Scaled<Int> a);
template <class Int>
Scaled<Int> times(const Scaled<Int>& a, const Cyclo& c);
template <class Int>
bool is_zero(const Scaled<Int>& a);
template <class Int>
bool equal(const Scaled<Int>& a, const Scaled<Int>& b);
template <class Int>
Eigen::MatrixXcd to_complex(const Scaled<Int>& a);

mpz_class to_mpz(const i128& v);
mpz_class to_mpz(const mpz_class& v);

}  // namespace cpotts
