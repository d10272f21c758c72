#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

namespace cpotts {

// Per-N tables for Q(omega) = Q[x]/Phi_N.
struct CycloContext {
  int N = 0;
  int phi = 0;
  std::vector<long long> poly;                 // Phi_N, monic, low to high
  std::vector<std::vector<long long>> xpow;    // x^k mod Phi_N, k < max(N, 2 phi - 1)
};

const CycloContext& cyclo_context(int N);

// Element of Q(omega).  N == 0 marks a bare rational that adopts the order of
// whatever it is combined with; default-constructed values are zero.
class Cyclo {
 public:
  Cyclo() = default;
  Cyclo(long v);
  Cyclo(int v) : Cyclo(static_cast<long>(v)) {}
  Cyclo(const mpq_class& v);
  Cyclo(int N, std::vector<mpq_class> coeffs);

  int order() const { return n_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  mpq_class coeff(int k) const;

  bool is_zero() const;
  bool is_rational() const;
  Cyclo inverse() const;

  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo& operator*=(const Cyclo& o);
  Cyclo& operator/=(const Cyclo& o) { return *this *= o.inverse(); }
  Cyclo operator-() const;

  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
  friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
  friend Cyclo operator/(Cyclo a, const Cyclo& b) { return a /= b; }
  friend bool operator==(const Cyclo& a, const Cyclo& b);
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  std::string str() const;

 private:
  void lift(int N);

  int n_ = 0;
  std::vector<mpq_class> c_;
};

Cyclo omega_pow(int N, long k);
Cyclo q_integer(int N, long n);
Cyclo q_factorial(int N, long n);
Cyclo gaussian_binomial(int N, long a, long b);
std::complex<double> to_complex(const Cyclo& x);
std::complex<double> omega_c(int N, long k);

// coefficient vectors in the basis 1, omega, ..., omega^{phi-1}
std::vector<long long> integer_coeffs(const Cyclo& x);

using CycloMatrix = Eigen::Matrix<Cyclo, Eigen::Dynamic, Eigen::Dynamic>;

// Exact rank by Gaussian elimination over Q(omega).
long exact_rank(CycloMatrix m);

}  // namespace cpotts

namespace Eigen {
template <>
struct NumTraits<cpotts::Cyclo> : GenericNumTraits<cpotts::Cyclo> {
  using Real = cpotts::Cyclo;
  using NonInteger = cpotts::Cyclo;
  using Literal = cpotts::Cyclo;
  using Nested = cpotts::Cyclo;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
