#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

#include "cpotts/report.hpp"

namespace cpotts {

using cd = std::complex<double>;

struct DegenerateRoots : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int drinfeld_degree(int N, int L, int Q);

// number of (n_1..n_L), 0 <= n_j <= N-1, summing to mN+Q, for m = 0..m_Q
std::vector<mpz_class> count_compositions(int N, int L, int Q);
// coefficients of t^{mN+Q} in N^{-1} sum_a omega^{-Qa} (1-t^N)^L / (1-omega^a t)^L
std::vector<mpz_class> series_coefficients(int N, int L, int Q);
// both routes; throws std::logic_error when they disagree
std::vector<mpz_class> compute_coefficients(int N, int L, int Q);

struct RootStats {
  double max_residual = 0;    // |P(z)| / sum_k |Lambda_k||z|^k
  double min_separation = 0;  // min |z_i - z_j| / max(|z_i|, |z_j|)
};

// companion eigenvalues, Newton-polished; throws DegenerateRoots below 1e-8 separation
std::vector<cd> find_roots(const std::vector<mpz_class>& lambda, RootStats* stats = nullptr);
// beta(j, n): coefficient of z^n in prod_{l != j} (z - z_l)/(z_j - z_l)
Eigen::MatrixXcd compute_beta(const std::vector<cd>& roots);
// same with every root replaced by its inverse
Eigen::MatrixXcd compute_beta_star(const std::vector<cd>& roots);
// S_n = sum_m beta_{m,0} z_m^{-n}, n = 0..n_max
std::vector<cd> compute_S(const std::vector<cd>& roots, const Eigen::MatrixXcd& beta, int n_max);

struct DrinfeldData {
  int N = 0, L = 0, Q = 0, mQ = 0;
  std::vector<mpz_class> lambda;
  std::vector<cd> roots;
  RootStats stats;
  Eigen::MatrixXcd beta, beta_star;
  std::vector<cd> S;
  // extended-precision copies used by the identity checks
  std::vector<std::complex<long double>> roots_ext, S_ext;
};

// n_max defaults to m_Q
DrinfeldData make_drinfeld(int N, int L, int Q, int n_max = -1);

// d_{m,Q} = -sum_j z_j^{-m}
cd d_from_roots(const DrinfeldData& d, int m);

// max over (j,k) of |sum_n beta_{j,n} z_k^n - delta_jk| and the transposed identity
double vandermonde_residual(const std::vector<cd>& nodes, const Eigen::MatrixXcd& beta);
// entrywise error of beta V - I relative to |beta||V|
double vandermonde_backward_error(const std::vector<cd>& nodes, const Eigen::MatrixXcd& beta);

std::vector<CheckRecord> verify_drinfeld(int N, int L, int Q);

}  // namespace cpotts
