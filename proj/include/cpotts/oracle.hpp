#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

// Brute-force reference implementations. Nothing here calls into the main library;
// the tests compare both sides.
namespace cpotts::oracle {

// number of (n_1..n_L), 0 <= n_j < N, with sum = target, by exhaustive enumeration
long count_compositions(int N, int L, long target);
// charge-c states of Z_N^L by enumeration
long sector_size(int N, int L, int c);

// integer coefficients in q of [n] and [a choose b]_q (q-Pascal)
std::vector<long long> q_integer_poly(int n);
std::vector<long long> gaussian_binomial_poly(int a, int b);
// sum_k c_k omega^k with omega = exp(2 pi i / N)
std::complex<double> at_root_of_unity(const std::vector<long long>& c, int N);

// dense single-site operators on the full N^L space, lexicographic with site 1 most significant
Eigen::MatrixXcd site_Z(int N, int L, int j);
Eigen::MatrixXcd site_X(int N, int L, int j);
Eigen::MatrixXcd site_e(int N, int L, int j);
Eigen::MatrixXcd site_f(int N, int L, int j);
Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// bar-normalized divided powers summed term by term from products of dense e, f, Z
enum class Kind { C0, B1, CL1, BL };
Eigen::MatrixXcd divided_power(int N, int L, Kind kind, int m);

// t^k coefficients of monodromy entry (a, b) summed over all vertical-index paths
std::vector<Eigen::MatrixXcd> monodromy_entry(int N, int L, int a, int b);

// named entry point used by the CLI dump: "compositions" {N, L, target},
// "gaussian_binomial" {N, a, b}, "sector_size" {N, L, c}
nlohmann::json run(const std::string& name, const nlohmann::json& inputs);

}  // namespace cpotts::oracle
