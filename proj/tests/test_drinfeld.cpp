#include <doctest.h>

#include "cpotts/drinfeld.hpp"
#include "cpotts/oracle.hpp"
#include "helpers.hpp"

using namespace cpotts;

namespace {
std::vector<mpz_class> Z(std::initializer_list<long> v) { return {v.begin(), v.end()}; }
}  // namespace

TEST_CASE("coefficients at N=3, L=3") {
  CHECK(compute_coefficients(3, 3, 1) == Z({3, 6}));
  CHECK(compute_coefficients(3, 3, 0) == Z({1, 7, 1}));
  CHECK(drinfeld_degree(3, 3, 1) == 1);
  CHECK(drinfeld_degree(3, 3, 0) == 2);
}

TEST_CASE("coefficients agree with the enumeration oracle") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {3, 3}, {3, 6}, {4, 4}}) {
    mpz_class pow = 1;
    for (int i = 1; i < L; ++i) pow *= N;
    for (int Q = 0; Q < N; ++Q) {
      auto c = count_compositions(N, L, Q);
      CHECK(c == series_coefficients(N, L, Q));
      mpz_class sum = 0;
      for (size_t m = 0; m < c.size(); ++m) {
        CHECK(c[m] == oracle::count_compositions(N, L, long(m) * N + Q));
        sum += c[m];
      }
      CHECK(sum == pow);
      auto dual = count_compositions(N, L, (N - Q) % N);
      if (Q != 0) {
        REQUIRE(dual.size() == c.size());
        for (size_t j = 0; j < c.size(); ++j) CHECK(c[c.size() - 1 - j] == dual[j]);
      }
    }
  }
}

TEST_CASE("roots") {
  auto r = find_roots(Z({3, 6}));
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] + 0.5) < 1e-15);
  auto r0 = find_roots(Z({1, 7, 1}));
  REQUIRE(r0.size() == 2);
  CHECK(std::abs(r0[0] * r0[1] - 1.0) < 1e-13);
  CHECK_THROWS_AS(find_roots(Z({1, 2, 1})), DegenerateRoots);
}

TEST_CASE("beta and S") {
  auto d = make_drinfeld(3, 3, 1);
  REQUIRE(d.beta.rows() == 1);
  CHECK(std::abs(d.beta(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(d.S[0] - 1.0) < 1e-14);
  CHECK(std::abs(d.S[1] + 2.0) < 1e-13);
  auto d6 = make_drinfeld(3, 6, 0);
  CHECK(vandermonde_residual(d6.roots, d6.beta) < 1e-10);
}

TEST_CASE("d from roots") {
  // -sum z^{-1} = -(-2) for the single root -1/2
  CHECK(std::abs(d_from_roots(make_drinfeld(3, 3, 1), 1) - 2.0) < 1e-14);
}

TEST_CASE("drinfeld suite on the grid") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {3, 3}, {3, 6}})
    for (int Q = 0; Q < N; ++Q) require_all_pass(verify_drinfeld(N, L, Q));
}
