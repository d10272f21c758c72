#include <doctest.h>

#include "cpotts/monodromy.hpp"
#include "cpotts/oracle.hpp"
#include "helpers.hpp"

using namespace cpotts;

TEST_CASE("local square") {
  auto U = build_local_square(3, 2, 1);
  auto I = identity_operator(3, 2);
  CHECK(is_zero(add(U[0][0][0], scale(Cyclo(-1), I))));
  CHECK(U[1][0].degree() == 0);
}

TEST_CASE("L = 1 monodromy is the local square") {
  auto fam = build_monodromy(3, 1);
  auto U = build_local_square(3, 1, 1);
  const OperatorPolynomial* ent[2][2] = {{&fam.A, &fam.B}, {&fam.C, &fam.D}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      auto& p = *ent[a][b];
      auto& q = U[a][b];
      int deg = std::max(p.degree(), q.degree());
      for (int k = 0; k <= deg; ++k) {
        auto x = k <= p.degree() ? p[k] : scale(Cyclo(0), identity_operator(3, 1));
        auto y = k <= q.degree() ? q[k] : scale(Cyclo(0), identity_operator(3, 1));
        auto d = add(x, scale(Cyclo(-1), y));
        prune(d);
        CHECK(is_zero(d));
      }
    }
}

TEST_CASE("monodromy entries agree with the path-sum oracle") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}}) {
    auto fam = build_monodromy(N, L);
    const OperatorPolynomial* ent[2][2] = {{&fam.A, &fam.B}, {&fam.C, &fam.D}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        auto want = oracle::monodromy_entry(N, L, a, b);
        auto got = t_coefficients(*ent[a][b]);
        size_t n = std::max(want.size(), got.size());
        for (size_t k = 0; k < n; ++k) {
          long d = full_dim(N, L);
          Eigen::MatrixXcd g = k < got.size() ? to_dense(to_complex(got[k])) : Eigen::MatrixXcd::Zero(d, d);
          Eigen::MatrixXcd w = k < want.size() ? want[k] : Eigen::MatrixXcd::Zero(d, d);
          INFO("N=" << N << " L=" << L << " entry " << a << b << " k=" << k);
          CHECK((g - w).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
  }
}

TEST_CASE("ground eigenvalue expansion") {
  // (1 - omega t)^L + omega^{-Q} (1 - t)^L by the binomial theorem
  for (int N = 2; N <= 3; ++N)
    for (int L = 1; L <= 4; ++L)
      for (int Q = 0; Q < N; ++Q) {
        auto g = ground_eigenvalue(N, L, Q, false);
        REQUIRE(g.size() == size_t(L + 1));
        for (int k = 0; k <= L; ++k) {
          mpz_class binom;
          mpz_bin_uiui(binom.get_mpz_t(), L, k);
          Cyclo sign = (k % 2) ? Cyclo(-1) : Cyclo(1);
          Cyclo want = sign * Cyclo(mpq_class(binom)) * (omega_pow(N, k) + omega_pow(N, -Q));
          CHECK(g[k] == want);
        }
      }
}

TEST_CASE("leading coefficients, ground states, commuting tau_2") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {3, 3}}) {
    auto fam = shared_monodromy(N, L);
    require_all_pass(verify_leading_coefficients(*fam));
    require_all_pass(verify_ground_states(*fam));
    require_all_pass({verify_d0_identity(*fam)});
    for (int Q = 0; Q < N; ++Q) require_all_pass({verify_tau2_commuting(*shared_tau2(N, L, Q))});
  }
}

TEST_CASE("three-term relations and induction") {
  auto f22 = shared_monodromy(2, 2);
  require_all_pass(verify_three_term_relations(*f22));
  auto f33 = shared_monodromy(3, 3);
  require_all_pass(verify_three_term_relations(*f33));
  require_all_pass(verify_boundary_and_induction(*f33, 4));
}
