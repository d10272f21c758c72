#include <doctest.h>

#include "cpotts/loopalg.hpp"
#include "cpotts/oracle.hpp"
#include "helpers.hpp"

using namespace cpotts;

TEST_CASE("divided powers agree with the dense oracle") {
  const std::pair<DPKind, oracle::Kind> kinds[] = {{DPKind::C0, oracle::Kind::C0},
                                                   {DPKind::B1, oracle::Kind::B1},
                                                   {DPKind::CL1, oracle::Kind::CL1},
                                                   {DPKind::BL, oracle::Kind::BL}};
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 4}, {3, 3}})
    for (auto [k, ok] : kinds)
      for (int m = 0; m <= L * (N - 1); ++m) {
        auto got = to_dense(to_complex(divided_power_operator(N, L, k, m)));
        auto want = oracle::divided_power(N, L, ok, m);
        INFO(to_string(k) << " N=" << N << " L=" << L << " m=" << m);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
      }
}

TEST_CASE("charge shifts") {
  CHECK(divided_power_operator(3, 3, DPKind::C0, 2).shift == ((dp_shift(DPKind::C0, 2) % 3) + 3) % 3);
  CHECK(divided_power_operator(3, 3, DPKind::B1, 1).shift == ((dp_shift(DPKind::B1, 1) % 3) + 3) % 3);
}

TEST_CASE("divided power identities") {
  require_all_pass(verify_divided_power_identities(2, 4));
  require_all_pass(verify_divided_power_identities(3, 3));
}

TEST_CASE("degeneracy, sl2, d, relations, Serre on small points") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {3, 3}})
    for (int Q = 0; Q < N; ++Q) {
      INFO("N=" << N << " L=" << L << " Q=" << Q);
      require_all_pass(verify_degenerate_eigenspaces(N, L, Q));
      require_all_pass(verify_tau_commutation(N, L, Q));
      require_all_pass(verify_d_identities(N, L, Q));
      require_all_pass(verify_sl2_structure(N, L, Q));
      require_all_pass(verify_loop_relations(N, L, Q));
      require_all_pass(verify_serre(N, L, Q, SerreScope::Operator));
      require_all_pass(verify_serre(N, L, Q, SerreScope::States));
    }
}

TEST_CASE("float mode Serre") { require_all_pass(verify_serre(2, 4, 1, SerreScope::Operator, ArithMode::Float)); }

TEST_CASE("sl2 action on the anchor") {
  Sl2Action act(3, 3, 0, false);
  REQUIRE(act.mQ() == 2);
  auto basis = enumerate_sector(3, 3, 0);
  Eigen::VectorXcd om = Eigen::VectorXcd::Zero(act.dim());
  om(basis.index_of(omega_state(3))) = 1;
  using Op = Sl2Action::Op;
  for (int m = 0; m < 2; ++m) {
    CHECK(act.apply({{Op::Ep, m}, {Op::Ep, m}}, om).norm() < 1e-12);
    for (int k = 0; k < 2; ++k) {
      cd e = om.dot(act.apply({{Op::Ep, m}, {Op::Em, k}}, om));
      CHECK(std::abs(e - cd(k == m ? 1.0 : 0.0)) < 1e-12);
    }
  }
}
