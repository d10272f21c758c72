#include <doctest.h>

#include "cpotts/oracle.hpp"
#include "cpotts/space.hpp"

using namespace cpotts;

namespace {

double dist(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("sector enumeration") {
  auto s = enumerate_sector(2, 2, 0);
  REQUIRE(s.size() == 2);
  CHECK(s.states[0] == std::vector<int>{0, 0});
  CHECK(s.states[1] == std::vector<int>{1, 1});
  CHECK(enumerate_sector(3, 3, 0).size() == 9);
  CHECK(enumerate_sector(3, 6, 0).size() == 243);
  for (int N = 2; N <= 4; ++N)
    for (int L = 1; L <= 5; ++L)
      for (int c = 0; c < N; ++c) CHECK(enumerate_sector(N, L, c).size() == oracle::sector_size(N, L, c));
}

TEST_CASE("state encoding round trip") {
  for (long i = 0; i < full_dim(3, 4); ++i) CHECK(encode_state(3, decode_state(3, 4, i)) == i);
  CHECK(state_charge(3, {2, 0, 1}) == 0);
  CHECK(state_charge(3, {2, 2, 1}) == 2);
}

TEST_CASE("Z and X on edge states") {
  auto Z = to_dense(build_Z(3, 3, 1));
  long i = encode_state(3, {2, 0, 1});
  CHECK(Z(i, i) == omega_pow(3, 2));
  for (int N = 2; N <= 4; ++N) {
    auto X = to_dense(build_X(N, 3, 1));
    CHECK(X(encode_state(N, {0, 0, 0}), encode_state(N, {N - 1, 0, 0})) == Cyclo(1));
  }
}

TEST_CASE("f annihilates the top state in its channel") {
  auto f = to_dense(build_f(3, 2, 1));
  long top = encode_state(3, {2, 0});
  for (long r = 0; r < f.rows(); ++r) CHECK(f(r, top).is_zero());
}

TEST_CASE("site operators agree with dense oracle") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}, {4, 2}})
    for (int j = 1; j <= L; ++j) {
      CHECK(dist(to_dense(to_complex(build_Z(N, L, j))), oracle::site_Z(N, L, j)) < 1e-14);
      CHECK(dist(to_dense(to_complex(build_X(N, L, j))), oracle::site_X(N, L, j)) < 1e-14);
      CHECK(dist(to_dense(to_complex(build_e(N, L, j))), oracle::site_e(N, L, j)) < 1e-14);
      CHECK(dist(to_dense(to_complex(build_f(N, L, j))), oracle::site_f(N, L, j)) < 1e-14);
    }
}

TEST_CASE("sparse commutator matches dense commutator") {
  int N = 3, L = 3;
  for (int i = 1; i <= L; ++i)
    for (int j = 1; j <= L; ++j) {
      auto a = add(build_e(N, L, i), scale(omega_pow(N, 1), compose(build_Z(N, L, j), build_e(N, L, j))));
      auto b = compose(build_f(N, L, j), build_Z(N, L, i));
      auto c = commutator(a, b);
      auto da = to_dense(to_complex(a));
      auto db = to_dense(to_complex(b));
      CHECK(dist(to_dense(to_complex(c)), oracle::commutator(da, db)) < 1e-13);
    }
}

TEST_CASE("grading and triplets") {
  auto e = build_e(3, 3, 2);
  CHECK(e.shift == 2);  // stored mod N
  CHECK(respects_grading(e));
  CHECK(respects_grading(compose(build_f(3, 3, 1), e)));
  auto t = triplets(build_Z(2, 2, 1));
  CHECK(t.size() == 4);
  CHECK(is_zero(commutator(build_Z(3, 3, 1), build_Z(3, 3, 2))));
}
