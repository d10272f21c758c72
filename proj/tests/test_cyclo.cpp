#include <doctest.h>

#include "cpotts/cyclo.hpp"
#include "cpotts/oracle.hpp"

using namespace cpotts;

TEST_CASE("omega powers") {
  for (int N = 2; N <= 6; ++N) {
    CHECK(omega_pow(N, 0) == Cyclo(1));
    CHECK(omega_pow(N, N) == Cyclo(1));
    CHECK(omega_pow(N, -1) * omega_pow(N, 1) == Cyclo(1));
  }
  CHECK((omega_pow(3, 0) + omega_pow(3, 1) + omega_pow(3, 2)).is_zero());
}

TEST_CASE("q-integers and factorials") {
  for (int N = 2; N <= 6; ++N) {
    CHECK(q_integer(N, 1) == Cyclo(1));
    CHECK(q_integer(N, N).is_zero());
    CHECK(q_factorial(N, 0) == Cyclo(1));
    CHECK(q_factorial(N, N).is_zero());
  }
  CHECK(q_integer(3, 2) == Cyclo(1) + omega_pow(3, 1));
  CHECK(q_factorial(3, 2) == Cyclo(1) + omega_pow(3, 1));
}

TEST_CASE("gaussian binomial matches q-Pascal at q = omega") {
  CHECK(gaussian_binomial(3, 3, 1).is_zero());
  for (int N = 2; N <= 5; ++N)
    for (int a = 0; a <= 7; ++a) {
      CHECK(gaussian_binomial(N, a, 0) == Cyclo(1));
      CHECK(gaussian_binomial(N, a, a) == Cyclo(1));
      for (int b = 0; b <= a; ++b) {
        auto want = oracle::at_root_of_unity(oracle::gaussian_binomial_poly(a, b), N);
        auto got = to_complex(gaussian_binomial(N, a, b));
        CHECK(std::abs(got - want) < 1e-9);
      }
    }
}

TEST_CASE("complex evaluation") {
  CHECK(std::abs(to_complex(Cyclo(1)) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(std::abs(to_complex(omega_pow(4, 1)) - std::complex<double>(0, 1)) < 1e-15);
  CHECK(std::abs(to_complex(Cyclo(3, {1, 1}) + omega_pow(3, 2))) < 1e-15);
}

TEST_CASE("field operations") {
  Cyclo x(5, {mpq_class(1, 2), 3, -1, 2});
  CHECK(x * x.inverse() == Cyclo(1));
  CHECK((x - x).is_zero());
  CHECK(Cyclo(mpq_class(2, 3)).is_rational());
  // mixing a bare rational with an order-5 element
  CHECK((x + Cyclo(1)).order() == 5);
  auto c = integer_coeffs(Cyclo(3, {2, -7}));
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 2);
  CHECK(c[1] == -7);
}

TEST_CASE("exact rank") {
  CycloMatrix m(3, 3);
  auto w = omega_pow(3, 1);
  // row 2 is omega times row 1
  m << Cyclo(1), w, w * w, w, w * w, Cyclo(1), Cyclo(1), Cyclo(1), Cyclo(1);
  CHECK(exact_rank(m) == 2);
  CHECK(exact_rank(CycloMatrix::Identity(4, 4)) == 4);
}
