#include <doctest.h>

#include "kornlab/calculus/poly_field.hpp"

#include <cmath>

using namespace kornlab;
using namespace kornlab::calculus;

TEST_CASE("quadratic 2D field") {
  PolyField v(2, 2);
  v.components[0].coeff({2, 0}) = 1.0;  // x1²
  v.components[1].coeff({1, 1}) = 1.0;  // x1 x2
  CHECK(check_identity(v) <= 1e-14);
  CHECK(v(make_vec({2.0, 3.0}))(1) == doctest::Approx(6.0));
}

TEST_CASE("linear fields have vanishing second derivatives") {
  PolyField v(3, 1);
  v.components[0].coeff({0, 1, 0}) = 2.0;
  v.components[2].coeff({1, 0, 0}) = -1.0;
  CHECK(v.components[0].derivative(1).derivative(1).max_abs_coeff() == 0.0);
  CHECK(check_identity(v) == 0.0);
}

TEST_CASE("random degree-4 fields satisfy the identity") {
  std::mt19937_64 rng(2024);
  for (int dim : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      const PolyField v = random_poly_field(dim, 4, rng);
      CHECK(check_identity(v) <= 1e-12);
      CHECK(check_laplacian_identity(v) <= 1e-12);
    }
  }
}

TEST_CASE("polynomial derivative against hand values") {
  Polynomial p(2, 3);
  p.coeff({3, 0}) = 1.0;  // x³
  p.coeff({1, 2}) = 2.0;  // 2 x y²
  const Polynomial dx = p.derivative(0);  // 3x² + 2y²
  CHECK(dx.coeff({2, 0}) == 3.0);
  CHECK(dx.coeff({0, 2}) == 2.0);
  const Polynomial dy = p.derivative(1);  // 4xy
  CHECK(dy.coeff({1, 1}) == 4.0);
  CHECK(p(make_vec({1.0, 2.0})) == doctest::Approx(9.0));
}

TEST_CASE("degree cap") {
  CHECK_THROWS_AS(Polynomial(2, 7), ValidationError);
  CHECK_THROWS_AS(Polynomial(2, -1), ValidationError);
  CHECK_NOTHROW(Polynomial(3, 6));
}

TEST_CASE("finite differences converge at second order") {
  const FieldEvaluator v = [](const Vec& x) { return make_vec({std::sin(x(1)), 0.0}); };
  const double r1 = check_identity_fd(v, 2, 1e-2);
  const double r2 = check_identity_fd(v, 2, 5e-3);
  CHECK(r1 > 0);
  CHECK(r1 / r2 >= 3.2);
  CHECK(r1 / r2 <= 4.8);
}

TEST_CASE("finite differences are exact for low degree") {
  std::mt19937_64 rng(1);
  const PolyField q = random_poly_field(2, 2, rng);
  for (double h : {1e-1, 1e-2, 0.5}) CHECK(check_identity_fd([&](const Vec& x) { return q(x); }, 2, h) <= 1e-10);
  const PolyField c = random_poly_field(3, 3, rng);
  CHECK(check_identity_fd([&](const Vec& x) { return c(x); }, 3, 1e-2) <= 1e-9);
  CHECK_THROWS_AS(check_identity_fd([&](const Vec& x) { return c(x); }, 3, 0.0), ValidationError);
}
