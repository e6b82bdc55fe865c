#include <doctest.h>

#include <cmath>

#include "gridcop/errors.hpp"
#include "gridcop/normal.hpp"
#include "helpers.hpp"

using namespace gridcop;

TEST_CASE("norm_cdf reference values") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-13));
  CHECK(norm_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
}

TEST_CASE("norm_quantile inverts norm_cdf") {
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.7, 0.99, 1.0 - 1e-9}) {
    const double x = norm_quantile(p);
    CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-12));
  }
  // Symmetry.
  CHECK(norm_quantile(0.3) == doctest::Approx(-norm_quantile(0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(norm_quantile(0.0), DomainError);
  CHECK_THROWS_AS(norm_quantile(1.0), DomainError);
}

namespace {

// Independent quadrature oracle: dPhi2/drho = bivariate normal density
// (Plackett), so Phi2(x,y,rho) = Phi(x)Phi(y) + int_0^rho pdf2(x,y,t) dt.
double bvn_oracle(double x, double y, double rho) {
  auto pdf2 = [&](double t) {
    const double om = 1.0 - t * t;
    return std::exp(-(x * x - 2.0 * t * x * y + y * y) / (2.0 * om)) /
           (2.0 * 3.141592653589793 * std::sqrt(om));
  };
  return norm_cdf(x) * norm_cdf(y) + gridcop::testing::simpson(pdf2, 0.0, rho, 4096);
}

}  // namespace

TEST_CASE("bivariate normal cdf: closed forms") {
  CHECK(bivariate_normal_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  // At the origin: 1/4 + asin(rho) / (2 pi).
  for (double rho : {-0.9, -0.5, -0.1, 0.3, 0.5, 0.7, 0.95, 0.999}) {
    const double expected = 0.25 + std::asin(rho) / (2.0 * 3.141592653589793);
    CHECK(bivariate_normal_cdf(0.0, 0.0, rho) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(bivariate_normal_cdf(0.0, 0.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("bivariate normal cdf: marginal limits and symmetry") {
  for (double rho : {-0.8, 0.0, 0.4, 0.925, 0.99}) {
    for (double y : {-1.3, 0.0, 0.7, 2.5}) {
      CHECK(bivariate_normal_cdf(8.0, y, rho) == doctest::Approx(norm_cdf(y)).epsilon(1e-10));
      CHECK(bivariate_normal_cdf(y, 8.0, rho) == doctest::Approx(norm_cdf(y)).epsilon(1e-10));
    }
    CHECK(bivariate_normal_cdf(0.3, -0.4, rho) ==
          doctest::Approx(bivariate_normal_cdf(-0.4, 0.3, rho)).epsilon(1e-13));
  }
}

TEST_CASE("bivariate normal cdf matches the quadrature oracle") {
  for (double rho : {-0.95, -0.6, -0.2, 0.15, 0.5, 0.8, 0.93, 0.99}) {
    for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
      for (double y : {-1.5, 0.0, 0.4, 2.0}) {
        const double got = bivariate_normal_cdf(x, y, rho);
        const double want = bvn_oracle(x, y, rho);
        CHECK(std::abs(got - want) < 5e-11);
      }
    }
  }
  CHECK_THROWS_AS(bivariate_normal_cdf(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bivariate_normal_cdf(0.0, 0.0, -1.2), DomainError);
}
