#include <cmath>
#include <random>

#include <doctest.h>

#include "prevision/special.hpp"

using namespace prevision;

struct TCdfReference {
  double x;
  double nu;
  double cdf;
};

#include "oracles/t_cdf_table.inc"

TEST_CASE("regularized incomplete beta: analytic identities") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = unit(rng);
    const double a = 0.1 + 5.0 * unit(rng);
    const double b = 0.1 + 5.0 * unit(rng);
    CAPTURE(x);
    CAPTURE(a);
    CAPTURE(b);
    // I_x(1,1) = x, I_x(a,1) = x^a, I_x(1,b) = 1-(1-x)^b
    CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(a, 1.0, x) ==
          doctest::Approx(std::pow(x, a)).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(1.0, b, x) ==
          doctest::Approx(1.0 - std::pow(1.0 - x, b)).epsilon(1e-12));
    // symmetry
    const double lhs = regularized_incomplete_beta(a, b, x);
    const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("t_cdf: symmetry and simple closed forms") {
  for (double nu : {0.5, 1.0, 2.0, 7.0, 100.0, 1e6}) {
    CAPTURE(nu);
    CHECK(t_cdf(0.0, nu) == 0.5);
    CHECK(t_cdf(kInf, nu) == 1.0);
    CHECK(t_cdf(-kInf, nu) == 0.0);
  }
  // Cauchy: F(x) = 1/2 + atan(x)/pi
  CHECK(t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(t_cdf(-1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  // nu = 2: F(x) = 1/2 + x / (2 sqrt(x^2 + 2))
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> span(-30.0, 30.0);
  for (int i = 0; i < 300; ++i) {
    const double x = span(rng);
    CAPTURE(x);
    const double expected = 0.5 + x / (2.0 * std::sqrt(x * x + 2.0));
    CHECK(t_cdf(x, 2.0) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(t_cdf(x, 1.0) ==
          doctest::Approx(0.5 + std::atan(x) / M_PI).epsilon(1e-13));
    // symmetry across all dof
    const double nu = std::exp(std::uniform_real_distribution<double>(-1.0, 8.0)(rng));
    CHECK(t_cdf(x, nu) + t_cdf(-x, nu) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(t_cdf(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(t_cdf(1.0, -3.0), DomainError);
}

TEST_CASE("t_cdf: frozen 50-digit reference table within 1e-12") {
  double worst = 0.0;
  for (const auto& row : kTCdfTable) {
    const double got = t_cdf(row.x, row.nu);
    const double err = std::abs(got - row.cdf);
    if (err > worst) worst = err;
    CAPTURE(row.x);
    CAPTURE(row.nu);
    CHECK(err <= 1e-12);
  }
  MESSAGE("worst absolute error vs mpmath: ", worst);
  // spot value, frozen from the same 50-digit run
  CHECK(std::abs(t_cdf(1.372, 10.0) - 0.8999723293002852) <= 1e-12);
}

TEST_CASE("t_pdf matches numerical derivative of t_cdf") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> span(-8.0, 8.0);
  std::uniform_real_distribution<double> logdof(-0.5, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double x = span(rng);
    const double nu = std::exp(logdof(rng));
    const double h = 1e-5;
    const double deriv = (t_cdf(x + h, nu) - t_cdf(x - h, nu)) / (2.0 * h);
    CAPTURE(x);
    CAPTURE(nu);
    CHECK(t_pdf(x, nu) == doctest::Approx(deriv).epsilon(1e-7));
  }
}
