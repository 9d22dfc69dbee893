#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gidp/errors.hpp"
#include "gidp/quadrature.hpp"

using namespace gidp;

TEST_CASE("polynomials up to high degree are exact on one panel") {
  const auto r = integrate([](double x) { return std::pow(x, 20); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
  CHECK(r.panels >= 1);
}

TEST_CASE("smooth and peaked integrands") {
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  const QuadratureConfig tight{1e-12, 1e-12, 10000};
  CHECK(integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, tight).value ==
        doctest::Approx(2.0 * std::atan(1.0 / 1e-2) / 1e-2).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("oscillatory integrand with breakpoints") {
  std::vector<double> pts;
  for (int k = 0; k <= 100; ++k) pts.push_back(k * std::numbers::pi);
  const auto r = integrate([](double x) { return std::sin(x) * std::exp(-0.01 * x); }, pts);
  const double exact = (1.0 - std::exp(-std::numbers::pi)) / (1.0 + 1e-4);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("reversed limits flip the sign") {
  const auto a = integrate([](double x) { return x * x; }, 0.0, 3.0).value;
  const auto b = integrate([](double x) { return x * x; }, 3.0, 0.0).value;
  CHECK(a == doctest::Approx(9.0));
  CHECK(b == doctest::Approx(-9.0));
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("budget exhaustion raises a convergence error with the residual") {
  const QuadratureConfig tiny{1e-14, 1e-14, 3};
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tiny);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
    CHECK(e.kind() == ErrorKind::Convergence);
  }
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, std::numeric_limits<double>::infinity()),
                  DomainError);
  const std::vector<double> unsorted{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, unsorted), DomainError);
  const std::vector<double> single{0.0};
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, single), DomainError);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, QuadratureConfig{0.0, 0.0, 10}), DomainError);
}
