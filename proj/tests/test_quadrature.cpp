#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mindex/core.hpp"
#include "mindex/quadrature.hpp"

using namespace mindex;

TEST_CASE("polynomials and exponentials") {
  auto r = integrate_log([](double t) { return 2.0 * std::log(t); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(std::exp(r.log_value) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto e = integrate_log([](double t) { return -t; }, 0.0, 50.0);
  CHECK(std::exp(e.log_value) == doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-12));
}

TEST_CASE("integrands far outside the double range") {
  // exp(2000 - t) on [0, 10]: log of the integral is 2000 + log(1 - e^-10).
  auto r = integrate_log([](double t) { return 2000.0 - t; }, 0.0, 10.0);
  CHECK(r.converged);
  CHECK(r.log_value == doctest::Approx(2000.0 + std::log1p(-std::exp(-10.0))).epsilon(1e-14));
  auto tiny = integrate_log([](double t) { return -3000.0 + t; }, 0.0, 1.0);
  CHECK(tiny.log_value == doctest::Approx(-3000.0 + std::log(std::exp(1.0) - 1.0)).epsilon(1e-14));
}

TEST_CASE("breakpoints make step integrands exact") {
  // Step function 1 on [0, 0.3), 5 on [0.3, 1].
  auto f = [](double t) { return t < 0.3 ? 0.0 : std::log(5.0); };
  const std::vector<double> br{0.3};
  auto r = integrate_log(f, 0.0, 1.0, {}, br);
  CHECK(std::exp(r.log_value) == doctest::Approx(0.3 + 5.0 * 0.7).epsilon(1e-13));
}

TEST_CASE("zero integrand and empty interval") {
  auto r = integrate_log([](double) { return -kInf; }, 0.0, 1.0);
  CHECK(r.log_value == -kInf);
  auto empty = integrate_log([](double) { return 0.0; }, 1.0, 1.0);
  CHECK(empty.log_value == -kInf);
}

TEST_CASE("evaluation budget is honoured") {
  QuadratureConfig tight{1e-14, 200};
  auto r = integrate_log([](double t) { return std::log(2.0 + std::sin(1.0 / (t + 1e-3))); }, 0.0, 1.0, tight);
  CHECK(r.evaluations <= 200 + 45);
  CHECK_FALSE(r.converged);
}

TEST_CASE("Gauss-Legendre rule is exact for low-degree polynomials") {
  CHECK(gauss_legendre([](double t) { return std::pow(t, 21) + 3.0 * t * t; }, 0.0, 2.0) ==
        doctest::Approx(std::pow(2.0, 22) / 22.0 + 8.0).epsilon(1e-13));
  CHECK(gauss_legendre_log([](double t) { return std::log(t); }, 1.0, 3.0) == doctest::Approx(std::log(4.0)));
}
