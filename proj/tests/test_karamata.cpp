#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mindex/corpus.hpp"
#include "mindex/karamata.hpp"

using namespace mindex;
using namespace mindex::karamata;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Param;
}

/// Integral of 2^-floor(log2 t) over [lo, x], summed level by level.
double piecewise_sum(double lo, double x) {
  double total = 0.0;
  double left = lo;
  while (left < x) {
    const int k = static_cast<int>(std::floor(std::log2(left)));
    const double right = std::min(x, std::ldexp(1.0, k + 1));
    total += (right - left) * std::ldexp(1.0, -k);
    left = right;
  }
  return total;
}

}  // namespace

TEST_CASE("peter_paul partial integral") {
  for (double x : {4.0, 5.5, 1000.0, 12345.678, 1e9}) {
    CHECK(peter_paul_partial_integral(x, 1) == doctest::Approx(piecewise_sum(2.0, x)).epsilon(1e-12));
  }
  CHECK(code_of([] { peter_paul_partial_integral(3.0, 1); }) == Errc::Param);

  const GridSpec g{0.0, 9.0, 400, 8};
  auto ci = cumulative_integral(make_peter_paul(), IntegralKind::V, 0.0, 2.0, g);
  REQUIRE_FALSE(ci.x.empty());
  for (std::size_t i = 0; i < ci.x.size(); i += 37) {
    CHECK(std::exp(ci.log_value[i]) == doctest::Approx(piecewise_sum(2.0, ci.x[i])).epsilon(1e-8));
  }
}

TEST_CASE("cumulative integrals of a power") {
  // t^r U(t) = t^(1 - 1/2), so V = (x^1.5 - 2^1.5) / 1.5 and W_(-1) = 2 x^-0.5.
  auto u = make_power_tail(-0.5);
  const GridSpec g{0.0, 8.0, 500, 8};
  auto v = cumulative_integral(u, IntegralKind::V, 1.0, 2.0, g);
  for (std::size_t i = 0; i < v.x.size(); i += 50) {
    const double want = (std::pow(v.x[i], 1.5) - std::pow(2.0, 1.5)) / 1.5;
    CHECK(std::exp(v.log_value[i]) == doctest::Approx(want).epsilon(1e-8));
  }
  auto w = cumulative_integral(u, IntegralKind::W, -1.0, 2.0, g);
  for (std::size_t i = 0; i < w.x.size(); i += 50) {
    CHECK(std::exp(w.log_value[i]) == doctest::Approx(2.0 / std::sqrt(w.x[i])).epsilon(1e-6));
  }
  CHECK(code_of([&] { cumulative_integral(make_power_tail(-1.0), IntegralKind::W, 0.0, 2.0, g); }) ==
        Errc::DivergentTail);
  CHECK(code_of([&] { cumulative_integral(u, IntegralKind::V, 0.0, -1.0, g); }) == Errc::Param);

  auto h = v.as_handle();
  CHECK(h.eval_log(v.x[100]) == doctest::Approx(v.log_value[100]));
}

TEST_CASE("karamata limits follow rho + r") {
  auto u = make_power_tail(-0.5);
  CHECK(karamata_limit(u, 1.0, 2.0, Side::Lower, wide_grid()).value == doctest::Approx(0.5).epsilon(0.02));
  CHECK(karamata_limit(u, -1.0, 2.0, Side::Upper, wide_grid()).value == doctest::Approx(-1.5).epsilon(0.02));
}

TEST_CASE("branch selection") {
  auto u = make_power_tail(-2.0);
  auto k1 = karamata_theorem_report(u, 3.0, 2.0, wide_grid(), 0.05);
  CHECK(k1.condition == "K1*");
  CHECK(k1.passed);
  auto k2 = karamata_theorem_report(u, 1.0, 2.0, wide_grid(), 0.05);
  CHECK(k2.condition == "K2*");
  CHECK(k2.passed);
  auto k3 = karamata_theorem_report(u, 2.0, 2.0, wide_grid(), 0.05);
  CHECK(k3.condition == "K3*");
  CHECK(k3.passed);
  CHECK(*k1.get("rho_from_limit") == doctest::Approx(-2.0).epsilon(0.03));

  auto pp = karamata_theorem_report(make_peter_paul(), 1.0, 2.0, wide_grid(), 0.05);
  CHECK(pp.condition == "K3*");
  CHECK(pp.passed);
  CHECK(code_of([] { karamata_theorem_report(make_exp_neg(), 1.0, 2.0, {}, 0.05); }) == Errc::ClassMismatch);
}

TEST_CASE("representation") {
  for (double a : {-2.0, 0.5, 3.0}) {
    auto u = make_power_tail(a);
    auto rep = extract_representation(u, 2.0, wide_grid());
    CHECK_FALSE(rep.kappa_zero_mode);
    CHECK(verify_representation(u, rep, wide_grid(), 0.05).passed);
  }
  auto pp = make_peter_paul();
  auto rep = extract_representation(pp, 2.0, wide_grid());
  auto check = verify_representation(pp, rep, wide_grid(), 0.05);
  CHECK(check.passed);
  CHECK(*check.get("residual") <= 1e-9);

  auto flat = make_two_plus_sin();
  auto zero = extract_representation(flat, 2.0, wide_grid());
  CHECK(zero.kappa_zero_mode);
  CHECK(verify_representation(flat, zero, wide_grid(), 0.05).passed);

  CHECK(code_of([] { extract_representation(make_exp_neg(), 2.0, {}); }) == Errc::ClassMismatch);
}

TEST_CASE("infinite-class representation") {
  for (const auto& u : {make_exp_neg(), make_exp_pos(), make_floor_log_tail()}) {
    auto rep = extract_representation_inf(u, 2.0);
    CHECK(verify_representation_inf(u, rep, {}).passed);
  }
  CHECK(code_of([] { extract_representation_inf(make_power_tail(-1.0), 2.0); }) == Errc::ClassMismatch);
}
