#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mindex/algebra.hpp"
#include "mindex/corpus.hpp"
#include "mindex/tauberian.hpp"

using namespace mindex;
using namespace mindex::tauberian;

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

const GridSpec kTransformGrid{1.0, 280.0, 2000, 8};

}  // namespace

TEST_CASE("transform of a ramp is Gamma(alpha + 1) s^-alpha") {
  for (double a : {0.5, 1.0, 2.5}) {
    auto u = make_ramp_power(a);
    for (double s : {1e-1, 1e-3, 1e-6}) {
      CHECK(laplace_stieltjes(u, s) == doctest::Approx(std::tgamma(a + 1.0) * std::pow(s, -a)).epsilon(1e-6));
    }
  }
}

TEST_CASE("transform at reciprocal") {
  auto h = transform_at_reciprocal(make_ramp_power(2.0));
  CHECK(h.eval(1e4) == doctest::Approx(2.0 * 1e8).epsilon(1e-6));
  CHECK(h.eval_log(1e200) == doctest::Approx(std::log(2.0) + 400.0 * std::log(10.0)).epsilon(1e-8));
}

TEST_CASE("config validation") {
  TransformConfig cfg;
  auto s = cfg.s_grid();
  CHECK(s.size() == 200);
  CHECK(s.front() == doctest::Approx(0.1));
  CHECK(s.back() == doctest::Approx(1e-8));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
  cfg.s_min = 1.0;
  CHECK(code_of([&] { cfg.validate(); }) == Errc::Param);
}

TEST_CASE("tauberian check") {
  for (double a : {0.5, 1.0, 3.0}) {
    auto rep = tauberian_check(make_ramp_power(a), {}, kTransformGrid, 0.05);
    CHECK(rep.condition == "TAUBERIAN");
    CHECK(rep.passed);
    CHECK(*rep.get("rho_transform") == doctest::Approx(a).epsilon(0.02));
    CHECK(rep.get("concave_fraction[eta=0]"));
  }
  auto mod = tauberian_check(make_ramp_modulated(1.0, 0.5), {}, kTransformGrid, 0.05);
  CHECK(mod.passed);
}

TEST_CASE("preconditions") {
  CHECK(code_of([] { require_vanishing_at_origin(make_power_tail(1.0)); }) == Errc::Precondition);
  CHECK(code_of([] { tauberian_check(make_power_tail(1.0), {}, kTransformGrid, 0.05); }) == Errc::Precondition);
  auto decaying = algebra::product(make_ramp_power(1.0), make_exp_neg());
  CHECK(code_of([&] { tauberian_check(decaying, {}, {}, 0.05); }) == Errc::ClassMismatch);
}
