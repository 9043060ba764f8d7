#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mindex/algebra.hpp"
#include "mindex/corpus.hpp"
#include "mindex/order.hpp"

using namespace mindex;
using namespace mindex::algebra;
using Kind = ClassLabel::Kind;

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

ClassLabel predict(OpKind op, std::vector<ClassLabel> ls, std::optional<double> a = std::nullopt) {
  return predicted_class(op, ls, a);
}

}  // namespace

TEST_CASE("closure rules") {
  const auto m = ClassLabel::m;
  const auto inf = ClassLabel::m_inf();
  const auto neg = ClassLabel::m_neg_inf();

  CHECK(predict(OpKind::ScaleAdd, {m(-1.0), m(2.0)}, 3.0) == m(2.0));
  CHECK(predict(OpKind::ScaleAdd, {inf, m(2.0)}, 0.0) == m(2.0));
  CHECK(predict(OpKind::ScaleAdd, {inf, inf}, 1.0) == inf);
  CHECK(predict(OpKind::ScaleAdd, {inf, neg}, 1.0).kind == Kind::Undecided);

  CHECK(predict(OpKind::Reciprocal, {m(1.5)}) == m(-1.5));
  CHECK(predict(OpKind::Reciprocal, {inf}) == neg);
  CHECK(predict(OpKind::Reciprocal, {ClassLabel::oscillating(0.5, 1.0)}) == ClassLabel::oscillating(-1.0, -0.5));

  CHECK(predict(OpKind::Product, {m(1.0), m(-3.0)}) == m(-2.0));
  CHECK(predict(OpKind::Product, {m(7.0), inf}) == inf);
  CHECK(predict(OpKind::Product, {neg, inf}).kind == Kind::Undecided);

  CHECK(predict(OpKind::Convolve, {m(-2.0), m(-3.0)}) == m(-2.0));
  CHECK(predict(OpKind::Convolve, {m(-2.0), m(1.0)}) == m(1.0));
  CHECK(predict(OpKind::Convolve, {m(-0.5), m(1.0)}) == m(1.5));
  CHECK(predict(OpKind::Convolve, {m(-1.0), m(1.0)}).kind == Kind::Undecided);
  CHECK(predict(OpKind::Convolve, {inf, m(-0.5)}).kind == Kind::Undecided);
  CHECK(predict(OpKind::Convolve, {inf, m(-2.0)}) == m(-2.0));
  CHECK(predict(OpKind::Convolve, {neg, m(-2.0)}) == neg);

  CHECK(predict(OpKind::Compose, {m(-2.0), m(3.0)}) == m(-6.0));
  CHECK(predict(OpKind::Compose, {inf, neg}) == inf);
  CHECK(predict(OpKind::Compose, {m(1.0), m(-1.0)}).kind == Kind::Undecided);

  CHECK(predict(OpKind::Product, {ClassLabel::oscillating(0.0, 1.0), m(1.0)}).kind == Kind::Undecided);
}

TEST_CASE("operand validation") {
  CHECK(code_of([] { predict(OpKind::Product, {ClassLabel::m(1.0)}); }) == Errc::Arity);
  CHECK(code_of([] { predict(OpKind::Reciprocal, {ClassLabel::m(1.0), ClassLabel::m(1.0)}); }) == Errc::Arity);
  CHECK(code_of([] { predict(OpKind::ScaleAdd, {ClassLabel::m(1.0), ClassLabel::m(1.0)}, -1.0); }) ==
        Errc::Param);
  CHECK(code_of([] { scale_add(-2.0, make_exp_neg(), make_exp_neg()); }) == Errc::Param);
}

TEST_CASE("pointwise operations") {
  auto u = make_power_tail(-1.0);
  auto v = make_power_tail(2.0);
  CHECK(scale_add(3.0, u, v).eval(4.0) == doctest::Approx(3.0 / 4.0 + 16.0));
  CHECK(reciprocal(u).eval(4.0) == doctest::Approx(4.0));
  CHECK(product(u, v).eval(4.0) == doctest::Approx(4.0));
  CHECK(compose(u, v).eval(4.0) == doctest::Approx(1.0 / 16.0));
  CHECK(compose(make_exp_neg(), v).eval_log(10.0) == doctest::Approx(-100.0));
}

TEST_CASE("convolution matches closed forms") {
  auto one = make_power_tail(0.0);
  for (double x : {0.5, 3.0, 1e4}) CHECK(convolve(one, one).eval(x) == doctest::Approx(x).epsilon(1e-8));

  auto ramp = make_ramp_power(1.0);
  for (double x : {0.5, 3.0, 100.0}) {
    CHECK(convolve(ramp, ramp).eval(x) == doctest::Approx(x * x * x / 6.0).epsilon(1e-8));
  }

  // 1 on [0,1] and t^-2 beyond integrate to 2 - 1/x.
  auto tail = make_power_tail(-2.0);
  for (double x : {2.0, 10.0, 1e6}) {
    CHECK(convolve(tail, one).eval(x) == doctest::Approx(2.0 - 1.0 / x).epsilon(1e-8));
  }
}

TEST_CASE("classification agrees with the prediction") {
  auto check = [](const FunctionHandle& h, const GridSpec& g) {
    REQUIRE(h.truth());
    ClassLabel want = h.truth()->label;
    ClassLabel got = order::classify(h, g);
    CAPTURE(describe(want));
    CAPTURE(describe(got));
    CHECK(labels_agree(want, got, 0.05));
  };
  check(reciprocal(make_peter_paul()), wide_grid());
  check(product(make_power_tail(2.0), make_peter_paul()), wide_grid());
  check(scale_add(1.5, make_power_tail(-1.0), make_power_tail(-0.5)), wide_grid());
  check(product(make_exp_neg(), make_power_tail(3.0)), {});
  check(compose(make_power_tail(-1.0), make_power_tail(2.0)), {1.0, 150.0, 2000, 8});
  check(compose(make_exp_neg(), make_exp_pos()), {1.0, 2.8, 2000, 8});
  check(convolve(make_power_tail(-2.0), make_power_tail(-3.0)), {1.0, 40.0, 1000, 8});
  check(convolve(make_power_tail(-0.5), make_power_tail(-0.5)), {1.0, 40.0, 1000, 8});
}
