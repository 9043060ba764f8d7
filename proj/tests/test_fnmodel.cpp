#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mindex/corpus.hpp"
#include "mindex/table.hpp"

using namespace mindex;

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

}  // namespace

TEST_CASE("log_add handles infinities and large gaps") {
  CHECK(log_add(-kInf, 3.0) == 3.0);
  CHECK(log_add(3.0, -kInf) == 3.0);
  CHECK(log_add(0.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(log_add(1000.0, 0.0) == doctest::Approx(1000.0));
  const std::vector<double> xs{std::log(1.0), std::log(2.0), std::log(3.0)};
  CHECK(log_sum(xs) == doctest::Approx(std::log(6.0)));
}

TEST_CASE("class labels") {
  CHECK(describe(ClassLabel::m(-2.0)) == "M(-2)");
  CHECK(ClassLabel::m_inf().is_infinite());
  CHECK_FALSE(ClassLabel::undecided().decided());
  CHECK(code_of([] { ClassLabel::m(kInf); }) == Errc::Param);
  CHECK(code_of([] { ClassLabel::oscillating(1.0, 0.5); }) == Errc::Param);
  CHECK(labels_agree(ClassLabel::m(1.0), ClassLabel::m(1.04), 0.05));
  CHECK_FALSE(labels_agree(ClassLabel::m(1.0), ClassLabel::m(1.06), 0.05));
  CHECK_FALSE(labels_agree(ClassLabel::m_inf(), ClassLabel::m_neg_inf(), 0.05));
  for (auto k : {ClassLabel::Kind::M, ClassLabel::Kind::MInf, ClassLabel::Kind::MNegInf, ClassLabel::Kind::Oscillating,
                 ClassLabel::Kind::Undecided}) {
    CHECK(class_kind_from_string(to_string(k)) == k);
  }
}

TEST_CASE("power family values and truth") {
  for (double a : {-3.0, -1.0, 0.0, 2.0, 3.0}) {
    auto u = make_power_tail(a);
    CHECK(u.eval(0.5) == 1.0);
    CHECK(u.eval(10.0) == doctest::Approx(std::pow(10.0, a)));
    REQUIRE(u.truth());
    CHECK(*u.truth()->rho == a);
    CHECK(*u.truth()->kappa == -a);
    CHECK(u.truth()->is_tail == (a <= 0.0));
  }
}

TEST_CASE("every tail in the corpus has a nonnegative index") {
  for (const auto& name : catalog_names()) {
    std::map<std::string, double> p;
    if (name == "power_tail" || name == "pareto_tail" || name == "log_perturbed_power" || name == "ramp_power" ||
        name == "ramp_modulated") {
      p["alpha"] = name == "power_tail" ? -1.0 : 1.0;
    }
    auto u = make_named(name, p);
    REQUIRE(u.truth());
    if (u.truth()->is_tail) CHECK(*u.truth()->kappa >= 0.0);
    if (u.truth()->rho) CHECK(*u.truth()->kappa == -*u.truth()->rho);
  }
}

TEST_CASE("peter_paul levels are right-continuous powers of two") {
  auto pp = make_peter_paul();
  CHECK(pp.eval(1.5) == 1.0);
  CHECK(pp.eval(2.0) == 0.5);
  CHECK(pp.eval(3.999) == 0.5);
  CHECK(pp.eval(4.0) == 0.25);
  CHECK(pp.eval(std::ldexp(1.0, 40)) == std::ldexp(1.0, -40));
  CHECK(pp.eval(std::nextafter(std::ldexp(1.0, 40), 0.0)) == doctest::Approx(std::ldexp(1.0, -39)));
  auto j = pp.jumps(3.0, 40.0);
  CHECK(j == std::vector<double>{4.0, 8.0, 16.0, 32.0});
}

TEST_CASE("oset_geometric levels and orders") {
  auto u = make_oset_geometric(1.0, 0.0, 2.0);
  // x_n = 2^(2^n): 4, 16, 256, 65536; level x_n on [x_n, x_{n+1}).
  CHECK(u.eval(5.0) == doctest::Approx(4.0));
  CHECK(u.eval(255.0) == doctest::Approx(16.0));
  CHECK(u.eval(256.0) == doctest::Approx(256.0));
  CHECK(*u.truth()->mu == doctest::Approx(0.5));
  CHECK(*u.truth()->nu == doctest::Approx(1.0));
  CHECK_FALSE(u.truth()->is_tail);
  auto tail = make_oset_geometric(1.0, -2.0, 2.0);
  CHECK(tail.truth()->is_tail);
  CHECK(*tail.truth()->mu == doctest::Approx(-1.0));
  CHECK(*tail.truth()->nu == doctest::Approx(-0.5));
}

TEST_CASE("oset_tower requires a diverging tower") {
  auto t = make_oset_tower(1.0, -1.0);
  CHECK(t.eval(3.0) == doctest::Approx(0.25));  // level 2^-2 on [2, 4)
  CHECK(t.eval(20.0) == doctest::Approx(std::ldexp(1.0, -16)));
  CHECK(code_of([] { make_oset_tower(2.0, -1.0); }) == Errc::Param);
}

TEST_CASE("make_named validates names and parameters") {
  CHECK(code_of([] { make_named("no_such_fn"); }) == Errc::UnknownName);
  CHECK(code_of([] { make_named("pareto_tail"); }) == Errc::Param);
  CHECK(code_of([] { make_named("peter_paul", {{"alpha", 1.0}}); }) == Errc::Param);
  CHECK(code_of([] { make_named("pareto_tail", {{"alpha", -1.0}}); }) == Errc::Param);
  CHECK(make_named("power_tail", {{"alpha", 2.0}}).eval(3.0) == doctest::Approx(9.0));
}

TEST_CASE("evaluation outside the support is a domain error") {
  auto u = make_exp_neg_sq();
  CHECK(code_of([&] { u.eval_log(-1.0); }) == Errc::Domain);
  CHECK(code_of([&] { u.eval_log(1e200); }) == Errc::Domain);
}

TEST_CASE("remark7_mix takes the value 1/x inside the shrinking intervals") {
  auto u = make_remark7_mix();
  for (int n : {2, 3, 4}) {
    const double x = n + std::pow(n, -n) / 2.0;
    CHECK(u.eval_log(x) == doctest::Approx(-std::log(x)));
  }
  CHECK(u.eval_log(5.5) == doctest::Approx(-5.5));
}

TEST_CASE("tables interpolate in log-log space") {
  TableData t;
  for (int i = 0; i < 10; ++i) {
    double x = std::pow(10.0, i);
    t.rows.push_back({x, TableData::ValueKind::Linear, 1.0 / (x * x)});
  }
  auto u = from_table(t);
  CHECK(u.eval_log(std::sqrt(10.0)) == doctest::Approx(-std::log(10.0)));
  CHECK(code_of([&] { u.eval_log(1e10); }) == Errc::Domain);
  CHECK(code_of([&] { u.eval_log(0.5); }) == Errc::Domain);
}

TEST_CASE("table validation") {
  auto rows = [](std::size_t n) {
    TableData t;
    for (std::size_t i = 0; i < n; ++i) t.rows.push_back({double(i + 1), TableData::ValueKind::Linear, 1.0});
    return t;
  };
  CHECK(code_of([&] { from_table(rows(7)); }) == Errc::Format);
  auto unsorted = rows(9);
  std::swap(unsorted.rows[2].x, unsorted.rows[3].x);
  CHECK(code_of([&] { from_table(unsorted); }) == Errc::Format);
  auto nonpositive = rows(9);
  nonpositive.rows[4].v = 0.0;
  CHECK(code_of([&] { from_table(nonpositive); }) == Errc::PositivityViolation);
  auto logs = rows(9);
  for (auto& r : logs.rows) {
    r.kind = TableData::ValueKind::Log;
    r.v = -5.0;
  }
  CHECK(from_table(logs).eval_log(3.0) == doctest::Approx(-5.0));
}

TEST_CASE("csv parsing") {
  std::string text = "x,value\n";
  for (int i = 1; i <= 8; ++i) text += std::to_string(i) + "," + std::to_string(1.0 / i) + "\n";
  auto t = parse_csv(text);
  CHECK(t.rows.size() == 8);
  CHECK(t.rows[1].kind == TableData::ValueKind::Linear);

  std::string logs = "x,logvalue\r\n";
  for (int i = 1; i <= 8; ++i) logs += std::to_string(i) + ",-1.5\r\n";
  CHECK(parse_csv(logs).rows[0].kind == TableData::ValueKind::Log);

  CHECK(code_of([] { parse_csv("a,b\n1,2\n"); }) == Errc::Format);
  CHECK(code_of([] { parse_csv("x,value\n1,abc\n"); }) == Errc::Format);
  CHECK(code_of([] { read_csv("/nonexistent/file.csv"); }) == Errc::Format);

  const auto path = std::filesystem::temp_directory_path() / "mindex_fnmodel.csv";
  std::ofstream(path) << text;
  CHECK(read_csv(path).rows.size() == 8);
}
