#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mindex/corpus.hpp"
#include "mindex/evt.hpp"
#include "mindex/order.hpp"

using namespace mindex;
using namespace mindex::evt;
using Verdict = DomainReport::Verdict;

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

const std::vector<double> kProbe{0.5, 1.0, 2.0, 5.0, 10.0};

/// Tail of the Peter-and-Paul law written out directly.
double pp_tail(double y) { return y < 2.0 ? 1.0 : std::exp2(-std::floor(std::log2(y))); }

}  // namespace

TEST_CASE("generalized Pareto tail") {
  CHECK(GPDSpec{0.5}(2.0) == doctest::Approx(0.25));
  CHECK(GPDSpec{0.0}(3.0) == doctest::Approx(std::exp(-3.0)));
  CHECK(GPDSpec{-0.5}(1.0) == doctest::Approx(0.25));
  CHECK(code_of([] { GPDSpec{-1.0}(2.0); }) == Errc::Param);
}

TEST_CASE("quantiles") {
  auto par = make_distribution(make_pareto_tail(2.0));
  CHECK(par.analytic_quantile);
  CHECK(par.quantile(0.01) == doctest::Approx(10.0));
  CHECK(quantile_by_bisection(make_pareto_tail(2.0), 0.01) == doctest::Approx(10.0).epsilon(1e-12));

  auto pp = make_distribution(make_peter_paul());
  for (double u : {0.9, 0.3, 0.25, 1e-3, 1e-9}) {
    CHECK(pp.quantile(u) == doctest::Approx(quantile_by_bisection(make_peter_paul(), u)).epsilon(1e-12));
  }
  CHECK(code_of([&] { pp.quantile(0.0); }) == Errc::Quantile);
  CHECK(code_of([&] { par.quantile(1.0); }) == Errc::Quantile);

  auto generic = make_distribution(make_floor_log_tail());
  CHECK_FALSE(generic.analytic_quantile);
  const double q = generic.quantile(1e-3);
  CHECK(generic.tail.eval(q) <= 1e-3);
  CHECK(generic.tail.eval(q * (1.0 - 1e-9)) > 1e-3);

  CHECK(code_of([] { make_distribution(make_exp_pos()); }) == Errc::Param);
}

TEST_CASE("von Mises conditions") {
  for (double a : {0.5, 2.0, 4.0}) {
    CHECK(von_mises_frechet(make_distribution(make_pareto_tail(a))).value == doctest::Approx(a).epsilon(1e-4));
  }
  CHECK(std::abs(von_mises_gumbel(make_distribution(make_exp_neg())).value) <= 1e-4);
  CHECK(von_mises_gumbel(make_distribution(make_pareto_tail(2.0))).value == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(code_of([] { von_mises_frechet(make_distribution(make_peter_paul())); }) == Errc::NonDifferentiable);
}

TEST_CASE("tail index equals the Frechet index") {
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    const double kappa = order::estimate_kappa(make_pareto_tail(a)).value;
    CHECK(std::abs(kappa - a) <= 0.06);
  }
}

TEST_CASE("domain of attraction") {
  auto par = classify_domain_attraction(make_distribution(make_pareto_tail(2.0)));
  CHECK(par.verdict == Verdict::Frechet);
  CHECK(par.alpha == doctest::Approx(2.0).epsilon(0.01));

  auto lp = classify_domain_attraction(make_distribution(make_log_perturbed_power(1.5)));
  CHECK(lp.verdict == Verdict::Frechet);

  CHECK(classify_domain_attraction(make_distribution(make_exp_neg())).verdict == Verdict::GumbelInfCandidate);
  auto pp = classify_domain_attraction(make_distribution(make_peter_paul()));
  CHECK(pp.verdict == Verdict::NotClassified);
  CHECK(pp.label.is_m());
  CHECK(classify_domain_attraction(make_distribution(make_floor_log_tail())).verdict == Verdict::NotClassified);

  auto bounded = make_distribution(make_pareto_tail(2.0), [](double u) { return std::pow(u, -0.5); }, 5.0);
  CHECK(code_of([&] { classify_domain_attraction(bounded); }) == Errc::Endpoint);

  for (auto v : {Verdict::Frechet, Verdict::GumbelInfCandidate, Verdict::NotClassified}) {
    CHECK(verdict_from_string(to_string(v)) == v);
  }
}

TEST_CASE("generalized Pareto ratio probe") {
  auto fam = default_scale_family(0.5);
  REQUIRE(fam.size() == 3);
  auto ok = gpd_ratio_probe(make_distribution(make_pareto_tail(2.0)), 0.5, fam, kProbe, {}, 0.01);
  CHECK(ok.condition == "PBDH");
  CHECK(ok.passed);
  CHECK(*ok.get("gpd_err_max[c*u]") <= 1e-9);

  auto fam1 = default_scale_family(1.0);
  CHECK_FALSE(gpd_ratio_probe(make_distribution(make_peter_paul()), 1.0, fam1, kProbe, {}, 0.05).passed);
}

TEST_CASE("block maxima simulation") {
  auto d = make_distribution(make_pareto_tail(1.0));
  const std::vector<std::uint64_t> ns{1000};
  auto r = block_maxima_simulate(d, ns, 4000, 11, {}, 1.0);
  REQUIRE(r.a_n.size() == 1);
  CHECK(r.a_n[0] == doctest::Approx(1000.0));
  for (std::size_t i = 0; i < r.abscissae.size(); ++i) {
    const double x = r.abscissae[i];
    // Tail 1/(1000 x) beyond 1/1000, CDF 0 below it.
    const double want = x * 1000.0 < 1.0 ? 0.0 : std::pow(1.0 - 1.0 / (1000.0 * x), 1000.0);
    CHECK(r.exact_cdfs[0][i] == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::abs(r.empirical_cdfs[0][i] - want) <= 4.0 / std::sqrt(4000.0));
  }
  REQUIRE(r.distances.size() == 1);
  CHECK(r.distances[0] <= 0.05);

  CHECK(block_maxima_simulate(d, ns, 300, 5) == block_maxima_simulate(d, ns, 300, 5));
  CHECK_FALSE(block_maxima_simulate(d, ns, 300, 5) == block_maxima_simulate(d, ns, 300, 6));
  CHECK(code_of([&] { block_maxima_simulate(d, ns, 0, 5); }) == Errc::Param);

  Normalization bad;
  bad.rule = Normalization::Rule::Custom;
  CHECK(code_of([&] { block_maxima_simulate(d, ns, 10, 5, bad); }) == Errc::Param);
  Normalization custom{Normalization::Rule::Custom, {1000.0}, {0.0}};
  CHECK(block_maxima_simulate(d, ns, 50, 5, custom).exact_cdfs == r.exact_cdfs);
}

TEST_CASE("subsequence witness for peter_paul") {
  auto d = make_distribution(make_peter_paul());
  const std::vector<int> ks{6, 10, 14};
  auto w = subsequence_witness(d, ks, 2000, 3);
  REQUIRE(w.ks_exact.size() == 3);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    // Normalizers are 2^k and 2^(k+2); both maxima CDFs are constant between powers of two.
    const double n1 = w.n_first[i];
    const double n2 = w.n_second[i];
    const double a1 = std::exp2(ks[i]);
    const double a2 = std::exp2(ks[i] + 2);
    double sup = 0.0;
    for (int m = -10; m <= 20; ++m) {
      const double x = std::exp2(m);
      auto cdf = [](double n, double a, double x) {
        const double t = pp_tail(a * x);
        return t >= 1.0 ? 0.0 : std::exp(n * std::log1p(-t));
      };
      sup = std::max(sup, std::abs(cdf(n1, a1, x) - cdf(n2, a2, x)));
    }
    CHECK(w.ks_exact[i] == doctest::Approx(sup).epsilon(1e-9));
    CHECK(w.ks_exact[i] >= 0.1);
    CHECK(w.ks_simulated[i] >= 0.05);
  }
  const std::vector<int> bad{0};
  CHECK(code_of([&] { subsequence_witness(d, bad, 10, 1); }) == Errc::Param);
}
