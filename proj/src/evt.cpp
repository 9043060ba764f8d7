#include "mindex/evt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mindex/order.hpp"

namespace mindex::evt {

namespace {

double checked_u(double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(Errc::Quantile, "quantile level must lie in (0, 1)");
  return u;
}

}  // namespace

double quantile_by_bisection(const FunctionHandle& tail, double u) {
  checked_u(u);
  const double log_u = std::log(u);
  auto below = [&](double x) { return tail.eval_log(x) <= log_u; };
  double hi = std::max(1.0, tail.support_floor() * 2.0);
  while (!below(hi)) {
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > tail.support_ceiling()) throw Error(Errc::Quantile, "tail never drops below the level");
  }
  double lo = hi / 2.0;
  while (lo > tail.support_floor() && lo > 1e-300 && below(lo)) lo /= 2.0;
  if (below(lo)) return lo;
  // Invariant: tail(lo) > u >= tail(hi).
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

DistributionHandle make_distribution(const FunctionHandle& tail, std::function<double(double)> quantile,
                                     double endpoint) {
  if (!tail.truth() || !tail.truth()->is_tail) {
    throw Error(Errc::Param, tail.name() + " is not marked as a distribution tail");
  }
  DistributionHandle d{tail, {}, endpoint, false};
  d.analytic_quantile = static_cast<bool>(quantile);
  if (quantile) {
    d.quantile = [q = std::move(quantile)](double u) { return q(checked_u(u)); };
  } else {
    d.quantile = [tail](double u) { return quantile_by_bisection(tail, u); };
  }
  return d;
}

DistributionHandle make_distribution(const FunctionHandle& tail) {
  const std::string& n = tail.name();
  std::function<double(double)> q;
  if (n == "pareto_tail") {
    const double a = tail.params().at("alpha");
    q = [a](double u) { return std::pow(u, -1.0 / a); };
  } else if (n == "power_tail" && tail.params().at("alpha") < 0.0) {
    const double a = tail.params().at("alpha");
    q = [a](double u) { return std::pow(u, 1.0 / a); };
  } else if (n == "peter_paul") {
    // Left end of the level set: the smallest 2^n (n >= 1) with 2^-n <= u.
    q = [](double u) {
      int n = static_cast<int>(std::ceil(-std::log2(u)));
      return std::ldexp(1.0, std::max(n, 1));
    };
  } else if (n == "exp_neg") {
    q = [](double u) { return -std::log(u); };
  } else if (n == "exp_neg_sq") {
    q = [](double u) { return std::sqrt(-std::log(u)); };
  }
  return make_distribution(tail, std::move(q), kInf);
}

double GPDSpec::operator()(double x) const {
  if (xi == 0.0) return std::exp(-x);
  const double base = 1.0 + xi * x;
  if (!(base > 0.0)) throw Error(Errc::Param, "generalized Pareto argument needs 1 + xi x > 0");
  return std::pow(base, -1.0 / xi);
}

namespace {

void require_smooth(const DistributionHandle& d) {
  if (d.tail.has_jumps()) throw Error(Errc::NonDifferentiable, d.tail.name() + " is a step function");
}

/// d log tail / dx by a central difference with relative step.
double dlog_dx(const FunctionHandle& tail, double x, double rel) {
  const double h = rel * x;
  return (tail.eval_log(x + h) - tail.eval_log(x - h)) / (2.0 * h);
}

}  // namespace

IndexEstimate von_mises_frechet(const DistributionHandle& d, const GridSpec& grid, double rel_step) {
  require_smooth(d);
  if (!(rel_step > 0.0 && rel_step < 0.5)) throw Error(Errc::Param, "relative step must lie in (0, 0.5)");
  const auto xs = grid.abscissae();
  std::vector<double> v(xs.size());
  const double span = std::log1p(rel_step) - std::log1p(-rel_step);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // x F'(x) / tail(x) = -d log tail / d log x
    v[i] = -(d.tail.eval_log(xs[i] * (1.0 + rel_step)) - d.tail.eval_log(xs[i] * (1.0 - rel_step))) / span;
  }
  return limit_estimate(summarize_windows(xs, v, grid, WindowScale::Auto), grid);
}

IndexEstimate von_mises_gumbel(const DistributionHandle& d, const GridSpec& grid) {
  require_smooth(d);
  const auto xs = grid.abscissae();
  std::vector<double> v(xs.size());
  // tail / F' = -1 / (d log tail / dx); its derivative by a five-point stencil.
  auto ratio = [&d](double x) { return -1.0 / dlog_dx(d.tail, x, 1e-6); };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double k = 1e-3 * x;
    v[i] = (-ratio(x + 2 * k) + 8 * ratio(x + k) - 8 * ratio(x - k) + ratio(x - 2 * k)) / (12 * k);
  }
  return limit_estimate(summarize_windows(xs, v, grid, WindowScale::Auto), grid);
}

std::string_view to_string(DomainReport::Verdict v) {
  switch (v) {
    case DomainReport::Verdict::Frechet: return "Frechet";
    case DomainReport::Verdict::GumbelInfCandidate: return "GumbelInfCandidate";
    case DomainReport::Verdict::NotClassified: return "NotClassified";
  }
  return "NotClassified";
}

DomainReport::Verdict verdict_from_string(std::string_view s) {
  for (auto v : {DomainReport::Verdict::Frechet, DomainReport::Verdict::GumbelInfCandidate,
                 DomainReport::Verdict::NotClassified}) {
    if (to_string(v) == s) return v;
  }
  throw Error(Errc::Format, "unknown domain verdict '" + std::string(s) + "'");
}

DomainReport classify_domain_attraction(const DistributionHandle& d, const GridSpec& grid, double tol) {
  if (std::isfinite(d.endpoint)) throw Error(Errc::Endpoint, "only distributions with an infinite endpoint are supported");
  DomainReport rep;
  rep.label = order::classify(d.tail, grid, tol);

  static const std::vector<double> kTs{2.0, 3.0, 5.0, 10.0};
  ConditionReport rv = order::rv_ratio_test(d.tail, kTs, grid, tol);
  rep.evidence.push_back(rv);
  if (rv.passed) {
    const double rho = *rv.get("rho");
    if (rho < -tol) {
      rep.verdict = DomainReport::Verdict::Frechet;
      rep.alpha = -rho;
      return rep;
    }
  }
  if (rep.label.kind == ClassLabel::Kind::MInf && !d.tail.has_jumps()) {
    IndexEstimate vm2 = von_mises_gumbel(d, grid);
    ConditionReport c;
    c.condition = "VM2";
    c.tolerance = tol;
    c.set("limit", vm2.value);
    c.set("spread", vm2.spread);
    c.passed = std::abs(vm2.value) <= tol && vm2.spread <= tol;
    rep.evidence.push_back(c);
    if (c.passed) rep.verdict = DomainReport::Verdict::GumbelInfCandidate;
  }
  return rep;
}

std::vector<ScaleFunction> default_scale_family(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(Errc::Param, "scale constant must be positive");
  return {{"c*u", [c](double u) { return c * u; }},
          {"c*sqrt(u)", [c](double u) { return c * std::sqrt(u); }},
          {"c", [c](double) { return c; }}};
}

ConditionReport gpd_ratio_probe(const DistributionHandle& d, double xi, std::span<const ScaleFunction> family,
                                std::span<const double> x_probe, const GridSpec& u_grid, double tol) {
  if (family.empty() || x_probe.empty()) throw Error(Errc::Param, "probe needs scale functions and probe points");
  if (!(tol > 0.0)) throw Error(Errc::Param, "tolerance must be positive");
  const GPDSpec g{xi};
  std::vector<double> targets;
  for (double x : x_probe) {
    if (!(x >= 0.0)) throw Error(Errc::Param, "probe points must be nonnegative");
    targets.push_back(g(x));
  }

  std::vector<double> us = u_grid.abscissae();
  if (d.tail.has_jumps()) {
    for (double j : d.tail.jumps(us.front(), us.back())) {
      us.push_back(j * (1.0 - 1e-12));
      us.push_back(j);
    }
    std::sort(us.begin(), us.end());
  }

  ConditionReport out;
  out.condition = "PBDH";
  out.tolerance = tol;
  out.set("xi", xi);
  bool any = false;
  for (const auto& sf : family) {
    double worst_spread = 0.0;
    double worst_err = 0.0;
    for (std::size_t k = 0; k < x_probe.size(); ++k) {
      std::vector<double> ratio(us.size());
      for (std::size_t i = 0; i < us.size(); ++i) {
        const double a = sf.a(us[i]);
        if (!(a > 0.0)) throw Error(Errc::Param, "scale function must be positive");
        ratio[i] = std::exp(d.tail.eval_log(us[i] + x_probe[k] * a) - d.tail.eval_log(us[i]));
      }
      WindowSummary s = summarize_windows(us, ratio, u_grid, WindowScale::Coarse);
      const double spread = std::abs(s.upper - s.lower);
      double lo = s.window_min.front();
      double hi = s.window_max.front();
      for (std::size_t w = 0; w < s.window_min.size(); ++w) {
        lo = std::min(lo, s.window_min[w]);
        hi = std::max(hi, s.window_max[w]);
      }
      // Persistent spread is the range seen inside the windows, not just their overlap.
      const double persistent = std::max(spread, hi - lo);
      worst_spread = std::max(worst_spread, persistent);
      worst_err = std::max(worst_err, std::abs(0.5 * (s.lower + s.upper) - targets[k]));
    }
    out.set("spread_max[" + sf.name + "]", worst_spread);
    out.set("gpd_err_max[" + sf.name + "]", worst_err);
    if (worst_spread <= tol && worst_err <= tol) any = true;
  }
  out.passed = any;
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ replica);
}

/// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

/// Normalized block maxima (M_n - b_n)/a_n for `reps` replicas. Since the
/// quantile is non-increasing, the maximum of Q(U_j) is Q(min U_j).
std::vector<double> simulate_maxima(const DistributionHandle& d, std::uint64_t n, double a_n, double b_n,
                                    std::uint64_t reps, std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> z(reps);
  for (std::uint64_t i = 0; i < reps; ++i) {
    std::mt19937_64 rng(stream_seed(seed, stream, i));
    double u_min = 1.0;
    for (std::uint64_t j = 0; j < n; ++j) u_min = std::min(u_min, open_uniform(rng));
    z[i] = (d.quantile(u_min) - b_n) / a_n;
  }
  return z;
}

double exact_maxima_cdf(const DistributionHandle& d, std::uint64_t n, double a_n, double b_n, double x) {
  const double y = a_n * x + b_n;
  if (!(y > d.tail.support_floor())) return 0.0;
  const double tail = d.tail.eval(y);
  if (tail >= 1.0) return 0.0;
  return std::exp(static_cast<double>(n) * std::log1p(-tail));
}

double frechet_cdf(double alpha, double z) { return z > 0.0 ? std::exp(-std::pow(z, -alpha)) : 0.0; }

}  // namespace

SimulationResult block_maxima_simulate(const DistributionHandle& d, std::span<const std::uint64_t> n_values,
                                       std::uint64_t reps, std::uint64_t seed, const Normalization& norm,
                                       std::optional<double> candidate_alpha, std::vector<double> abscissae) {
  if (reps == 0) throw Error(Errc::Param, "reps must be positive");
  if (n_values.empty()) throw Error(Errc::Param, "at least one block size is required");
  if (candidate_alpha && !(*candidate_alpha > 0.0)) throw Error(Errc::Param, "candidate alpha must be positive");
  if (norm.rule == Normalization::Rule::Custom &&
      (norm.a_n.size() != n_values.size() || norm.b_n.size() != n_values.size())) {
    throw Error(Errc::Param, "custom normalization needs one (a_n, b_n) per block size");
  }
  if (!d.quantile) throw Error(Errc::Quantile, "distribution has no quantile function");

  SimulationResult res;
  res.reps = reps;
  res.seed = seed;
  res.candidate_alpha = candidate_alpha;
  res.abscissae = std::move(abscissae);
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const std::uint64_t n = n_values[k];
    if (n == 0) throw Error(Errc::Param, "block sizes must be positive");
    double a = 0.0;
    double b = 0.0;
    if (norm.rule == Normalization::Rule::FrechetStandard) {
      a = d.quantile(1.0 / static_cast<double>(n) < 1.0 ? 1.0 / static_cast<double>(n) : 0.5);
    } else {
      a = norm.a_n[k];
      b = norm.b_n[k];
    }
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) throw Error(Errc::Quantile, "invalid normalizing constants");
    res.n_values.push_back(n);
    res.a_n.push_back(a);
    res.b_n.push_back(b);

    std::vector<double> z = simulate_maxima(d, n, a, b, reps, seed, k);
    std::sort(z.begin(), z.end());
    std::vector<double> emp;
    std::vector<double> exact;
    for (double x : res.abscissae) {
      auto cnt = std::upper_bound(z.begin(), z.end(), x) - z.begin();
      emp.push_back(static_cast<double>(cnt) / static_cast<double>(reps));
      exact.push_back(exact_maxima_cdf(d, n, a, b, x));
    }
    res.empirical_cdfs.push_back(std::move(emp));
    res.exact_cdfs.push_back(std::move(exact));
    if (candidate_alpha) {
      double ks = 0.0;
      const double m = static_cast<double>(reps);
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = frechet_cdf(*candidate_alpha, z[i]);
        ks = std::max({ks, std::abs(static_cast<double>(i + 1) / m - f), std::abs(f - static_cast<double>(i) / m)});
      }
      res.distances.push_back(ks);
    }
  }
  return res;
}

namespace {

/// sup |F1 - F2| between two empirical distributions, ties included.
double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double v = std::min(i < a.size() ? a[i] : kInf, j < b.size() ? b[j] : kInf);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

SubsequenceWitness subsequence_witness(const DistributionHandle& d, std::span<const int> ks, std::uint64_t reps,
                                       std::uint64_t seed) {
  if (reps == 0) throw Error(Errc::Param, "reps must be positive");
  if (ks.empty()) throw Error(Errc::Param, "at least one k is required");
  SubsequenceWitness w;
  w.reps = reps;
  w.seed = seed;
  std::uint64_t stream = 0;
  for (int k : ks) {
    if (k < 1 || k > 40) throw Error(Errc::Param, "k must lie in [1, 40]");
    const std::uint64_t n1 = std::uint64_t{1} << k;
    const std::uint64_t n2 = 3 * n1;
    const double a1 = d.quantile(1.0 / static_cast<double>(n1));
    const double a2 = d.quantile(1.0 / static_cast<double>(n2));
    w.n_first.push_back(n1);
    w.n_second.push_back(n2);
    w.ks_simulated.push_back(two_sample_ks(simulate_maxima(d, n1, a1, 0.0, reps, seed, stream),
                                           simulate_maxima(d, n2, a2, 0.0, reps, seed, stream + 1)));
    stream += 2;
    double sup = 0.0;
    for (int j = -80; j <= 160; ++j) {
      const double x = std::exp2(j / 8.0);
      sup = std::max(sup, std::abs(exact_maxima_cdf(d, n1, a1, 0.0, x) - exact_maxima_cdf(d, n2, a2, 0.0, x)));
    }
    w.ks_exact.push_back(sup);
  }
  return w;
}

}  // namespace mindex::evt
