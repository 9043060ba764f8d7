#include "mindex/order.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace mindex::order {

namespace {

constexpr double kLn10 = 2.30258509299404568402;

/// Replaces a huge window statistic by an infinite one when the windows move
/// monotonically (or not at all) in the same direction.
IndexEstimate clamp_infinite(IndexEstimate e, double threshold) {
  if (e.value < -threshold && (e.trend == Trend::Decreasing || e.trend == Trend::Stable)) e.value = -kInf;
  if (e.value > threshold && (e.trend == Trend::Increasing || e.trend == Trend::Stable)) e.value = kInf;
  return e;
}

}  // namespace

Orders estimate_orders(const FunctionHandle& u, const GridSpec& grid) {
  auto xs = grid.abscissae();
  // Between jumps of a step function log U is constant, so the ratio is
  // monotone there and its extremes sit at the two sides of each jump.
  if (u.has_jumps()) {
    for (double j : u.jumps(xs.front(), xs.back())) {
      if (j * (1.0 - 1e-12) <= 1.0) continue;
      xs.push_back(j * (1.0 - 1e-12));
      xs.push_back(j);
    }
    std::sort(xs.begin(), xs.end());
  }
  std::vector<double> ratio(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ratio[i] = u.eval_log(xs[i]) / std::log(xs[i]);

  const WindowSummary s = summarize_windows(xs, ratio, grid, WindowScale::Auto);
  Orders o;
  o.mu = {s.lower, spread_of(s.window_min), trend_of(s.window_min), grid};
  o.nu = {s.upper, spread_of(s.window_max), trend_of(s.window_max), grid};
  o.mu = clamp_infinite(o.mu, kInfThreshold);
  o.nu = clamp_infinite(o.nu, kInfThreshold);
  return o;
}

ClassLabel classify_orders(const Orders& orders, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::Param, "classification tolerance must be positive");
  const double mu = orders.mu.value;
  const double nu = orders.nu.value;
  if (nu == -kInf) return ClassLabel::m_inf();
  if (mu == kInf) return ClassLabel::m_neg_inf();
  if (std::isfinite(mu) && std::isfinite(nu) && nu - mu <= tol) return ClassLabel::m(0.5 * (mu + nu));
  auto settled = [](const IndexEstimate& e) { return e.trend == Trend::Stable || !std::isfinite(e.value); };
  if (nu - mu > tol && settled(orders.mu) && settled(orders.nu)) return ClassLabel::oscillating(mu, nu);
  return ClassLabel::undecided();
}

ClassLabel classify(const FunctionHandle& u, const GridSpec& grid, double tol) {
  return classify_orders(estimate_orders(u, grid), tol);
}

std::vector<double> probe_ratio_at(const FunctionHandle& u, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (!(x > 1.0)) throw Error(Errc::Domain, "probe points must exceed 1");
    out.push_back(u.eval_log(x) / std::log(x));
  }
  return out;
}

std::string_view to_string(ConvergenceVerdict::Tag tag) {
  switch (tag) {
    case ConvergenceVerdict::Tag::Convergent: return "Convergent";
    case ConvergenceVerdict::Tag::Divergent: return "Divergent";
    case ConvergenceVerdict::Tag::Undecided: return "Undecided";
  }
  return "Undecided";
}

namespace {

/// log of the integral of x^(r-1) U(x) over [x0, x1], computed in s = log x.
double log_increment(const FunctionHandle& u, double r, double s0, double s1) {
  std::vector<double> breaks;
  if (u.has_jumps()) {
    for (double j : u.jumps(std::exp(s0), std::exp(s1))) breaks.push_back(std::log(j));
  }
  auto f = [&u, r](double s) { return r * s + u.eval_log(std::exp(s)); };
  // Oscillating integrands never meet the tolerance; their magnitude is what matters here.
  QuadratureConfig cfg{1e-8, 20000};
  return integrate_log(f, s0, s1, cfg, breaks).log_value;
}

}  // namespace

ConvergenceVerdict probe_integral_convergence(const FunctionHandle& u, double r, const GridSpec& grid) {
  grid.validate();
  if (!std::isfinite(r)) throw Error(Errc::Param, "r must be finite");
  if (!(u.support_floor() < 1.0)) throw Error(Errc::Domain, u.name() + " is not defined on [1, inf)");

  double cap = grid.log10_x_max;
  if (u.support_ceiling() < std::numeric_limits<double>::max()) cap = std::min(cap, std::log10(u.support_ceiling()));
  const double start = std::max(1.0, grid.log10_x_min);

  std::vector<double> log10_t;
  for (int j = 0;; ++j) {
    double t = start * std::exp2(0.5 * j);
    if (t > cap * (1.0 + 1e-12)) break;
    log10_t.push_back(std::min(t, cap));
  }

  ConvergenceVerdict v;
  std::vector<double> increments;
  double s_prev = 0.0;
  double total = -kInf;
  for (double lt : log10_t) {
    double s = lt * kLn10;
    double inc = log_increment(u, r, s_prev, s);
    increments.push_back(inc);
    total = log_add(total, inc);
    v.trace.push_back({lt, total});
    s_prev = s;
  }
  // The first increment runs from 1 and is not comparable with the others.
  if (increments.size() < 6) {
    std::ostringstream msg;
    msg << "convergence probe needs at least four increment ratios; grid up to 10^" << cap << " is too short";
    throw Error(Errc::Param, msg.str());
  }

  const double log_decay = std::log(0.9);
  bool convergent = true;
  bool divergent = true;
  for (std::size_t i = increments.size() - 4; i < increments.size(); ++i) {
    double a = increments[i - 1];
    double b = increments[i];
    double log_ratio;
    if (b == -kInf) {
      log_ratio = -kInf;
    } else if (a == -kInf) {
      log_ratio = kInf;
    } else {
      log_ratio = b - a;
    }
    if (!(log_ratio < log_decay)) convergent = false;
    if (!(log_ratio >= 0.0)) divergent = false;
  }
  v.tag = convergent ? ConvergenceVerdict::Tag::Convergent
                     : (divergent ? ConvergenceVerdict::Tag::Divergent : ConvergenceVerdict::Tag::Undecided);
  return v;
}

void KappaConfig::validate() const {
  if (!(r_lo < r_hi) || !std::isfinite(r_lo) || !std::isfinite(r_hi)) throw Error(Errc::Param, "KappaConfig requires r_lo < r_hi");
  if (!(bisect_tol > 0.0)) throw Error(Errc::Param, "KappaConfig requires bisect_tol > 0");
  if (!(inf_threshold > 0.0)) throw Error(Errc::Param, "KappaConfig requires inf_threshold > 0");
  probe_grid.validate();
}

IndexEstimate estimate_kappa(const FunctionHandle& u, const KappaConfig& cfg, std::vector<KappaProbe>* trace) {
  cfg.validate();
  auto probe = [&](double r) {
    ConvergenceVerdict v = probe_integral_convergence(u, r, cfg.probe_grid);
    if (trace) trace->push_back({r, v});
    return v.tag;
  };
  using Tag = ConvergenceVerdict::Tag;
  IndexEstimate e;
  e.grid = cfg.probe_grid;
  e.trend = Trend::Stable;

  Tag top = probe(cfg.r_hi);
  if (top == Tag::Convergent) {
    e.value = kInf;
    return e;
  }
  if (top == Tag::Undecided) throw Error(Errc::UndecidedConvergence, "convergence probe undecided at r_hi");
  Tag bottom = probe(cfg.r_lo);
  if (bottom == Tag::Divergent) {
    e.value = -kInf;
    return e;
  }
  if (bottom == Tag::Undecided) throw Error(Errc::UndecidedConvergence, "convergence probe undecided at r_lo");

  double lo = cfg.r_lo;
  double hi = cfg.r_hi;
  while (hi - lo > cfg.bisect_tol) {
    double mid = 0.5 * (lo + hi);
    if (probe(mid) == Tag::Divergent) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  e.value = 0.5 * (lo + hi);
  e.spread = hi - lo;
  return e;
}

ConditionReport check_second_characterization(const FunctionHandle& u, const GridSpec& grid, const KappaConfig& cfg,
                                              double tol) {
  ClassLabel label = classify(u, grid, tol);
  if (!label.is_m()) throw Error(Errc::ClassMismatch, u.name() + " classifies as " + describe(label) + ", not M");
  IndexEstimate kappa = estimate_kappa(u, cfg);
  ConditionReport rep;
  rep.condition = "KAPPA-RHO";
  rep.tolerance = cfg.bisect_tol + tol;
  rep.set("rho", label.rho);
  rep.set("kappa", kappa.value);
  const double dev = std::abs(kappa.value + label.rho);
  rep.set("deviation", std::isfinite(dev) ? dev : kInf);
  rep.passed = dev <= rep.tolerance;
  return rep;
}

ConditionReport rv_ratio_test(const FunctionHandle& u, std::span<const double> t_values, const GridSpec& grid,
                              double tol) {
  if (t_values.empty()) throw Error(Errc::Param, "rv_ratio_test needs at least one t");
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(Errc::Domain, "ratio test requires t > 0");
    if (t == 1.0) throw Error(Errc::Param, "t = 1 carries no information about the index");
  }
  const auto xs = grid.abscissae();
  ConditionReport rep;
  rep.condition = "RV";
  rep.tolerance = tol;

  std::vector<double> rhos;
  std::optional<double> witness;
  for (double t : t_values) {
    std::vector<double> d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) d[i] = u.eval_log(xs[i] * t) - u.eval_log(xs[i]);
    WindowSummary s = summarize_windows(xs, d, grid, WindowScale::Auto);
    const double width = std::abs(s.upper - s.lower);
    const double rho_t = 0.5 * (s.lower + s.upper) / std::log(t);
    std::ostringstream key;
    key << "t=" << t;
    rep.set("spread[" + key.str() + "]", std::isfinite(width) ? width : kInf);
    rep.set("rho[" + key.str() + "]", rho_t);
    if (!(width <= tol)) {
      if (!witness) witness = t;
    } else {
      rhos.push_back(rho_t);
    }
  }
  if (!witness && !rhos.empty()) {
    auto [lo, hi] = std::minmax_element(rhos.begin(), rhos.end());
    if (*hi - *lo > tol) {
      // Stable ratios with inconsistent exponents: report the t farthest from the first.
      double worst = 0.0;
      for (std::size_t i = 0; i < rhos.size(); ++i) {
        if (std::abs(rhos[i] - rhos[0]) >= worst) {
          worst = std::abs(rhos[i] - rhos[0]);
          witness = t_values[i];
        }
      }
    }
  }
  if (witness) {
    rep.passed = false;
    rep.set("witness_t", *witness);
  } else {
    double mean = 0.0;
    for (double r : rhos) mean += r;
    rep.passed = true;
    rep.set("rho", mean / static_cast<double>(rhos.size()));
  }
  return rep;
}

}  // namespace mindex::order
