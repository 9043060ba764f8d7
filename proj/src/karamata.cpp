#include "mindex/karamata.hpp"

#include <algorithm>
#include <cmath>

#include "mindex/order.hpp"
#include "mindex/quadrature.hpp"
#include "mindex/table.hpp"

namespace mindex::karamata {

namespace {

/// Relative reconstruction residual accepted by verify_representation.
constexpr double kReconstructionTol = 1e-7;

double target_rho(const FunctionHandle& u, const ClassLabel& label) {
  if (u.truth() && u.truth()->rho) return *u.truth()->rho;
  return label.rho;
}

/// Pieces of [lo, hi] in log coordinates, split at the jumps of u.
std::vector<double> log_pieces(const FunctionHandle& u, double lo, double hi) {
  std::vector<double> cuts{std::log(lo)};
  for (double j : u.jumps(lo, hi)) cuts.push_back(std::log(j));
  cuts.push_back(std::log(hi));
  return cuts;
}

/// log of the integral of t^r U(t) over [lo, hi], as (r+1)s + log U(e^s) in s = log t.
double cell_log_integral(const FunctionHandle& u, double r, double lo, double hi) {
  auto f = [&u, r](double s) { return (r + 1.0) * s + u.eval_log(std::exp(s)); };
  auto cuts = log_pieces(u, lo, hi);
  double acc = -kInf;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc = log_add(acc, gauss_legendre_log(f, cuts[i], cuts[i + 1]));
  return acc;
}

/// Integral of beta(t)/t = log U(t)/(t log t) over [lo, hi], as log U(e^s)/s in s = log t.
double cell_beta_integral(const FunctionHandle& u, double lo, double hi) {
  auto f = [&u](double s) { return u.eval_log(std::exp(s)) / s; };
  auto cuts = log_pieces(u, lo, hi);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += gauss_legendre(f, cuts[i], cuts[i + 1]);
  return acc;
}

std::vector<double> grid_points_above(const GridSpec& grid, double b) {
  std::vector<double> out;
  for (double x : grid.abscissae()) {
    if (x > b) out.push_back(x);
  }
  if (out.empty()) throw Error(Errc::Param, "no grid points beyond the base point");
  return out;
}

struct LimitCheck {
  double lower;
  double upper;
  bool holds;
};

LimitCheck windowed_limit(std::span<const double> xs, std::span<const double> values, const GridSpec& grid,
                          double target, double tol) {
  WindowSummary s = summarize_windows(xs, values, grid, WindowScale::Auto);
  bool ok = std::abs(s.lower - target) <= tol && std::abs(s.upper - target) <= tol;
  return {s.lower, s.upper, ok};
}

ClassLabel require_m(const FunctionHandle& u, const GridSpec& grid, double tol) {
  ClassLabel label = order::classify(u, grid, tol);
  if (!label.is_m()) throw Error(Errc::ClassMismatch, u.name() + " classifies as " + describe(label) + ", not M");
  return label;
}

}  // namespace

RepresentationTriple extract_representation(const FunctionHandle& u, double b, const GridSpec& grid, double tol) {
  if (!(b > 1.0) || !std::isfinite(b)) throw Error(Errc::Param, "representation base point must exceed 1");
  ClassLabel label = require_m(u, grid, tol);

  RepresentationTriple rep;
  rep.b = b;
  rep.label = label;
  rep.rho = target_rho(u, label);
  rep.kappa_zero_mode = std::abs(rep.rho) <= tol;

  const auto xs = grid_points_above(grid, b);
  const double log_b = std::log(b);
  std::vector<double> integral(xs.size());
  std::vector<double> denominators(xs.size());
  double running = 0.0;
  double prev = b;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    running += cell_beta_integral(u, prev, xs[i]);
    prev = xs[i];
    integral[i] = running;
    // With index zero, V(x) = x U(x) is represented and beta_V = 1 + beta_U.
    denominators[i] = rep.kappa_zero_mode ? (std::log(xs[i]) - log_b) + running : running;
  }

  std::size_t first = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(std::abs(denominators[i]) > kSingularDenominator)) first = i + 1;
  }
  if (first >= xs.size()) {
    throw Error(Errc::SingularDenominator, "the denominator of eps vanishes on the whole grid for " + u.name());
  }
  rep.valid_from = xs[first];

  for (std::size_t i = first; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double lu = u.eval_log(xs[i]);
    double alpha = 0.0;
    double eps = 0.0;
    if (rep.kappa_zero_mode) {
      eps = (lu + lx) / denominators[i];
      alpha = (eps - 1.0) * lx - eps * log_b;
    } else {
      eps = lu / denominators[i];
    }
    rep.x.push_back(xs[i]);
    rep.alpha.push_back(alpha);
    rep.beta.push_back(lu / lx);
    rep.eps.push_back(eps);
    rep.integral.push_back(integral[i]);
  }
  return rep;
}

ConditionReport verify_representation(const FunctionHandle& u, const RepresentationTriple& rep, const GridSpec& grid,
                                      double tol) {
  ConditionReport out;
  out.condition = "REP-LIMITS";
  out.tolerance = tol;
  if (rep.x.empty()) {
    out.passed = false;
    return out;
  }

  double residual = 0.0;
  std::vector<double> alpha_ratio(rep.x.size());
  for (std::size_t i = 0; i < rep.x.size(); ++i) {
    const double lu = u.eval_log(rep.x[i]);
    const double rebuilt = rep.alpha[i] + rep.eps[i] * rep.integral[i];
    residual = std::max(residual, std::abs(lu - rebuilt) / std::max(1.0, std::abs(lu)));
    alpha_ratio[i] = rep.alpha[i] / std::log(rep.x[i]);
  }
  LimitCheck a = windowed_limit(rep.x, alpha_ratio, grid, 0.0, tol);
  LimitCheck e = windowed_limit(rep.x, rep.eps, grid, 1.0, tol);
  LimitCheck bt = windowed_limit(rep.x, rep.beta, grid, rep.rho, tol);

  out.set("residual", residual);
  out.set("alpha_over_log_lower", a.lower);
  out.set("alpha_over_log_upper", a.upper);
  out.set("eps_lower", e.lower);
  out.set("eps_upper", e.upper);
  out.set("beta_lower", bt.lower);
  out.set("beta_upper", bt.upper);
  out.set("rho", rep.rho);
  out.set("valid_from", rep.valid_from);
  out.set("b_shift", rep.valid_from - rep.b);
  out.set("kappa_zero_mode", rep.kappa_zero_mode ? 1.0 : 0.0);
  out.passed = residual <= kReconstructionTol && a.holds && e.holds && bt.holds;
  return out;
}

RepresentationTriple extract_representation_inf(const FunctionHandle& u, double b, const GridSpec& grid) {
  if (!(b > 1.0) || !std::isfinite(b)) throw Error(Errc::Param, "representation base point must exceed 1");
  ClassLabel label = order::classify(u, grid);
  if (!label.is_infinite()) {
    throw Error(Errc::ClassMismatch, u.name() + " classifies as " + describe(label) + ", not MInf or MNegInf");
  }
  RepresentationTriple rep;
  rep.b = b;
  rep.valid_from = b;
  rep.label = label;
  rep.rho = label.kind == ClassLabel::Kind::MInf ? -kInf : kInf;
  const double sign = label.kind == ClassLabel::Kind::MInf ? -1.0 : 1.0;
  for (double x : grid_points_above(grid, b)) {
    rep.x.push_back(x);
    rep.alpha.push_back(sign * u.eval_log(x));
  }
  rep.valid_from = rep.x.front();
  return rep;
}

ConditionReport verify_representation_inf(const FunctionHandle& u, const RepresentationTriple& rep,
                                          const GridSpec& grid) {
  ConditionReport out;
  out.condition = "REP-INF";
  out.tolerance = order::kInfThreshold;
  if (rep.x.empty() || !rep.label.is_infinite()) {
    out.passed = false;
    return out;
  }
  const double sign = rep.label.kind == ClassLabel::Kind::MInf ? -1.0 : 1.0;
  double residual = 0.0;
  std::vector<double> ratio(rep.x.size());
  for (std::size_t i = 0; i < rep.x.size(); ++i) {
    const double lu = u.eval_log(rep.x[i]);
    residual = std::max(residual, std::abs(lu - sign * rep.alpha[i]) / std::max(1.0, std::abs(lu)));
    ratio[i] = rep.alpha[i] / std::log(rep.x[i]);
  }
  WindowSummary s = summarize_windows(rep.x, ratio, grid, WindowScale::Auto);
  out.set("alpha_over_log_end", ratio.back());
  out.set("alpha_over_log_lower", s.lower);
  out.set("residual", residual);
  out.passed = ratio.back() > order::kInfThreshold && s.lower > order::kInfThreshold && residual <= kReconstructionTol;
  return out;
}

FunctionHandle CumulativeIntegral::as_handle() const {
  TableData data;
  for (std::size_t i = 0; i < x.size(); ++i) data.rows.push_back({x[i], TableData::ValueKind::Log, log_value[i]});
  return from_table(data, kind == IntegralKind::V ? "V_r" : "W_r");
}

GridSpec CumulativeIntegral::covered_grid() const {
  if (x.size() < 2) throw Error(Errc::Param, "cumulative integral has too few points");
  GridSpec g = grid;
  // Pull the ends inwards by a rounding margin so every abscissa stays in the table.
  g.log10_x_min = std::max(0.0, std::log10(x.front()) + 1e-12);
  g.log10_x_max = std::log10(x.back()) - 1e-12;
  g.points = std::min(grid.points, x.size());
  return g;
}

CumulativeIntegral cumulative_integral(const FunctionHandle& u, IntegralKind kind, double r, double b,
                                       const GridSpec& grid) {
  if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(r)) throw Error(Errc::Param, "cumulative integral needs b > 0 and finite r");
  CumulativeIntegral ci;
  ci.kind = kind;
  ci.r = r;
  ci.b = b;
  ci.grid = grid;
  ci.x = grid_points_above(grid, b);
  const std::size_t n = ci.x.size();
  ci.log_value.assign(n, -kInf);

  if (kind == IntegralKind::V) {
    double acc = -kInf;
    double prev = b;
    for (std::size_t i = 0; i < n; ++i) {
      acc = log_add(acc, cell_log_integral(u, r, prev, ci.x[i]));
      prev = ci.x[i];
      ci.log_value[i] = acc;
    }
    return ci;
  }

  order::KappaConfig probe_cfg;
  auto verdict = order::probe_integral_convergence(u, r + 1.0, probe_cfg.probe_grid);
  if (verdict.tag != order::ConvergenceVerdict::Tag::Convergent) {
    throw Error(Errc::DivergentTail, "the integral of t^r U(t) over [x, inf) is not finite for " + u.name());
  }

  // Beyond the grid the integrand is extrapolated as a power law fitted over the trailing windows.
  const double x_end = ci.x.back();
  const double x_fit = x_end / std::ldexp(1.0, static_cast<int>(grid.windows));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (double x : ci.x) {
    if (x < x_fit) continue;
    double lx = std::log(x);
    double ly = u.eval_log(x);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  double slope = 0.0;
  if (m >= 2) {
    const double den = static_cast<double>(m) * sxx - sx * sx;
    slope = den != 0.0 ? (static_cast<double>(m) * sxy - sx * sy) / den : 0.0;
  }
  const double decay = slope + r + 1.0;
  if (!(decay < 0.0)) {
    throw Error(Errc::DivergentTail, "the fitted tail exponent of t^r U(t) does not decay beyond the grid");
  }
  double acc = (r + 1.0) * std::log(x_end) + u.eval_log(x_end) - std::log(-decay);
  ci.log_value[n - 1] = acc;
  for (std::size_t i = n - 1; i-- > 0;) {
    acc = log_add(acc, cell_log_integral(u, r, ci.x[i], ci.x[i + 1]));
    ci.log_value[i] = acc;
  }
  return ci;
}

IndexEstimate karamata_limit(const FunctionHandle& u, double r, double b, Side side, const GridSpec& grid) {
  CumulativeIntegral ci = cumulative_integral(u, side == Side::Lower ? IntegralKind::V : IntegralKind::W, r - 1.0, b, grid);
  std::vector<double> ratio(ci.x.size());
  for (std::size_t i = 0; i < ci.x.size(); ++i) ratio[i] = ci.log_value[i] / std::log(ci.x[i]);
  return limit_estimate(summarize_windows(ci.x, ratio, grid, WindowScale::Auto), grid);
}

ConditionReport check_condition(const FunctionHandle& u, Condition which, double r, double b, const GridSpec& grid,
                                double tol) {
  const IntegralKind kind = which == Condition::C1r ? IntegralKind::V : IntegralKind::W;
  CumulativeIntegral ci = cumulative_integral(u, kind, r - 1.0, b, grid);
  std::vector<double> diff(ci.x.size());
  for (std::size_t i = 0; i < ci.x.size(); ++i) {
    diff[i] = (ci.log_value[i] - u.eval_log(ci.x[i])) / std::log(ci.x[i]);
  }
  LimitCheck lim = windowed_limit(ci.x, diff, grid, r, tol);
  ConditionReport out;
  out.condition = which == Condition::C1r ? "C1r" : "C2r";
  out.tolerance = tol;
  out.set("r", r);
  out.set("b", b);
  out.set("lower", lim.lower);
  out.set("upper", lim.upper);
  out.passed = lim.holds;
  return out;
}

ConditionReport karamata_theorem_report(const FunctionHandle& u, double r, double b, const GridSpec& grid, double tol) {
  ClassLabel label = require_m(u, grid, tol);
  const double rho = target_rho(u, label);
  const double s = rho + r;

  ConditionReport out;
  out.tolerance = tol;
  out.set("rho", rho);
  out.set("r", r);
  out.set("rho_plus_r", s);

  ConditionReport cond;
  IndexEstimate lim;
  double target = s;
  if (std::abs(s) <= tol) {
    out.condition = "K3*";
    target = 0.0;
    lim = karamata_limit(u, r, b, Side::Lower, grid);
    cond = check_condition(u, Condition::C1r, r, b, grid, tol);
  } else if (s > 0.0) {
    out.condition = "K1*";
    lim = karamata_limit(u, r, b, Side::Lower, grid);
    cond = check_condition(u, Condition::C1r, r, b, grid, tol);
  } else {
    out.condition = "K2*";
    lim = karamata_limit(u, r, b, Side::Upper, grid);
    cond = check_condition(u, Condition::C2r, r, b, grid, tol);
  }
  const double lo = lim.value - 0.5 * lim.spread;
  const double hi = lim.value + 0.5 * lim.spread;
  const bool limit_ok = std::abs(lo - target) <= tol && std::abs(hi - target) <= tol;
  // Reading the index back from the limit closes the equivalence in the other direction.
  const double rho_back = out.condition == "K3*" ? -r : lim.value - r;
  out.set("limit", lim.value);
  out.set("limit_spread", lim.spread);
  out.set("rho_from_limit", rho_back);
  out.set(cond.condition + "_lower", *cond.get("lower"));
  out.set(cond.condition + "_upper", *cond.get("upper"));
  out.set(cond.condition + "_passed", cond.passed ? 1.0 : 0.0);
  out.passed = limit_ok && cond.passed && std::abs(rho_back - rho) <= tol;
  return out;
}

double peter_paul_partial_integral(double x, int a) {
  if (!(x >= 1.0) || !std::isfinite(x) || a < 0) throw Error(Errc::Param, "peter_paul_partial_integral needs x >= 1 and a >= 0");
  int e = 0;
  std::frexp(x, &e);
  const int n = e - 1;
  if (a >= n) throw Error(Errc::Param, "peter_paul_partial_integral needs 2^a < 2^n <= x");
  return static_cast<double>(n - a) + std::ldexp(x, -n) - 1.0;
}

}  // namespace mindex::karamata
