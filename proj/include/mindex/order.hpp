#pragma once

#include <utility>
#include <vector>

#include "mindex/function.hpp"
#include "mindex/grid.hpp"
#include "mindex/quadrature.hpp"
#include "mindex/report_types.hpp"

namespace mindex::order {

/// |log U / log x| above this, with a monotone window trend, is read as an infinite order.
inline constexpr double kInfThreshold = 100.0;
inline constexpr double kDefaultTol = 0.05;

struct Orders {
  IndexEstimate mu;
  IndexEstimate nu;
};

/// Lower and upper orders, liminf and limsup of log U(x)/log x.
Orders estimate_orders(const FunctionHandle& u, const GridSpec& grid = {});

ClassLabel classify(const FunctionHandle& u, const GridSpec& grid = {}, double tol = kDefaultTol);
/// Classification from already estimated orders.
ClassLabel classify_orders(const Orders& orders, double tol = kDefaultTol);

/// log U(x)/log x at chosen points; used to expose features that fall between grid points.
std::vector<double> probe_ratio_at(const FunctionHandle& u, std::span<const double> xs);

struct ConvergenceVerdict {
  enum class Tag { Convergent, Divergent, Undecided };
  struct TracePoint {
    double log10_t;
    double log_partial;  ///< log of the integral from 1 to T
  };

  Tag tag = Tag::Undecided;
  std::vector<TracePoint> trace;
};

std::string_view to_string(ConvergenceVerdict::Tag tag);

/// Decides whether the integral of x^(r-1) U(x) over [1, inf) is finite.
///
/// Truncations T_j grow by half-doublings of log T, from 10^max(1, log10_x_min)
/// up to 10^log10_x_max (capped by the support of U). The increments between
/// successive truncations must shrink by a factor below 0.9 over the last four
/// steps for a Convergent verdict; a Divergent verdict needs the last four
/// increments to be non-decreasing.
ConvergenceVerdict probe_integral_convergence(const FunctionHandle& u, double r, const GridSpec& grid);

struct KappaConfig {
  double r_lo = -64.0;
  double r_hi = 64.0;
  double bisect_tol = 0.01;
  GridSpec probe_grid{1.0, 256.0, 2000, 8};
  double inf_threshold = kInfThreshold;

  void validate() const;
  friend bool operator==(const KappaConfig&, const KappaConfig&) = default;
};

struct KappaProbe {
  double r = 0.0;
  ConvergenceVerdict verdict;
};

/// sup{ r : integral of x^(r-1) U(x) over [1,inf) is finite } by bisection.
/// Undecided probes inside the bracket count as convergent, so the estimate
/// may sit slightly below the true index. Every probe is appended to `trace`.
IndexEstimate estimate_kappa(const FunctionHandle& u, const KappaConfig& cfg = {},
                             std::vector<KappaProbe>* trace = nullptr);

/// kappa_U = -rho_U for members of M.
ConditionReport check_second_characterization(const FunctionHandle& u, const GridSpec& grid = {},
                                              const KappaConfig& cfg = {}, double tol = kDefaultTol);

/// Tests U(xt)/U(x) -> t^rho for each t. The report's "rho" entry is the
/// common index when passed, and "witness_t" names a failing t otherwise.
ConditionReport rv_ratio_test(const FunctionHandle& u, std::span<const double> t_values,
                              const GridSpec& grid = {}, double tol = kDefaultTol);

}  // namespace mindex::order
