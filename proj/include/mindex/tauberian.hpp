#pragma once

#include <vector>

#include "mindex/function.hpp"
#include "mindex/grid.hpp"
#include "mindex/report_types.hpp"

namespace mindex::tauberian {

struct TransformConfig {
  double s_max = 1e-1;
  double s_min = 1e-8;
  std::size_t s_points = 200;
  double quad_rel_tol = 1e-8;
  /// The integrand is truncated where it falls this many nats below its maximum.
  double cutoff_nats = 40.0;

  void validate() const;
  /// Geometric s grid, strictly decreasing from s_max to s_min.
  std::vector<double> s_grid() const;

  friend bool operator==(const TransformConfig&, const TransformConfig&) = default;
};

/// log of s * integral_0^inf exp(-xs) U(x) dx, the Laplace-Stieltjes
/// transform of a continuous U with U(0+) = 0.
double log_laplace_stieltjes(const FunctionHandle& u, double s, const TransformConfig& cfg = {});
double laplace_stieltjes(const FunctionHandle& u, double s, const TransformConfig& cfg = {});

/// The handle s -> U^(1/s).
FunctionHandle transform_at_reciprocal(const FunctionHandle& u, const TransformConfig& cfg = {});

/// Throws Errc::Precondition unless U(0+) = 0 within 1e-9.
void require_vanishing_at_origin(const FunctionHandle& u);

/// Classifies s -> U^(1/s) and passes when it is M(alpha) within tol for
/// U in M(alpha), alpha > 0. Reports a concavity probe of x^-eta U(x) as a
/// diagnostic for the converse direction.
ConditionReport tauberian_check(const FunctionHandle& u, const TransformConfig& cfg, const GridSpec& grid,
                                double tol);

}  // namespace mindex::tauberian
