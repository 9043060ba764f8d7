#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace mindex {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  std::size_t max_evals = 100000;
};

struct LogQuadResult {
  double log_value = 0.0;  ///< log of the integral; -inf for a zero integral
  double log_error = 0.0;  ///< log of the absolute error estimate
  bool converged = false;
  std::size_t evaluations = 0;
};

/// Integrates exp(log_integrand(t)) over [a, b] with adaptive 7/15-point
/// Gauss-Kronrod refinement carried out in log-space, so integrands far
/// outside the double range are handled. `breaks` are interior points where
/// the integrand may be discontinuous; they seed the initial partition.
LogQuadResult integrate_log(const std::function<double(double)>& log_integrand, double a, double b,
                            const QuadratureConfig& cfg = {}, std::span<const double> breaks = {});

/// Fixed-order Gauss-Legendre rule in log-space on [a, b].
double gauss_legendre_log(const std::function<double(double)>& log_integrand, double a, double b);

/// Fixed-order Gauss-Legendre rule on [a, b] for an ordinary integrand.
double gauss_legendre(const std::function<double(double)>& integrand, double a, double b);

}  // namespace mindex
