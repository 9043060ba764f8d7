#pragma once

#include <vector>

#include "mindex/function.hpp"
#include "mindex/grid.hpp"
#include "mindex/report_types.hpp"

namespace mindex::karamata {

/// Sampled Karamata-type representation
///   U(x) = exp{ alpha(x) + eps(x) * integral_b^x beta(t)/t dt }
/// on the grid points x >= valid_from. For infinite-class members only
/// `alpha` is populated, with U = exp(-alpha) (MInf) or exp(alpha) (MNegInf).
struct RepresentationTriple {
  double b = 2.0;
  double valid_from = 2.0;  ///< first abscissa used; moved right past a vanishing denominator
  bool kappa_zero_mode = false;
  double rho = 0.0;  ///< the order the limits are checked against
  ClassLabel label;
  std::vector<double> x;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> eps;
  std::vector<double> integral;  ///< integral_b^x beta(t)/t dt
};

/// Denominators of eps with magnitude at or below this are treated as vanishing.
inline constexpr double kSingularDenominator = 1e-6;

/// Builds the representation with gamma = 0, so alpha = 0 unless the
/// index is zero, in which case V(x) = x U(x) is represented instead.
/// Requires classify(U) = M; throws Errc::ClassMismatch otherwise.
RepresentationTriple extract_representation(const FunctionHandle& u, double b, const GridSpec& grid,
                                            double tol = 0.05);

/// Checks the pointwise reconstruction and the limits alpha/log x -> 0,
/// eps -> 1, beta -> rho over the trailing windows.
ConditionReport verify_representation(const FunctionHandle& u, const RepresentationTriple& rep,
                                      const GridSpec& grid, double tol);

/// alpha(x) = -log U(x) for MInf, log U(x) for MNegInf.
RepresentationTriple extract_representation_inf(const FunctionHandle& u, double b, const GridSpec& grid = {});
/// Passes when alpha/log x exceeds the infinite-order threshold at the grid end
/// and the reconstruction is exact.
ConditionReport verify_representation_inf(const FunctionHandle& u, const RepresentationTriple& rep,
                                          const GridSpec& grid);

enum class IntegralKind { V, W };

/// V_r(x) = integral_b^x t^r U(t) dt or W_r(x) = integral_x^inf t^r U(t) dt,
/// tabulated in log-space on the grid points beyond b.
struct CumulativeIntegral {
  IntegralKind kind = IntegralKind::V;
  double r = 0.0;
  double b = 1.0;
  GridSpec grid;
  std::vector<double> x;
  std::vector<double> log_value;

  /// The tabulated integral as an evaluable handle (log-log interpolation).
  FunctionHandle as_handle() const;
  /// Grid restricted to the tabulated range, for classifying as_handle().
  GridSpec covered_grid() const;
};

/// Throws Errc::DivergentTail for W_r when x^r U(x) is not integrable at infinity.
CumulativeIntegral cumulative_integral(const FunctionHandle& u, IntegralKind kind, double r, double b,
                                       const GridSpec& grid);

enum class Side { Lower, Upper };

/// Limit of log(integral of t^(r-1) U)/log x, over [b,x] (Lower) or [x,inf) (Upper).
IndexEstimate karamata_limit(const FunctionHandle& u, double r, double b, Side side, const GridSpec& grid);

enum class Condition { C1r, C2r };

ConditionReport check_condition(const FunctionHandle& u, Condition which, double r, double b,
                                const GridSpec& grid, double tol);

/// Runs the branch of the generalized Karamata theorem selected by the sign
/// of rho + r (K1* above tol, K2* below -tol, K3* in between).
ConditionReport karamata_theorem_report(const FunctionHandle& u, double r, double b, const GridSpec& grid,
                                        double tol);

/// Closed form n - a + x 2^-n - 1 of the integral of the Peter-and-Paul tail over [2^a, x],
/// where 2^n <= x < 2^(n+1). Throws Errc::Param unless a < n.
double peter_paul_partial_integral(double x, int a);

}  // namespace mindex::karamata
