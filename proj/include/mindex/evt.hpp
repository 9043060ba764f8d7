#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mindex/function.hpp"
#include "mindex/grid.hpp"
#include "mindex/report_types.hpp"

namespace mindex::evt {

/// A distribution on (0, inf) given by its tail.
struct DistributionHandle {
  FunctionHandle tail;
  /// Q(u) = inf{ x : tail(x) <= u } for u in (0,1).
  std::function<double(double)> quantile;
  double endpoint = kInf;
  bool analytic_quantile = false;
};

/// Wraps a tail (truth.is_tail must hold). Corpus tails with a closed-form
/// quantile use it; other tails fall back to monotone bisection.
DistributionHandle make_distribution(const FunctionHandle& tail);
DistributionHandle make_distribution(const FunctionHandle& tail, std::function<double(double)> quantile,
                                     double endpoint = kInf);

double quantile_by_bisection(const FunctionHandle& tail, double u);

struct GPDSpec {
  double xi = 0.0;
  /// (1 + xi x)^(-1/xi), exp(-x) at xi = 0. Throws Errc::Param when 1 + xi x <= 0.
  double operator()(double x) const;
};

/// Frechet-type limit of F(x)' x / tail(x); step tails raise Errc::NonDifferentiable.
IndexEstimate von_mises_frechet(const DistributionHandle& d, const GridSpec& grid = {}, double rel_step = 1e-6);
/// Limit of (tail/F')'(x), which vanishes for the Gumbel-type condition.
IndexEstimate von_mises_gumbel(const DistributionHandle& d, const GridSpec& grid = {});

struct DomainReport {
  enum class Verdict { Frechet, GumbelInfCandidate, NotClassified };
  Verdict verdict = Verdict::NotClassified;
  double alpha = 0.0;  ///< Frechet index when verdict == Frechet
  ClassLabel label;
  std::vector<ConditionReport> evidence;

  friend bool operator==(const DomainReport&, const DomainReport&) = default;
};

std::string_view to_string(DomainReport::Verdict v);
DomainReport::Verdict verdict_from_string(std::string_view s);

/// Frechet(alpha) iff the tail is certified RV(-alpha). MInf tails that pass
/// the Gumbel-type von Mises condition are only candidates; everything else
/// is NotClassified with the class label attached.
DomainReport classify_domain_attraction(const DistributionHandle& d, const GridSpec& grid = {},
                                        double tol = 0.05);

struct ScaleFunction {
  std::string name;
  std::function<double(double)> a;
};

/// {c u, c sqrt(u), c}.
std::vector<ScaleFunction> default_scale_family(double c);

/// Probes tail(u + x a(u)) / tail(u) over the coarse trailing windows of
/// `u_grid` (plus the points just below and at each jump of a step tail).
/// Passes when some scale function gives, at every probe x, a ratio whose
/// spread is within tol and whose limit matches G_xi(x) within tol.
ConditionReport gpd_ratio_probe(const DistributionHandle& d, double xi, std::span<const ScaleFunction> family,
                                std::span<const double> x_probe, const GridSpec& u_grid, double tol);

struct Normalization {
  enum class Rule { FrechetStandard, Custom };
  Rule rule = Rule::FrechetStandard;
  std::vector<double> a_n;  ///< Custom only, one entry per n
  std::vector<double> b_n;
};

struct SimulationResult {
  std::vector<std::uint64_t> n_values;
  std::vector<double> a_n;
  std::vector<double> b_n;
  std::vector<double> abscissae;
  std::vector<std::vector<double>> empirical_cdfs;  ///< per n, at each abscissa
  std::vector<std::vector<double>> exact_cdfs;      ///< F^n(a_n x + b_n) at each abscissa
  std::vector<double> distances;                    ///< KS distance to Frechet(alpha), when requested
  std::optional<double> candidate_alpha;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

inline std::vector<double> default_abscissae() { return {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0}; }

/// Inverse-CDF block-maxima simulation. Replica i draws from its own stream
/// seeded from (seed, i), so results do not depend on evaluation order.
SimulationResult block_maxima_simulate(const DistributionHandle& d, std::span<const std::uint64_t> n_values,
                                       std::uint64_t reps, std::uint64_t seed, const Normalization& norm = {},
                                       std::optional<double> candidate_alpha = std::nullopt,
                                       std::vector<double> abscissae = default_abscissae());

/// Normalized block maxima along n = 2^k and n = 3 * 2^k; a persistent gap
/// between the two subsequences witnesses non-convergence.
struct SubsequenceWitness {
  std::vector<std::uint64_t> n_first;
  std::vector<std::uint64_t> n_second;
  std::vector<double> ks_simulated;  ///< two-sample KS distance per k
  std::vector<double> ks_exact;      ///< sup distance between the exact CDFs per k
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SubsequenceWitness&, const SubsequenceWitness&) = default;
};

SubsequenceWitness subsequence_witness(const DistributionHandle& d, std::span<const int> ks, std::uint64_t reps,
                                       std::uint64_t seed);

}  // namespace mindex::evt
