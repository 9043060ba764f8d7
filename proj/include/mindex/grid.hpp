#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mindex {

/// Geometric abscissa grid 10^log10_x_min .. 10^log10_x_max used by every
/// "limit at infinity" estimate in the library.
struct GridSpec {
  double log10_x_min = 1.0;
  double log10_x_max = 8.0;
  std::size_t points = 2000;
  std::size_t windows = 8;

  /// Throws Errc::Param unless 0 <= log10_x_min < log10_x_max and points >= 16 windows.
  void validate() const;
  std::vector<double> abscissae() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// A grid reaching 10^300, for quantities converging like 1/log x.
inline GridSpec wide_grid(std::size_t points = 2000) { return {1.0, 300.0, points, 8}; }

enum class Trend { Stable, Increasing, Decreasing, Oscillating };

/// An extended-real estimate with the diagnostics of the windows that produced it.
struct IndexEstimate {
  double value = 0.0;
  double spread = 0.0;  ///< max - min of the per-window statistics
  Trend trend = Trend::Stable;
  GridSpec grid;

  friend bool operator==(const IndexEstimate&, const IndexEstimate&) = default;
};

/// Trailing windows come at two scales. Fine windows are dyadic in x,
/// [X/2^(k+1), X/2^k]. Coarse windows are dyadic in log x, [l_k/2, l_k],
/// with right ends l_k = log X * 2^(-k/(2K)) so that every coarse window
/// spans a factor two in log x.
enum class WindowScale { Auto, Fine, Coarse };

struct WindowSummary {
  double lower = 0.0;  ///< max over windows of the window minimum
  double upper = 0.0;  ///< min over windows of the window maximum
  std::vector<double> window_min;  ///< earliest window first
  std::vector<double> window_max;
  WindowScale scale = WindowScale::Fine;
};

/// Per-window statistics whose absolute spread is within this bound count as stable.
inline constexpr double kStableSpread = 0.01;
/// Auto mode switches to coarse windows when they are stable and widen the
/// fine-scale range by more than this.
inline constexpr double kScaleAgreement = 0.025;

/// Summarizes values[i] sampled at xs[i] (NaN entries are skipped) over the
/// trailing windows of `grid`. With WindowScale::Auto the fine scale is used
/// unless the coarse windows reveal a stable, longer oscillation.
WindowSummary summarize_windows(std::span<const double> xs, std::span<const double> values,
                                const GridSpec& grid, WindowScale scale = WindowScale::Auto);

double spread_of(std::span<const double> stats);
bool is_stable(std::span<const double> stats);
Trend trend_of(std::span<const double> stats);

/// Limit estimate (lower + upper)/2 with spread = upper - lower.
IndexEstimate limit_estimate(const WindowSummary& summary, const GridSpec& grid);

}  // namespace mindex
