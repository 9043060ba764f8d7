#include "mindex/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mindex/core.hpp"

namespace mindex {

void GridSpec::validate() const {
  if (!std::isfinite(log10_x_min) || !std::isfinite(log10_x_max) || log10_x_min < 0.0 ||
      !(log10_x_min < log10_x_max) || log10_x_max > 308.0) {
    throw Error(Errc::Param, "grid requires 0 <= log10_x_min < log10_x_max <= 308");
  }
  if (windows == 0 || points < 16 * windows) throw Error(Errc::Param, "grid requires points >= 16 * windows");
}

std::vector<double> GridSpec::abscissae() const {
  validate();
  std::vector<double> xs(points);
  const double step = (log10_x_max - log10_x_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xs[i] = std::pow(10.0, log10_x_min + step * static_cast<double>(i));
  xs.back() = std::pow(10.0, log10_x_max);
  return xs;
}

double spread_of(std::span<const double> stats) {
  if (stats.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(stats.begin(), stats.end());
  if (*lo == *hi) return 0.0;
  return *hi - *lo;
}

bool is_stable(std::span<const double> stats) {
  if (stats.empty()) return true;
  return spread_of(stats) <= kStableSpread;
}

Trend trend_of(std::span<const double> stats) {
  if (is_stable(stats)) return Trend::Stable;
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < stats.size(); ++i) {
    if (stats[i] < stats[i - 1]) up = false;
    if (stats[i] > stats[i - 1]) down = false;
  }
  if (up) return Trend::Increasing;
  if (down) return Trend::Decreasing;
  return Trend::Oscillating;
}

namespace {

struct Window {
  double lo;
  double hi;
};

WindowSummary summarize(std::span<const double> xs, std::span<const double> values, const std::vector<Window>& windows,
                        WindowScale scale) {
  WindowSummary out;
  out.scale = scale;
  out.lower = -kInf;
  out.upper = kInf;
  for (const auto& w : windows) {
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] < w.lo || xs[i] > w.hi || std::isnan(values[i])) continue;
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    if (lo > hi) continue;  // empty window
    out.window_min.push_back(lo);
    out.window_max.push_back(hi);
    out.lower = std::max(out.lower, lo);
    out.upper = std::min(out.upper, hi);
  }
  if (out.window_min.empty()) throw Error(Errc::Param, "no samples fall inside the trailing windows");
  return out;
}

}  // namespace

WindowSummary summarize_windows(std::span<const double> xs, std::span<const double> values, const GridSpec& grid,
                                WindowScale scale) {
  if (xs.size() != values.size()) throw Error(Errc::Param, "sample and value counts differ");
  grid.validate();
  const double x_end = std::pow(10.0, grid.log10_x_max);
  const std::size_t k_windows = grid.windows;

  // Earliest window first.
  std::vector<Window> fine;
  for (std::size_t k = k_windows; k-- > 0;) {
    fine.push_back({x_end / std::ldexp(1.0, static_cast<int>(k + 1)), x_end / std::ldexp(1.0, static_cast<int>(k))});
  }
  std::vector<Window> coarse;
  const double l0 = std::log(x_end);
  for (std::size_t k = k_windows; k-- > 0;) {
    double lk = l0 * std::exp2(-static_cast<double>(k) / (2.0 * static_cast<double>(k_windows)));
    coarse.push_back({std::exp(0.5 * lk), std::exp(lk)});
  }
  // Both ends are widened by a relative ulp-scale margin so a window edge
  // that coincides with a grid point keeps it.
  for (auto* ws : {&fine, &coarse}) {
    for (auto& w : *ws) {
      w.lo *= 1.0 - 1e-12;
      w.hi *= 1.0 + 1e-12;
    }
  }

  if (scale == WindowScale::Fine) return summarize(xs, values, fine, WindowScale::Fine);
  if (scale == WindowScale::Coarse) return summarize(xs, values, coarse, WindowScale::Coarse);

  WindowSummary f = summarize(xs, values, fine, WindowScale::Fine);
  WindowSummary c;
  try {
    c = summarize(xs, values, coarse, WindowScale::Coarse);
  } catch (const Error&) {
    return f;
  }
  const bool coarse_stable = is_stable(c.window_min) && is_stable(c.window_max);
  const double widened = (c.upper - c.lower) - (f.upper - f.lower);
  if (coarse_stable && widened > kScaleAgreement) return c;
  return f;
}

IndexEstimate limit_estimate(const WindowSummary& summary, const GridSpec& grid) {
  std::vector<double> mids;
  for (std::size_t i = 0; i < summary.window_min.size(); ++i) {
    mids.push_back(0.5 * (summary.window_min[i] + summary.window_max[i]));
  }
  IndexEstimate e;
  e.value = 0.5 * (summary.lower + summary.upper);
  e.spread = std::abs(summary.upper - summary.lower);
  e.trend = e.spread == 0.0 ? Trend::Stable : trend_of(mids);
  e.grid = grid;
  return e;
}

}  // namespace mindex
