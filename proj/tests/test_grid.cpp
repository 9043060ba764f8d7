#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mindex/core.hpp"
#include "mindex/grid.hpp"

using namespace mindex;

TEST_CASE("abscissae span the grid geometrically") {
  GridSpec g{1.0, 8.0, 2000, 8};
  auto xs = g.abscissae();
  CHECK(xs.size() == 2000);
  CHECK(xs.front() == doctest::Approx(10.0));
  CHECK(xs.back() == 1e8);
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
}

TEST_CASE("grid validation") {
  auto invalid = [](GridSpec g) {
    try {
      g.validate();
    } catch (const Error& e) {
      return e.code() == Errc::Param;
    }
    return false;
  };
  CHECK(invalid({-1.0, 8.0, 2000, 8}));
  CHECK(invalid({8.0, 8.0, 2000, 8}));
  CHECK(invalid({1.0, 309.0, 2000, 8}));
  CHECK(invalid({1.0, 8.0, 100, 8}));
  CHECK(invalid({1.0, 8.0, 100, 0}));
  CHECK_NOTHROW(wide_grid().validate());
}

TEST_CASE("stability and trends") {
  const std::vector<double> flat{1.0, 1.0, 1.005};
  const std::vector<double> up{1.0, 1.5, 2.0};
  const std::vector<double> down{2.0, 1.5, 1.0};
  const std::vector<double> zigzag{1.0, 2.0, 1.0};
  CHECK(is_stable(flat));
  CHECK(trend_of(flat) == Trend::Stable);
  CHECK(trend_of(up) == Trend::Increasing);
  CHECK(trend_of(down) == Trend::Decreasing);
  CHECK(trend_of(zigzag) == Trend::Oscillating);
  CHECK(spread_of(up) == 1.0);
  // Stability is absolute: a shift of every statistic does not change it.
  const std::vector<double> shifted{-1000.0, -1000.02};
  CHECK_FALSE(is_stable(shifted));
}

TEST_CASE("window summary of a constant is exact") {
  GridSpec g{1.0, 8.0, 400, 8};
  auto xs = g.abscissae();
  std::vector<double> v(xs.size(), -2.0);
  auto s = summarize_windows(xs, v, g);
  CHECK(s.lower == -2.0);
  CHECK(s.upper == -2.0);
  CHECK(s.window_min.size() == 8);
  auto e = limit_estimate(s, g);
  CHECK(e.value == -2.0);
  CHECK(e.spread == 0.0);
  CHECK(e.trend == Trend::Stable);
}

TEST_CASE("window summary brackets an oscillation") {
  GridSpec g{1.0, 8.0, 2000, 8};
  auto xs = g.abscissae();
  std::vector<double> v;
  for (double x : xs) v.push_back(std::sin(x));
  auto s = summarize_windows(xs, v, g, WindowScale::Fine);
  // Samples alias the oscillation, so the window extremes only approach +-1.
  CHECK(s.lower >= -1.0);
  CHECK(s.lower <= -0.95);
  CHECK(s.upper <= 1.0);
  CHECK(s.upper >= 0.95);
  CHECK(s.upper > s.lower);
}

TEST_CASE("coarse windows are chosen for slow, stable oscillations") {
  // A square wave in log log x: the fine windows each see one level, the
  // coarse windows see both.
  GridSpec g{1.0, 8.0, 2000, 8};
  auto xs = g.abscissae();
  std::vector<double> v;
  for (double x : xs) v.push_back(std::fmod(std::log2(std::log(x)), 1.0) < 0.5 ? 0.0 : 1.0);
  auto fine = summarize_windows(xs, v, g, WindowScale::Fine);
  auto coarse = summarize_windows(xs, v, g, WindowScale::Coarse);
  auto automatic = summarize_windows(xs, v, g, WindowScale::Auto);
  CHECK(coarse.lower == 0.0);
  CHECK(coarse.upper == 1.0);
  CHECK(fine.upper - fine.lower < coarse.upper - coarse.lower);
  CHECK(automatic.scale == WindowScale::Coarse);
}

TEST_CASE("NaN samples are skipped") {
  GridSpec g{1.0, 8.0, 400, 8};
  auto xs = g.abscissae();
  std::vector<double> v(xs.size(), 3.0);
  v[v.size() - 3] = std::nan("");
  CHECK(summarize_windows(xs, v, g).lower == 3.0);
}
