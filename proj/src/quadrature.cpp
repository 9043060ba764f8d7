#include "mindex/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "mindex/core.hpp"

namespace mindex {

namespace {

// 15-point Kronrod abscissae; the odd entries (1, 3, 5, 7) are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double log_value;
  double log_error;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const { return l.log_error < r.log_error; }
};

double checked(double v) {
  if (std::isnan(v)) throw Error(Errc::QuadratureFailure, "integrand evaluated to NaN");
  if (v == kInf) throw Error(Errc::QuadratureFailure, "integrand overflowed in log-space");
  return v;
}

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 15> lf;
  lf[0] = checked(f(c));
  for (int j = 0; j < 7; ++j) {
    lf[1 + 2 * j] = checked(f(c - h * kXgk[j]));
    lf[2 + 2 * j] = checked(f(c + h * kXgk[j]));
  }
  double m = *std::max_element(lf.begin(), lf.end());
  if (m == -kInf) return {a, b, -kInf, -kInf};
  double kron = kWgk[7] * std::exp(lf[0] - m);
  double gauss = kWg[3] * std::exp(lf[0] - m);
  for (int j = 0; j < 7; ++j) {
    double pair = std::exp(lf[1 + 2 * j] - m) + std::exp(lf[2 + 2 * j] - m);
    kron += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double lh = std::log(h);
  const double diff = std::abs(kron - gauss);
  return {a, b, lh + m + std::log(kron), diff > 0.0 ? lh + m + std::log(diff) : -kInf};
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss20() {
  static const GaussRule rule = make_gauss_rule(20);
  return rule;
}

}  // namespace

LogQuadResult integrate_log(const std::function<double(double)>& log_integrand, double a, double b,
                            const QuadratureConfig& cfg, std::span<const double> breaks) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) throw Error(Errc::Param, "integration bounds must be finite with a <= b");
  if (!(cfg.rel_tol > 0.0)) throw Error(Errc::Param, "rel_tol must be positive");
  LogQuadResult res;
  if (a == b) {
    res.log_value = -kInf;
    res.log_error = -kInf;
    res.converged = true;
    return res;
  }

  std::vector<double> cuts{a};
  for (double p : breaks) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment, std::vector<Segment>, ByError> active;
  std::vector<Segment> settled;  // segments too narrow to split further
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    active.push(gk15(log_integrand, cuts[i], cuts[i + 1]));
    res.evaluations += 15;
  }

  const double log_tol = std::log(cfg.rel_tol);
  auto totals = [&]() {
    std::vector<double> values;
    std::vector<double> errors;
    auto copy = active;
    while (!copy.empty()) {
      values.push_back(copy.top().log_value);
      errors.push_back(copy.top().log_error);
      copy.pop();
    }
    for (const auto& s : settled) {
      values.push_back(s.log_value);
      errors.push_back(s.log_error);
    }
    return std::pair{log_sum(values), log_sum(errors)};
  };

  // Running sums are kept on a fixed scale and refreshed exactly whenever
  // they suggest convergence, so cancellation drift never decides the result.
  auto [lv, le] = totals();
  double scale = lv == -kInf ? 0.0 : lv;
  double sum_v = std::exp(lv - scale);
  double sum_e = std::exp(le - scale);

  while (true) {
    if (sum_e <= cfg.rel_tol * sum_v || sum_v == 0.0) {
      std::tie(lv, le) = totals();
      if (lv == -kInf || le <= log_tol + lv) {
        res.log_value = lv;
        res.log_error = le;
        res.converged = true;
        return res;
      }
      scale = lv;
      sum_v = std::exp(lv - scale);
      sum_e = std::exp(le - scale);
    }
    if (res.evaluations + 30 > cfg.max_evals || active.empty()) break;

    Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double tiny = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= tiny || mid <= worst.a || mid >= worst.b) {
      settled.push_back(worst);
      continue;
    }
    Segment left = gk15(log_integrand, worst.a, mid);
    Segment right = gk15(log_integrand, mid, worst.b);
    res.evaluations += 30;
    sum_v += std::exp(left.log_value - scale) + std::exp(right.log_value - scale) - std::exp(worst.log_value - scale);
    sum_e += std::exp(left.log_error - scale) + std::exp(right.log_error - scale) - std::exp(worst.log_error - scale);
    sum_v = std::max(sum_v, 0.0);
    sum_e = std::max(sum_e, 0.0);
    active.push(left);
    active.push(right);
  }

  std::tie(lv, le) = totals();
  res.log_value = lv;
  res.log_error = le;
  res.converged = lv == -kInf || le <= log_tol + lv;
  return res;
}

double gauss_legendre_log(const std::function<double(double)>& log_integrand, double a, double b) {
  if (a == b) return -kInf;
  const auto& rule = gauss20();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 20> lf;
  for (std::size_t i = 0; i < 20; ++i) lf[i] = checked(log_integrand(c + h * rule.nodes[i]));
  double m = *std::max_element(lf.begin(), lf.end());
  if (m == -kInf) return -kInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < 20; ++i) acc += rule.weights[i] * std::exp(lf[i] - m);
  return std::log(std::abs(h)) + m + std::log(acc);
}

double gauss_legendre(const std::function<double(double)>& integrand, double a, double b) {
  const auto& rule = gauss20();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < 20; ++i) acc += rule.weights[i] * integrand(c + h * rule.nodes[i]);
  return h * acc;
}

}  // namespace mindex
