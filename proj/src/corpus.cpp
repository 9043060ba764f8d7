#include "mindex/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mindex {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

/// Sorted breakpoints of a step function restricted to (lo, hi).
std::vector<double> breaks_between(const std::vector<double>& xs, double lo, double hi) {
  std::vector<double> out;
  for (auto it = std::upper_bound(xs.begin(), xs.end(), lo); it != xs.end() && *it < hi; ++it) out.push_back(*it);
  return out;
}

KnownTruth m_truth(double rho, bool is_tail, std::optional<bool> rv) {
  KnownTruth t;
  t.rho = rho;
  t.kappa = -rho;
  t.mu = rho;
  t.nu = rho;
  t.label = ClassLabel::m(rho);
  t.is_tail = is_tail;
  t.regularly_varying = rv;
  return t;
}

KnownTruth infinite_truth(bool decaying, bool is_tail) {
  KnownTruth t;
  t.kappa = decaying ? kInf : -kInf;
  t.mu = decaying ? -kInf : kInf;
  t.nu = t.mu;
  t.label = decaying ? ClassLabel::m_inf() : ClassLabel::m_neg_inf();
  t.is_tail = is_tail;
  return t;
}

KnownTruth oscillating_truth(double mu, double nu, bool is_tail) {
  KnownTruth t;
  t.mu = mu;
  t.nu = nu;
  t.kappa = -nu;
  t.label = ClassLabel::oscillating(mu, nu);
  t.is_tail = is_tail;
  t.regularly_varying = false;
  return t;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::Param, what);
}

}  // namespace

FunctionHandle make_power_tail(double alpha) {
  require(std::isfinite(alpha), "power_tail: alpha must be finite");
  FunctionHandle::Spec s;
  s.name = "power_tail";
  s.params = {{"alpha", alpha}};
  s.log_eval = [alpha](double x) { return x < 1.0 ? 0.0 : alpha * std::log(x); };
  s.truth = m_truth(alpha, alpha <= 0.0, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_peter_paul() {
  FunctionHandle::Spec s;
  s.name = "peter_paul";
  s.log_eval = [](double x) {
    if (x < 2.0) return 0.0;
    int e = 0;
    std::frexp(x, &e);  // x = m 2^e with m in [0.5, 1), so floor(log2 x) = e - 1 exactly
    return -static_cast<double>(e - 1) * kLn2;
  };
  s.jumps = [](double lo, double hi) {
    std::vector<double> out;
    for (int k = 1; k <= 1023; ++k) {
      double p = std::ldexp(1.0, k);
      if (p >= hi) break;
      if (p > lo) out.push_back(p);
    }
    return out;
  };
  s.truth = m_truth(-1.0, true, false);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_oset_geometric(double alpha, double beta, double x_a) {
  require(alpha > 0.0 && std::isfinite(alpha), "oset_geometric: alpha must be positive");
  require(beta != -1.0 && std::isfinite(beta), "oset_geometric: beta must differ from -1");
  require(x_a > 1.0 && std::isfinite(x_a), "oset_geometric: x_a must exceed 1");

  // Jump points x_n = x_a^((1+alpha)^n), n >= 1, as long as they are representable.
  std::vector<double> xs;
  std::vector<double> levels;
  const double slope = alpha * (1.0 + beta);
  for (int n = 1;; ++n) {
    double log_xn = std::pow(1.0 + alpha, n) * std::log(x_a);
    double xn = std::pow(x_a, std::pow(1.0 + alpha, n));
    if (!std::isfinite(xn) || !std::isfinite(log_xn)) break;
    xs.push_back(xn);
    levels.push_back(slope * log_xn);
  }

  FunctionHandle::Spec s;
  s.name = "oset_geometric";
  s.params = {{"alpha", alpha}, {"beta", beta}, {"x_a", x_a}};
  s.log_eval = [xs, levels](double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0.0;
    return levels[static_cast<std::size_t>(it - xs.begin()) - 1];
  };
  s.jumps = [xs](double lo, double hi) { return breaks_between(xs, lo, hi); };
  const double a = slope / (1.0 + alpha);
  const double b = slope;
  s.truth = oscillating_truth(std::min(a, b), std::max(a, b), 1.0 + beta < 0.0);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_oset_tower(double c, double alpha) {
  require(c > 0.0 && std::isfinite(c), "oset_tower: c must be positive");
  require(alpha != 0.0 && std::isfinite(alpha), "oset_tower: alpha must be nonzero");

  std::vector<double> xs{1.0};
  for (int i = 0; i < 100000; ++i) {
    double next = std::exp2(xs.back() / c);
    if (!std::isfinite(next)) break;
    if (!(next > xs.back())) break;
    xs.push_back(next);
  }
  require(!std::isfinite(std::exp2(xs.back() / c)),
          "oset_tower: x_{n+1} = 2^(x_n/c) from x_1 = 1 does not diverge for this c");

  std::vector<double> levels;
  for (double xn : xs) levels.push_back(alpha * xn * kLn2);

  FunctionHandle::Spec s;
  s.name = "oset_tower";
  s.params = {{"c", c}, {"alpha", alpha}};
  s.log_eval = [xs, levels](double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0.0;
    return levels[static_cast<std::size_t>(it - xs.begin()) - 1];
  };
  s.jumps = [xs](double lo, double hi) { return breaks_between(xs, lo, hi); };
  if (alpha > 0.0) {
    s.truth = oscillating_truth(alpha * c, kInf, false);
  } else {
    s.truth = oscillating_truth(-kInf, alpha * c, true);
  }
  return FunctionHandle(std::move(s));
}

FunctionHandle make_two_plus_sin() {
  FunctionHandle::Spec s;
  s.name = "two_plus_sin";
  s.log_eval = [](double x) { return std::log(2.0 + std::sin(x)); };
  s.truth = m_truth(0.0, false, false);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_x_pow_sin_x() {
  FunctionHandle::Spec s;
  s.name = "x_pow_sin_x";
  s.log_eval = [](double x) { return std::sin(x) * std::log(x); };
  s.truth = oscillating_truth(-1.0, 1.0, false);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_exp_neg() {
  FunctionHandle::Spec s;
  s.name = "exp_neg";
  s.log_eval = [](double x) { return -x; };
  s.truth = infinite_truth(true, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_exp_pos() {
  FunctionHandle::Spec s;
  s.name = "exp_pos";
  s.log_eval = [](double x) { return x; };
  s.truth = infinite_truth(false, false);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_exp_neg_sq() {
  FunctionHandle::Spec s;
  s.name = "exp_neg_sq";
  s.log_eval = [](double x) { return -x * x; };
  // x^2 overflows past sqrt(DBL_MAX)
  s.support_ceiling = 1e154;
  s.truth = infinite_truth(true, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_floor_log_tail() {
  FunctionHandle::Spec s;
  s.name = "floor_log_tail";
  s.log_eval = [](double x) { return -std::floor(x) * std::log(x); };
  s.jumps = [](double lo, double hi) {
    std::vector<double> out;
    if (hi - lo > 1e5) return out;  // too dense to enumerate usefully
    for (double k = std::max(1.0, std::floor(lo) + 1.0); k < hi; k += 1.0) out.push_back(k);
    return out;
  };
  s.truth = infinite_truth(true, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_remark7_mix() {
  // For n >= 50 the interval width n^-n is far below the spacing of doubles near n.
  constexpr int kLastInterval = 49;
  FunctionHandle::Spec s;
  s.name = "remark7_mix";
  s.log_eval = [](double x) {
    double n = std::floor(x);
    if (n >= 1.0 && n <= kLastInterval && x > n && x < n + std::pow(n, -n)) return -std::log(x);
    return -x;
  };
  s.jumps = [](double lo, double hi) {
    std::set<double> pts;
    for (int n = 1; n <= kLastInterval; ++n) {
      double a = n;
      double b = n + std::pow(static_cast<double>(n), -static_cast<double>(n));
      if (a > lo && a < hi) pts.insert(a);
      if (b > lo && b < hi) pts.insert(b);
    }
    return std::vector<double>(pts.begin(), pts.end());
  };
  KnownTruth t = oscillating_truth(-kInf, -1.0, false);
  t.kappa = kInf;
  s.truth = t;
  return FunctionHandle(std::move(s));
}

FunctionHandle make_pareto_tail(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "pareto_tail: alpha must be positive");
  FunctionHandle::Spec s;
  s.name = "pareto_tail";
  s.params = {{"alpha", alpha}};
  s.log_eval = [alpha](double x) { return x < 1.0 ? 0.0 : -alpha * std::log(x); };
  s.truth = m_truth(-alpha, true, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_log_perturbed_power(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "log_perturbed_power: alpha must be positive");
  FunctionHandle::Spec s;
  s.name = "log_perturbed_power";
  s.params = {{"alpha", alpha}};
  s.log_eval = [alpha](double x) {
    if (x < M_E) return 0.0;
    double lx = std::log(x);
    return -alpha * (lx - 1.0) + std::log1p(1.0 / lx) - kLn2;
  };
  s.truth = m_truth(-alpha, true, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_ramp_power(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "ramp_power: alpha must be positive");
  FunctionHandle::Spec s;
  s.name = "ramp_power";
  s.params = {{"alpha", alpha}};
  s.log_eval = [alpha](double x) { return alpha * std::log(x); };
  s.truth = m_truth(alpha, false, true);
  return FunctionHandle(std::move(s));
}

FunctionHandle make_ramp_modulated(double alpha, double amplitude) {
  require(alpha > 0.0 && std::isfinite(alpha), "ramp_modulated: alpha must be positive");
  require(amplitude >= 0.0 && amplitude < 1.0, "ramp_modulated: amplitude must lie in [0, 1)");
  FunctionHandle::Spec s;
  s.name = "ramp_modulated";
  s.params = {{"alpha", alpha}, {"amplitude", amplitude}};
  s.log_eval = [alpha, amplitude](double x) {
    double lx = std::log(x);
    return alpha * lx + std::log1p(amplitude * std::sin(lx));
  };
  s.truth = m_truth(alpha, false, amplitude == 0.0);
  return FunctionHandle(std::move(s));
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{
      "power_tail",   "peter_paul",     "oset_geometric", "oset_tower",  "two_plus_sin",
      "x_pow_sin_x",  "exp_neg",        "exp_pos",        "floor_log_tail", "remark7_mix",
      "pareto_tail",  "log_perturbed_power", "exp_neg_sq", "ramp_power", "ramp_modulated"};
  return names;
}

namespace {

class ParamReader {
 public:
  ParamReader(const std::string& fn, const std::map<std::string, double>& params) : fn_(fn), params_(params) {}

  double get(const std::string& key, std::optional<double> fallback = std::nullopt) {
    used_.insert(key);
    auto it = params_.find(key);
    if (it != params_.end()) return it->second;
    if (!fallback) throw Error(Errc::Param, fn_ + ": missing parameter '" + key + "'");
    return *fallback;
  }

  void finish() const {
    for (const auto& [k, v] : params_) {
      if (!used_.count(k)) throw Error(Errc::Param, fn_ + ": unknown parameter '" + k + "'");
    }
  }

 private:
  std::string fn_;
  const std::map<std::string, double>& params_;
  std::set<std::string> used_;
};

}  // namespace

FunctionHandle make_named(const std::string& name, const std::map<std::string, double>& params) {
  ParamReader p(name, params);
  auto done = [&p](FunctionHandle h) {
    p.finish();
    return h;
  };
  if (name == "power_tail") return done(make_power_tail(p.get("alpha")));
  if (name == "peter_paul") return done(make_peter_paul());
  if (name == "oset_geometric")
    return done(make_oset_geometric(p.get("alpha", 1.0), p.get("beta", 0.0), p.get("x_a", 2.0)));
  if (name == "oset_tower") return done(make_oset_tower(p.get("c", 1.0), p.get("alpha", -1.0)));
  if (name == "two_plus_sin") return done(make_two_plus_sin());
  if (name == "x_pow_sin_x") return done(make_x_pow_sin_x());
  if (name == "exp_neg") return done(make_exp_neg());
  if (name == "exp_pos") return done(make_exp_pos());
  if (name == "exp_neg_sq") return done(make_exp_neg_sq());
  if (name == "floor_log_tail") return done(make_floor_log_tail());
  if (name == "remark7_mix") return done(make_remark7_mix());
  if (name == "pareto_tail") return done(make_pareto_tail(p.get("alpha")));
  if (name == "log_perturbed_power") return done(make_log_perturbed_power(p.get("alpha")));
  if (name == "ramp_power") return done(make_ramp_power(p.get("alpha")));
  if (name == "ramp_modulated") return done(make_ramp_modulated(p.get("alpha"), p.get("amplitude", 0.1)));
  throw Error(Errc::UnknownName, "no corpus function named '" + name + "'");
}

}  // namespace mindex
