#include "mindex/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace mindex::algebra {

using Kind = ClassLabel::Kind;

std::string_view to_string(OpKind op) {
  switch (op) {
    case OpKind::ScaleAdd: return "ScaleAdd";
    case OpKind::Reciprocal: return "Reciprocal";
    case OpKind::Product: return "Product";
    case OpKind::Convolve: return "Convolve";
    case OpKind::Compose: return "Compose";
  }
  return "ScaleAdd";
}

namespace {

std::size_t arity(OpKind op) { return op == OpKind::Reciprocal ? 1 : 2; }

ClassLabel predict_scale_add(const ClassLabel& u, const ClassLabel& v, double a) {
  if (a == 0.0) return v;
  if (u.is_m() && v.is_m()) return ClassLabel::m(std::max(u.rho, v.rho));
  if (u.kind == v.kind && u.is_infinite()) return u;
  return ClassLabel::undecided();
}

ClassLabel predict_reciprocal(const ClassLabel& u) {
  switch (u.kind) {
    case Kind::M: return ClassLabel::m(-u.rho);
    case Kind::MInf: return ClassLabel::m_neg_inf();
    case Kind::MNegInf: return ClassLabel::m_inf();
    case Kind::Oscillating: return ClassLabel::oscillating(-u.nu, -u.mu);
    case Kind::Undecided: break;
  }
  return ClassLabel::undecided();
}

ClassLabel predict_product(const ClassLabel& u, const ClassLabel& v) {
  if (u.is_m() && v.is_m()) return ClassLabel::m(u.rho + v.rho);
  if (u.is_infinite() && v.is_infinite()) return u.kind == v.kind ? u : ClassLabel::undecided();
  if (u.is_infinite() && v.is_m()) return u;
  if (v.is_infinite() && u.is_m()) return v;
  return ClassLabel::undecided();
}

ClassLabel predict_convolve(ClassLabel u, ClassLabel v) {
  if (u.kind == Kind::MNegInf || v.kind == Kind::MNegInf) return ClassLabel::m_neg_inf();
  if (u.kind == Kind::MInf && v.kind == Kind::MInf) return ClassLabel::m_inf();
  if (v.kind == Kind::MInf) std::swap(u, v);
  if (u.kind == Kind::MInf && v.is_m()) {
    if (v.rho >= 0.0 || v.rho < -1.0) return v;
    return ClassLabel::undecided();
  }
  if (u.is_m() && v.is_m()) {
    double lo = std::min(u.rho, v.rho);
    double hi = std::max(u.rho, v.rho);
    if (hi < -1.0) return ClassLabel::m(hi);
    if (lo < -1.0 && hi >= 0.0) return ClassLabel::m(hi);
    if (lo > -1.0) return ClassLabel::m(lo + hi + 1.0);
  }
  return ClassLabel::undecided();
}

ClassLabel predict_compose(const ClassLabel& u, const ClassLabel& v) {
  const bool v_diverges = (v.is_m() && v.rho > 0.0) || v.kind == Kind::MNegInf;
  if (!v_diverges) return ClassLabel::undecided();
  if (u.is_m() && v.is_m()) return ClassLabel::m(u.rho * v.rho);
  if (u.is_infinite()) return u;
  return ClassLabel::undecided();
}

std::optional<KnownTruth> predicted_truth(const ClassLabel& label) {
  if (!label.decided()) return std::nullopt;
  KnownTruth t;
  t.label = label;
  switch (label.kind) {
    case Kind::M:
      t.rho = label.rho;
      t.kappa = -label.rho;
      t.mu = t.nu = label.rho;
      break;
    case Kind::MInf:
      t.kappa = kInf;
      t.mu = t.nu = -kInf;
      break;
    case Kind::MNegInf:
      t.kappa = -kInf;
      t.mu = t.nu = kInf;
      break;
    default:
      t.mu = label.mu;
      t.nu = label.nu;
      t.kappa = -label.nu;
      break;
  }
  return t;
}

JumpFn merged_jumps(const FunctionHandle& u, const FunctionHandle& v) {
  if (!u.has_jumps() && !v.has_jumps()) return {};
  return [u, v](double lo, double hi) {
    std::set<double> pts;
    for (double j : u.jumps(lo, hi)) pts.insert(j);
    for (double j : v.jumps(lo, hi)) pts.insert(j);
    return std::vector<double>(pts.begin(), pts.end());
  };
}

}  // namespace

ClassLabel predicted_class(OpKind op, std::span<const ClassLabel> operands, std::optional<double> a) {
  if (operands.size() != arity(op)) {
    throw Error(Errc::Arity, std::string(to_string(op)) + " takes " + std::to_string(arity(op)) + " operand(s)");
  }
  const double scale = a.value_or(1.0);
  if (op == OpKind::ScaleAdd && (!(scale >= 0.0) || !std::isfinite(scale))) {
    throw Error(Errc::Param, "scale_add requires a finite a >= 0");
  }
  if (op == OpKind::ScaleAdd && scale == 0.0) return operands[1];
  if (op == OpKind::Reciprocal) return predict_reciprocal(operands[0]);
  for (const auto& l : operands) {
    if (l.kind == Kind::Oscillating || l.kind == Kind::Undecided) return ClassLabel::undecided();
  }
  switch (op) {
    case OpKind::ScaleAdd: return predict_scale_add(operands[0], operands[1], scale);
    case OpKind::Product: return predict_product(operands[0], operands[1]);
    case OpKind::Convolve: return predict_convolve(operands[0], operands[1]);
    case OpKind::Compose: return predict_compose(operands[0], operands[1]);
    case OpKind::Reciprocal: break;
  }
  return ClassLabel::undecided();
}

FunctionHandle scale_add(double a, const FunctionHandle& u, const FunctionHandle& v) {
  const std::array<ClassLabel, 2> ops{u.label(), v.label()};
  ClassLabel label = predicted_class(OpKind::ScaleAdd, ops, a);
  FunctionHandle::Spec s;
  s.name = "scale_add(" + u.name() + "," + v.name() + ")";
  s.params = {{"a", a}};
  s.support_floor = std::max(u.support_floor(), v.support_floor());
  s.support_ceiling = std::min(u.support_ceiling(), v.support_ceiling());
  if (a == 0.0) {
    s.log_eval = [v](double x) { return v.eval_log(x); };
    s.jumps = v.has_jumps() ? JumpFn([v](double lo, double hi) { return v.jumps(lo, hi); }) : JumpFn{};
  } else {
    const double log_a = std::log(a);
    s.log_eval = [u, v, log_a](double x) { return log_add(log_a + u.eval_log(x), v.eval_log(x)); };
    s.jumps = merged_jumps(u, v);
  }
  s.truth = predicted_truth(label);
  return FunctionHandle(std::move(s));
}

FunctionHandle reciprocal(const FunctionHandle& u) {
  const std::array<ClassLabel, 1> ops{u.label()};
  FunctionHandle::Spec s;
  s.name = "reciprocal(" + u.name() + ")";
  s.support_floor = u.support_floor();
  s.support_ceiling = u.support_ceiling();
  s.log_eval = [u](double x) { return -u.eval_log(x); };
  if (u.has_jumps()) s.jumps = [u](double lo, double hi) { return u.jumps(lo, hi); };
  s.truth = predicted_truth(predicted_class(OpKind::Reciprocal, ops));
  return FunctionHandle(std::move(s));
}

FunctionHandle product(const FunctionHandle& u, const FunctionHandle& v) {
  const std::array<ClassLabel, 2> ops{u.label(), v.label()};
  FunctionHandle::Spec s;
  s.name = "product(" + u.name() + "," + v.name() + ")";
  s.support_floor = std::max(u.support_floor(), v.support_floor());
  s.support_ceiling = std::min(u.support_ceiling(), v.support_ceiling());
  s.log_eval = [u, v](double x) { return u.eval_log(x) + v.eval_log(x); };
  s.jumps = merged_jumps(u, v);
  s.truth = predicted_truth(predicted_class(OpKind::Product, ops));
  return FunctionHandle(std::move(s));
}

namespace {

/// log of the integral over t in [0, h] of f(t) g(x - t), for 0 < h <= x/2.
/// [0, min(1, h)] is integrated in t, the rest in log t.
double half_convolution(const FunctionHandle& f, const FunctionHandle& g, double x, double h,
                        const QuadratureConfig& cfg, std::size_t* evals) {
  auto pair_log = [&](double t) { return f.eval_log(t) + g.eval_log(x - t); };
  auto breaks_in = [&](double lo, double hi) {
    std::vector<double> out = f.jumps(lo, hi);
    for (double j : g.jumps(x - hi, x - lo)) out.push_back(x - j);
    std::sort(out.begin(), out.end());
    return out;
  };

  double total = -kInf;
  const double linear_end = std::min(1.0, h);
  {
    auto br = breaks_in(0.0, linear_end);
    LogQuadResult r = integrate_log(pair_log, 0.0, linear_end, cfg, br);
    *evals += r.evaluations;
    if (!r.converged) throw Error(Errc::QuadratureFailure, "convolution did not reach tolerance near 0");
    total = log_add(total, r.log_value);
  }
  if (h > 1.0) {
    std::vector<double> br;
    for (double t : breaks_in(1.0, h)) br.push_back(std::log(t));
    auto f_log = [&](double w) {
      double t = std::exp(w);
      return w + f.eval_log(t) + g.eval_log(x - t);
    };
    LogQuadResult r = integrate_log(f_log, 0.0, std::log(h), cfg, br);
    *evals += r.evaluations;
    if (!r.converged) throw Error(Errc::QuadratureFailure, "convolution did not reach tolerance");
    total = log_add(total, r.log_value);
  }
  return total;
}

}  // namespace

FunctionHandle convolve(const FunctionHandle& u, const FunctionHandle& v, const QuadratureConfig& cfg) {
  if (u.support_floor() > 0.0 || v.support_floor() > 0.0) {
    throw Error(Errc::Param, "convolution needs operands defined on (0, inf)");
  }
  const std::array<ClassLabel, 2> ops{u.label(), v.label()};
  FunctionHandle::Spec s;
  s.name = "convolve(" + u.name() + "," + v.name() + ")";
  s.support_ceiling = std::min(u.support_ceiling(), v.support_ceiling());
  s.log_eval = [u, v, cfg](double x) {
    // The per-point budget is shared by the four sub-integrals.
    QuadratureConfig part{cfg.rel_tol, std::max<std::size_t>(cfg.max_evals / 4, 60)};
    std::size_t evals = 0;
    const double h = 0.5 * x;
    double left = half_convolution(u, v, x, h, part, &evals);
    double right = half_convolution(v, u, x, h, part, &evals);
    return log_add(left, right);
  };
  s.truth = predicted_truth(predicted_class(OpKind::Convolve, ops));
  return FunctionHandle(std::move(s));
}

FunctionHandle compose(const FunctionHandle& u, const FunctionHandle& v) {
  const std::array<ClassLabel, 2> ops{u.label(), v.label()};
  FunctionHandle::Spec s;
  s.name = "compose(" + u.name() + "," + v.name() + ")";
  s.support_floor = v.support_floor();
  s.support_ceiling = v.support_ceiling();
  s.log_eval = [u, v](double x) {
    double inner_log = v.eval_log(x);
    double inner = std::exp(inner_log);
    if (!std::isfinite(inner) || !(inner > u.support_floor()) || inner > u.support_ceiling()) {
      throw Error(Errc::Domain, "inner value of " + v.name() + " leaves the support of " + u.name());
    }
    return u.eval_log(inner);
  };
  s.truth = predicted_truth(predicted_class(OpKind::Compose, ops));
  return FunctionHandle(std::move(s));
}

}  // namespace mindex::algebra
