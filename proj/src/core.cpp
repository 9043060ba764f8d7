#include "mindex/core.hpp"

#include <algorithm>
#include <cstdio>

namespace mindex {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::Domain: return "DomainError";
    case Errc::Param: return "ParamError";
    case Errc::UnknownName: return "UnknownName";
    case Errc::Format: return "FormatError";
    case Errc::PositivityViolation: return "PositivityViolation";
    case Errc::Arity: return "ArityError";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::ClassMismatch: return "ClassMismatch";
    case Errc::SingularDenominator: return "SingularDenominator";
    case Errc::DivergentTail: return "DivergentTail";
    case Errc::UndecidedConvergence: return "UndecidedConvergence";
    case Errc::Precondition: return "PreconditionError";
    case Errc::NonDifferentiable: return "NonDifferentiable";
    case Errc::Endpoint: return "EndpointError";
    case Errc::Quantile: return "QuantileError";
  }
  return "Error";
}

double log_sum(std::span<const double> logs) {
  double m = -kInf;
  for (double v : logs) m = std::max(m, v);
  if (m == -kInf || m == kInf) return m;
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - m);
  return m + std::log(acc);
}

ClassLabel ClassLabel::m(double rho) {
  if (!std::isfinite(rho)) throw Error(Errc::Param, "M label requires a finite order");
  return {Kind::M, rho, rho, rho};
}

ClassLabel ClassLabel::oscillating(double mu, double nu) {
  if (!(mu < nu)) throw Error(Errc::Param, "Oscillating label requires mu < nu");
  return {Kind::Oscillating, 0.0, mu, nu};
}

std::string_view to_string(ClassLabel::Kind kind) {
  switch (kind) {
    case ClassLabel::Kind::M: return "M";
    case ClassLabel::Kind::MInf: return "MInf";
    case ClassLabel::Kind::MNegInf: return "MNegInf";
    case ClassLabel::Kind::Oscillating: return "Oscillating";
    case ClassLabel::Kind::Undecided: return "Undecided";
  }
  return "Undecided";
}

ClassLabel::Kind class_kind_from_string(std::string_view s) {
  for (auto k : {ClassLabel::Kind::M, ClassLabel::Kind::MInf, ClassLabel::Kind::MNegInf,
                 ClassLabel::Kind::Oscillating, ClassLabel::Kind::Undecided}) {
    if (to_string(k) == s) return k;
  }
  throw Error(Errc::Format, "unknown class tag '" + std::string(s) + "'");
}

namespace {
std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace

std::string describe(const ClassLabel& label) {
  switch (label.kind) {
    case ClassLabel::Kind::M: return "M(" + fmt(label.rho) + ")";
    case ClassLabel::Kind::Oscillating: return "Oscillating(" + fmt(label.mu) + ", " + fmt(label.nu) + ")";
    default: return std::string(to_string(label.kind));
  }
}

bool labels_agree(const ClassLabel& a, const ClassLabel& b, double tol) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ClassLabel::Kind::M: return std::abs(a.rho - b.rho) <= tol;
    case ClassLabel::Kind::Oscillating: {
      auto close = [tol](double x, double y) { return x == y || std::abs(x - y) <= tol; };
      return close(a.mu, b.mu) && close(a.nu, b.nu);
    }
    default: return true;
  }
}

}  // namespace mindex
