#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mindex {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class Errc {
  Domain,
  Param,
  UnknownName,
  Format,
  PositivityViolation,
  Arity,
  QuadratureFailure,
  ClassMismatch,
  SingularDenominator,
  DivergentTail,
  UndecidedConvergence,
  Precondition,
  NonDifferentiable,
  Endpoint,
  Quantile,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// log(exp(a) + exp(b)) without overflow; -inf acts as the additive identity.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum(std::span<const double> logs);

/// Verdict of the asymptotic classification of a positive function.
///
/// M carries the unique finite order rho. Oscillating carries the lower and
/// upper orders mu < nu, either of which may be infinite.
struct ClassLabel {
  enum class Kind { M, MInf, MNegInf, Oscillating, Undecided };

  Kind kind = Kind::Undecided;
  double rho = 0.0;
  double mu = 0.0;
  double nu = 0.0;

  static ClassLabel m(double rho);
  static ClassLabel m_inf() { return {Kind::MInf, 0.0, -kInf, -kInf}; }
  static ClassLabel m_neg_inf() { return {Kind::MNegInf, 0.0, kInf, kInf}; }
  static ClassLabel oscillating(double mu, double nu);
  static ClassLabel undecided() { return {}; }

  bool is_m() const { return kind == Kind::M; }
  bool is_infinite() const { return kind == Kind::MInf || kind == Kind::MNegInf; }
  bool decided() const { return kind != Kind::Undecided; }

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

std::string_view to_string(ClassLabel::Kind kind);
ClassLabel::Kind class_kind_from_string(std::string_view s);
std::string describe(const ClassLabel& label);

/// Labels agree when the tags match and, for M, the orders differ by at most tol.
bool labels_agree(const ClassLabel& a, const ClassLabel& b, double tol);

}  // namespace mindex
