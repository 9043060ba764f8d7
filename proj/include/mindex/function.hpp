#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mindex/core.hpp"

namespace mindex {

/// Ground truth attached to corpus members.
struct KnownTruth {
  std::optional<double> rho;
  std::optional<double> kappa;
  std::optional<double> mu;
  std::optional<double> nu;
  ClassLabel label;
  bool is_tail = false;
  /// Whether U(xt)/U(x) converges to t^rho; only meaningful for M members.
  std::optional<bool> regularly_varying;
};

/// Returns the discontinuities of a piecewise function inside (lo, hi), sorted.
/// May return an empty list when the jumps are too dense to enumerate.
using JumpFn = std::function<std::vector<double>(double lo, double hi)>;

/// An immutable positive function on (support_floor, support_ceiling),
/// evaluated in log-space. Copies share the same underlying definition.
class FunctionHandle {
 public:
  using LogEval = std::function<double(double)>;

  struct Spec {
    std::string name;
    std::map<std::string, double> params;
    LogEval log_eval;
    double support_floor = 0.0;
    double support_ceiling = std::numeric_limits<double>::max();
    std::optional<KnownTruth> truth;
    JumpFn jumps;
  };

  explicit FunctionHandle(Spec spec);

  const std::string& name() const { return impl_->name; }
  const std::map<std::string, double>& params() const { return impl_->params; }
  double support_floor() const { return impl_->support_floor; }
  double support_ceiling() const { return impl_->support_ceiling; }
  const std::optional<KnownTruth>& truth() const { return impl_->truth; }

  /// log U(x). Throws Errc::Domain outside the support.
  double eval_log(double x) const;
  /// U(x); may overflow to inf or underflow to 0 for infinite-class members.
  double eval(double x) const { return std::exp(eval_log(x)); }

  bool has_jumps() const { return static_cast<bool>(impl_->jumps); }
  std::vector<double> jumps(double lo, double hi) const;

  /// The truth label if known, otherwise Undecided.
  ClassLabel label() const;

 private:
  std::shared_ptr<const Spec> impl_;
};

/// Free-function spelling used throughout the numeric modules.
inline double eval_log(const FunctionHandle& h, double x) { return h.eval_log(x); }

}  // namespace mindex
