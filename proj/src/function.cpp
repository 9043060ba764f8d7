#include "mindex/function.hpp"

#include <cmath>
#include <sstream>

namespace mindex {

FunctionHandle::FunctionHandle(Spec spec) {
  if (!spec.log_eval) throw Error(Errc::Param, "function handle '" + spec.name + "' has no evaluator");
  if (!(spec.support_floor < spec.support_ceiling)) throw Error(Errc::Param, "empty support");
  impl_ = std::make_shared<const Spec>(std::move(spec));
}

double FunctionHandle::eval_log(double x) const {
  if (!(x > impl_->support_floor) || x > impl_->support_ceiling) {
    std::ostringstream msg;
    msg << impl_->name << " is not defined at x=" << x;
    throw Error(Errc::Domain, msg.str());
  }
  double v = impl_->log_eval(x);
  if (std::isnan(v)) {
    std::ostringstream msg;
    msg << impl_->name << " evaluated to NaN at x=" << x;
    throw Error(Errc::Domain, msg.str());
  }
  return v;
}

std::vector<double> FunctionHandle::jumps(double lo, double hi) const {
  if (!impl_->jumps || !(lo < hi)) return {};
  return impl_->jumps(lo, hi);
}

ClassLabel FunctionHandle::label() const {
  return impl_->truth ? impl_->truth->label : ClassLabel::undecided();
}

}  // namespace mindex
