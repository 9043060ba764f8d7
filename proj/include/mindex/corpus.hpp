#pragma once

#include <map>
#include <string>
#include <vector>

#include "mindex/function.hpp"

namespace mindex {

/// U(x) = 1 on (0,1), x^alpha on [1,inf).
FunctionHandle make_power_tail(double alpha);

/// Peter-and-Paul tail: 1 on (0,2), 2^-n on [2^n, 2^(n+1)).
FunctionHandle make_peter_paul();

/// Step function with levels x_n^(alpha(1+beta)) on [x_n, x_{n+1}), x_n = x_a^((1+alpha)^n).
FunctionHandle make_oset_geometric(double alpha, double beta, double x_a);

/// Step function with levels 2^(alpha x_n) on [x_n, x_{n+1}), x_1 = 1, x_{n+1} = 2^(x_n/c).
FunctionHandle make_oset_tower(double c, double alpha);

FunctionHandle make_two_plus_sin();
FunctionHandle make_x_pow_sin_x();
FunctionHandle make_exp_neg();
FunctionHandle make_exp_pos();
/// exp(-x^2), a smooth tail in the Gumbel domain.
FunctionHandle make_exp_neg_sq();
/// exp(-floor(x) log x).
FunctionHandle make_floor_log_tail();
/// 1/x on the intervals (n, n + n^-n), exp(-x) elsewhere.
FunctionHandle make_remark7_mix();
/// Pareto tail x^-alpha on [1,inf), alpha > 0.
FunctionHandle make_pareto_tail(double alpha);
/// (x/e)^-alpha (1 + 1/log x)/2 for x >= e, 1 below; regularly varying with a log perturbation.
FunctionHandle make_log_perturbed_power(double alpha);
/// x^alpha on all of (0,inf), alpha > 0. Continuous with U(0+) = 0.
FunctionHandle make_ramp_power(double alpha);
/// x^alpha (1 + amplitude sin(log x)) on (0,inf), 0 <= amplitude < 1.
FunctionHandle make_ramp_modulated(double alpha, double amplitude);

const std::vector<std::string>& catalog_names();

/// Builds a corpus member by name. Unknown names raise Errc::UnknownName,
/// unknown or invalid parameters raise Errc::Param.
FunctionHandle make_named(const std::string& name, const std::map<std::string, double>& params = {});

}  // namespace mindex
