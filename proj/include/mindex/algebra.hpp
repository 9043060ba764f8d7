#pragma once

#include <optional>
#include <span>

#include "mindex/function.hpp"
#include "mindex/quadrature.hpp"

namespace mindex::algebra {

enum class OpKind { ScaleAdd, Reciprocal, Product, Convolve, Compose };

std::string_view to_string(OpKind op);

/// Label of the result of `op` as far as the closure rules of the class
/// determine it, Undecided otherwise. Operand order follows the operation
/// signatures (scale_add(a, U, V), compose(U, V) = U o V).
ClassLabel predicted_class(OpKind op, std::span<const ClassLabel> operands,
                           std::optional<double> a = std::nullopt);

// Each constructor returns a handle whose truth label is the prediction.

FunctionHandle scale_add(double a, const FunctionHandle& u, const FunctionHandle& v);
FunctionHandle reciprocal(const FunctionHandle& u);
FunctionHandle product(const FunctionHandle& u, const FunctionHandle& v);

/// (U*V)(x) = integral over [0,x] of U(t) V(x-t) dt, split at x/2 and
/// integrated adaptively. Evaluation raises Errc::QuadratureFailure when the
/// tolerance is not met within the evaluation budget.
FunctionHandle convolve(const FunctionHandle& u, const FunctionHandle& v, const QuadratureConfig& cfg = {});

/// (U o V)(x) = U(V(x)).
FunctionHandle compose(const FunctionHandle& u, const FunctionHandle& v);

}  // namespace mindex::algebra
