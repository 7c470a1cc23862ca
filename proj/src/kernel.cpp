#include "collfrag/kernel.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"

namespace collfrag {

KernelSpec::KernelSpec(double lambda1, double lambda2,
                       std::optional<int> truncation)
    : lambda1_(lambda1), lambda2_(lambda2), truncation_(truncation) {
  if (!std::isfinite(lambda1_) || !std::isfinite(lambda2_))
    throw DomainError("kernel exponents must be finite");
  if (lambda1_ > lambda2_) std::swap(lambda1_, lambda2_);
  if (lambda1_ < -2.0 || lambda2_ > 2.0)
    throw DomainError("kernel exponents must lie in [-2, 2], got (" +
                      std::to_string(lambda1_) + ", " +
                      std::to_string(lambda2_) + ")");
  if (truncation_ && *truncation_ <= 0)
    throw DomainError("kernel truncation index must be a positive integer");
}

namespace {

bool inside_truncation(int n, double x) {
  const double nd = n;
  return x > 1.0 / nd && x < nd;
}

}  // namespace

double eval_kernel(const KernelSpec& spec, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw DomainError("kernel evaluated at a non-positive size");
  if (const auto& n = spec.truncation()) {
    if (!inside_truncation(*n, x) || !inside_truncation(*n, y)) return 0.0;
  }
  const double l1 = spec.lambda1();
  const double l2 = spec.lambda2();
  return power(x, l1) * power(y, l2) + power(x, l2) * power(y, l1);
}

bool kernel_bound_check(const KernelSpec& spec, double k0, double x, double y) {
  const double lhs = eval_kernel(spec.untruncated(), x, y);
  const double rhs = 2.0 * (power(x, k0) + x) * (power(y, k0) + y);
  return lhs <= rhs;
}

}  // namespace collfrag
