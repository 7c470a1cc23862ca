#pragma once

#include <optional>

namespace collfrag {

// Two-exponent homogeneous collision kernel
//   Phi(x, y) = x^l1 y^l2 + x^l2 y^l1,   l1 <= l2,
// optionally cut off outside (1/n, n)^2.
class KernelSpec {
 public:
  // Exponents given in reverse order are swapped. Both must lie in [-2, 2];
  // a truncation index, when present, must be positive.
  KernelSpec(double lambda1, double lambda2,
             std::optional<int> truncation = std::nullopt);

  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }
  double homogeneity() const noexcept { return lambda1_ + lambda2_; }
  const std::optional<int>& truncation() const noexcept { return truncation_; }

  KernelSpec untruncated() const { return {lambda1_, lambda2_}; }

  bool operator==(const KernelSpec&) const = default;

 private:
  double lambda1_;
  double lambda2_;
  std::optional<int> truncation_;
};

// Throws DomainError for non-positive sizes.
double eval_kernel(const KernelSpec& spec, double x, double y);

// Phi(x, y) <= 2 (x^k0 + x)(y^k0 + y); meaningful for k0 <= l1 <= l2 <= 1.
bool kernel_bound_check(const KernelSpec& spec, double k0, double x, double y);

}  // namespace collfrag
