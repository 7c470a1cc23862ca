#include "collfrag/daughter.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"

namespace collfrag {

DaughterLaw::DaughterLaw(double nu, double k0) : nu_(nu), k0_(k0) {
  if (!std::isfinite(nu) || nu <= -2.0 || nu > 0.0)
    throw DomainError("daughter exponent nu must lie in (-2, 0], got " +
                      std::to_string(nu));
  const double k0_min = std::fabs(nu) - 1.0 > 0.0 ? std::fabs(nu) - 1.0 : 0.0;
  if (!std::isfinite(k0) || k0 <= k0_min || k0 >= 1.0)
    throw DomainError("k0 must lie in (max(0, |nu| - 1), 1) = (" +
                      std::to_string(k0_min) + ", 1), got " +
                      std::to_string(k0));
}

double DaughterLaw::p_max() const noexcept {
  if (nu_ == 0.0) return std::numeric_limits<double>::infinity();
  return (k0_ + 1.0) / std::fabs(nu_);
}

namespace {

// int_a^b s^(q-1) ds with 0 <= a <= b; q > 0 required when a = 0.
// The expm1 form keeps accuracy when b/a is close to 1 or q is close to 0.
double power_integral(double q, double a, double b) {
  if (a == b) return 0.0;
  if (a == 0.0) return power(b, q) / q;
  const double log_ratio = std::log(b / a);
  if (q == 0.0) return log_ratio;
  return power(a, q) * std::expm1(q * log_ratio) / q;
}

void check_interval(double x, double a, double b) {
  if (!(x > 0.0)) throw DomainError("parent size must be positive");
  if (!(a >= 0.0) || !(a <= b))
    throw DomainError("fragment interval must satisfy 0 <= a <= b");
  if (b > x)
    throw DomainError("fragment interval extends beyond the parent size");
}

}  // namespace

double fragment_density(const DaughterLaw& law, double s, double x) {
  if (!(x > 0.0)) throw DomainError("parent size must be positive");
  if (!(s > 0.0) || s >= x) return 0.0;
  const double nu = law.nu();
  return (nu + 2.0) * power(s, nu) * power(x, -nu - 1.0);
}

double partial_moment(const DaughterLaw& law, double k, double x, double a,
                      double b) {
  check_interval(x, a, b);
  const double nu = law.nu();
  const double q = k + nu + 1.0;
  if (a == 0.0 && b > 0.0 && q <= 0.0)
    throw DivergentMomentError(
        "moment of order " + std::to_string(k) +
        " of the daughter law diverges at zero (requires k > " +
        std::to_string(-nu - 1.0) + ")");
  return (nu + 2.0) * power(x, -nu - 1.0) * power_integral(q, a, b);
}

double cell_mass_deposit(const DaughterLaw& law, double x, double a, double b) {
  check_interval(x, a, b);
  const double nu = law.nu();
  return power(x, -nu - 1.0) * (nu + 2.0) * power_integral(nu + 2.0, a, b);
}

double e_constant(const DaughterLaw& law, double p) {
  if (!(p >= 1.0)) throw DomainError("E(k0, p) requires p >= 1");
  if (p >= law.p_max())
    throw DivergentMomentError("E(k0, p) diverges for p >= (k0 + 1)/|nu| = " +
                               std::to_string(law.p_max()));
  const double nu = law.nu();
  return power(nu + 2.0, p) / (law.k0() + p * nu + 1.0);
}

double e_k0(const DaughterLaw& law) { return e_constant(law, 1.0) + 1.0; }

double upsilon_power(const DaughterLaw& law, double k, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw DomainError("Upsilon evaluated at a non-positive size");
  const double q = k + law.nu() + 1.0;
  if (q <= 0.0)
    throw DivergentMomentError("Upsilon of s^" + std::to_string(k) +
                               " diverges (requires k > |nu| - 1)");
  return (1.0 - k) / q * (power(x, k) + power(y, k));
}

}  // namespace collfrag
