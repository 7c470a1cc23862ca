#pragma once

namespace collfrag {

// Power-law daughter distribution
//   beta*(s, x, y) = (nu + 2) s^nu x^(-nu-1)   for 0 < s < x,
// with no mass transfer between the colliding partners: each partner breaks
// into fragments no larger than itself and its own mass is conserved. The
// partner size y never enters the formulas below.
//
// k0 is the exponent of the weighted integrability condition
//   int_0^x s^k0 beta*(s, x, .)^p ds = E(k0, p) x^(k0 + 1 - p),
// which holds for p < (k0 + 1)/|nu| as long as k0 > |nu| - 1.
class DaughterLaw {
 public:
  // nu in (-2, 0], k0 in (max(0, |nu| - 1), 1); DomainError otherwise.
  DaughterLaw(double nu, double k0);

  double nu() const noexcept { return nu_; }
  double k0() const noexcept { return k0_; }

  // Supremum of admissible p, (k0 + 1)/|nu|; +inf for nu = 0.
  double p_max() const noexcept;
  // Upper end 1 + k0 of the smaller exponent range used by the existence
  // theory. Reported next to p_max(); the library accepts the larger range.
  double p0_max() const noexcept { return 1.0 + k0_; }

  // Finite number of fragments per breakup (nu > -1).
  bool integrable() const noexcept { return nu_ > -1.0; }

  bool operator==(const DaughterLaw&) const = default;

 private:
  double nu_;
  double k0_;
};

// beta*(s, x, .) itself; zero outside (0, x).
double fragment_density(const DaughterLaw& law, double s, double x);

// int_a^b s^k beta*(s, x, .) ds for 0 <= a <= b <= x.
// DivergentMomentError when a = 0 and k + nu + 1 <= 0.
double partial_moment(const DaughterLaw& law, double k, double x, double a,
                      double b);

// Fragment mass a parent of size x deposits into (a, b):
//   x^(-nu-1) (b^(nu+2) - a^(nu+2)).
// Finite for every admissible nu, including a = 0.
double cell_mass_deposit(const DaughterLaw& law, double x, double a, double b);

// E(k0, p) = (nu + 2)^p / (k0 + p nu + 1), for 1 <= p < p_max.
double e_constant(const DaughterLaw& law, double p);

// E(k0, 1) + 1, the bound on |Upsilon| for k0-Hoelder test functions with
// unit seminorm.
double e_k0(const DaughterLaw& law);

// Upsilon for the power test function s^k:
//   (1 - k)/(k + nu + 1) (x^k + y^k).
double upsilon_power(const DaughterLaw& law, double k, double x, double y);

}  // namespace collfrag
