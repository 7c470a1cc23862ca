#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collfrag/daughter.hpp"
#include "collfrag/kernel.hpp"

namespace collfrag {

enum class Regime { global_existence, local_existence, nonexistence, uncovered };

std::string_view to_string(Regime regime);

// One inequality of the existence or non-existence hypotheses together with
// whether the given parameters satisfy it.
struct HypothesisCheck {
  std::string statement;
  bool holds = false;
};

// Global:  k0 <= l1 <= l2 <= 1 and l1 + l2 in [1, 2].
// Local:   k0 <= l1 <= l2 <= 1 and l1 + l2 in [2 k0, 1).
// Non-existence: nu in (-2, -1], l1 < |nu| - 1, l1 + l2 < 1.
// Anything else is uncovered.
Regime classify_regime(const KernelSpec& kernel, const DaughterLaw& law);

std::vector<HypothesisCheck> hypothesis_checklist(const KernelSpec& kernel,
                                                  const DaughterLaw& law);

// Moment bound constants of the existence theory for initial data with mass
// rho and moments M_k0, M_{1+k0}.
//
// `c3_amplified`, `T_k0_amplified` and `C1_amplified` repeat the chain with
// c3 multiplied by E(k0, 1), the constant that bounds the k0-moment
// production of one collision; see README for why both are reported.
struct ExistenceBounds {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double T_k0 = 0.0;  // +inf when l1 + l2 >= 1
  std::vector<double> T_values;
  std::vector<double> C1_values;  // +inf for T >= T_k0

  double c3_amplified = 0.0;
  double T_k0_amplified = 0.0;
  std::vector<double> C1_amplified;

  double m_k0 = 0.0;
  double homogeneity = 0.0;
  double k0 = 0.0;

  double C1(double T) const;
  double C1_amplified_at(double T) const;
};

struct NonexistenceBounds {
  std::vector<double> k_grid;
  std::vector<double> ell1;
  std::vector<double> ell2;
  std::vector<double> T1;
  double T1_bound = 0.0;
  double argmin_k = 0.0;
};

struct BoundsReport {
  Regime regime = Regime::uncovered;
  std::vector<HypothesisCheck> hypotheses;
  std::optional<ExistenceBounds> existence;
  std::optional<NonexistenceBounds> nonexistence;
};

// existence is left empty unless the regime is global or local existence.
BoundsReport existence_bounds(const KernelSpec& kernel, const DaughterLaw& law,
                              double rho, double m_k0, double m_k0p1,
                              std::span<const double> T_values);

double ell1(const KernelSpec& kernel, double k);
double ell2(const KernelSpec& kernel, const DaughterLaw& law, double rho,
            double m_k0p1, double k);

// Per-k blow-up horizon (k + nu + 1) M_k^(ell1/(1-k)) / (|ell1| ell2).
double T1_of_k(const KernelSpec& kernel, const DaughterLaw& law, double rho,
               double m_k, double m_k0p1, double k);

// 64 points in (|nu| - 1, 1), geometrically clustered at the lower end.
std::vector<double> default_k_grid(const DaughterLaw& law);

// nonexistence is left empty unless the regime is non-existence. InputError
// for k outside (|nu| - 1, 1). `initial_moment(k)` returns M_k(u_in).
BoundsReport nonexistence_bound(const KernelSpec& kernel, const DaughterLaw& law,
                                double rho,
                                const std::function<double(double)>& initial_moment,
                                double m_k0p1, std::span<const double> k_grid);

// d0 exp(12 E(k0,1) int_0^t [M_k0 + M_high] ds) on the given time mesh, with
// the trapezoid rule. M_high is M_{1+k0+l2} of the sum of the two solutions.
std::vector<double> gronwall_envelope(const DaughterLaw& law,
                                      std::span<const double> times,
                                      std::span<const double> m_k0,
                                      std::span<const double> m_high, double d0);

}  // namespace collfrag
