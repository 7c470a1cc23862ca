#include "collfrag/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"

namespace collfrag {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool existence_family(const KernelSpec& kernel, const DaughterLaw& law) {
  return law.k0() <= kernel.lambda1() && kernel.lambda2() <= 1.0;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Lower-bound horizon and its C1 table for a given c3.
double horizon(double k0, double lambda, double m_k0, double c3) {
  if (lambda >= 1.0) return inf;
  return (1.0 - k0) * power(m_k0, -(1.0 - lambda) / (1.0 - k0)) /
         (2.0 * (1.0 - lambda) * c3);
}

double c1_formula(double k0, double lambda, double m_k0, double c3, double T) {
  if (lambda >= 1.0)
    return (1.0 + m_k0) * std::exp(2.0 * c3 * T / (1.0 - k0));
  const double base = power(m_k0, -(1.0 - lambda) / (1.0 - k0)) -
                      2.0 * (1.0 - lambda) * c3 * T / (1.0 - k0);
  if (!(base > 0.0)) return inf;
  return power(base, -(1.0 - k0) / (1.0 - lambda));
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::global_existence: return "GlobalExistence";
    case Regime::local_existence: return "LocalExistence";
    case Regime::nonexistence: return "NonExistence";
    case Regime::uncovered: return "Uncovered";
  }
  return "Uncovered";
}

Regime classify_regime(const KernelSpec& kernel, const DaughterLaw& law) {
  const double lambda = kernel.homogeneity();
  const double k0 = law.k0();
  if (existence_family(kernel, law)) {
    if (lambda >= 1.0 && lambda <= 2.0) return Regime::global_existence;
    if (lambda >= 2.0 * k0 && lambda < 1.0) return Regime::local_existence;
  }
  const double threshold = std::fabs(law.nu()) - 1.0;
  if (law.nu() <= -1.0 && kernel.lambda1() < threshold && lambda < 1.0)
    return Regime::nonexistence;
  return Regime::uncovered;
}

std::vector<HypothesisCheck> hypothesis_checklist(const KernelSpec& kernel,
                                                  const DaughterLaw& law) {
  const double l1 = kernel.lambda1(), l2 = kernel.lambda2();
  const double lambda = kernel.homogeneity(), k0 = law.k0(), nu = law.nu();
  const double thr = std::fabs(nu) - 1.0;
  return {
      {"k0 <= lambda1 (" + num(k0) + " <= " + num(l1) + ")", k0 <= l1},
      {"lambda1 <= lambda2", l1 <= l2},
      {"lambda2 <= 1 (" + num(l2) + ")", l2 <= 1.0},
      {"lambda >= 2 k0 (" + num(lambda) + " >= " + num(2.0 * k0) + ")",
       lambda >= 2.0 * k0},
      {"lambda <= 2 (" + num(lambda) + ")", lambda <= 2.0},
      {"lambda >= 1 (global horizon)", lambda >= 1.0},
      {"k0 > |nu| - 1 (" + num(k0) + " > " + num(thr) + ")", k0 > thr},
      {"nu in (-2, -1] (non-integrable law, nu = " + num(nu) + ")",
       nu > -2.0 && nu <= -1.0},
      {"lambda1 < |nu| - 1 (" + num(l1) + " < " + num(thr) + ")", l1 < thr},
      {"lambda < 1 (" + num(lambda) + ")", lambda < 1.0},
  };
}

double ExistenceBounds::C1(double T) const {
  return c1_formula(k0, homogeneity, m_k0, c3, T);
}

double ExistenceBounds::C1_amplified_at(double T) const {
  return c1_formula(k0, homogeneity, m_k0, c3_amplified, T);
}

BoundsReport existence_bounds(const KernelSpec& kernel, const DaughterLaw& law,
                              double rho, double m_k0, double m_k0p1,
                              std::span<const double> T_values) {
  if (!(rho > 0.0) || !(m_k0 > 0.0) || !(m_k0p1 > 0.0))
    throw InputError("mass and initial moments must be positive");
  BoundsReport report;
  report.regime = classify_regime(kernel, law);
  report.hypotheses = hypothesis_checklist(kernel, law);
  if (report.regime != Regime::global_existence &&
      report.regime != Regime::local_existence)
    return report;

  const double k0 = law.k0(), l1 = kernel.lambda1(), l2 = kernel.lambda2();
  const double lambda = kernel.homogeneity();
  ExistenceBounds b;
  b.k0 = k0;
  b.homogeneity = lambda;
  b.m_k0 = m_k0;
  auto c_of = [&](double l) {
    return std::max(power(rho, l / (1.0 - k0)),
                    power(rho, (1.0 - l) / k0) *
                        power(m_k0p1, (k0 + l - 1.0) / k0));
  };
  b.c1 = c_of(l1);
  b.c2 = c_of(l2);
  b.c3 = std::max(b.c1 * power(rho, (l2 - k0) / (1.0 - k0)),
                  b.c2 * power(rho, (l1 - k0) / (1.0 - k0)));
  b.c3_amplified = e_constant(law, 1.0) * b.c3;
  b.T_k0 = horizon(k0, lambda, m_k0, b.c3);
  b.T_k0_amplified = horizon(k0, lambda, m_k0, b.c3_amplified);
  for (double T : T_values) {
    if (!(T >= 0.0)) throw InputError("horizon T must be non-negative");
    b.T_values.push_back(T);
    b.C1_values.push_back(b.C1(T));
    b.C1_amplified.push_back(b.C1_amplified_at(T));
  }
  report.existence = std::move(b);
  return report;
}

double ell1(const KernelSpec& kernel, double k) {
  return kernel.lambda1() - k + positive_part(k + kernel.lambda2() - 1.0);
}

double ell2(const KernelSpec& kernel, const DaughterLaw& law, double rho,
            double m_k0p1, double k) {
  const double k0 = law.k0(), l1 = kernel.lambda1(), l2 = kernel.lambda2();
  const double lead = power(rho, (l1 - k) / (1.0 - k));
  const double a = power(rho, l2 / (1.0 - k));
  const double b = power(rho, (1.0 + k0 - k - l2) / k0) *
                   power(m_k0p1, (k + l2 - 1.0) / k0);
  return lead * std::min(a, b);
}

double T1_of_k(const KernelSpec& kernel, const DaughterLaw& law, double rho,
               double m_k, double m_k0p1, double k) {
  const double l = ell1(kernel, k);
  return (k + law.nu() + 1.0) * power(m_k, l / (1.0 - k)) /
         (std::fabs(l) * ell2(kernel, law, rho, m_k0p1, k));
}

std::vector<double> default_k_grid(const DaughterLaw& law) {
  constexpr int n = 64;
  const double lo = std::max(0.0, std::fabs(law.nu()) - 1.0);
  const double span = 1.0 - lo;
  std::vector<double> k(n);
  // offsets from 1e-6 to 0.999 of the interval, equally spaced in log
  const double a = std::log(1e-6), b = std::log(0.999);
  for (int i = 0; i < n; ++i)
    k[i] = lo + span * std::exp(a + (b - a) * i / (n - 1));
  return k;
}

BoundsReport nonexistence_bound(const KernelSpec& kernel, const DaughterLaw& law,
                                double rho,
                                const std::function<double(double)>& initial_moment,
                                double m_k0p1, std::span<const double> k_grid) {
  if (!(rho > 0.0) || !(m_k0p1 > 0.0))
    throw InputError("mass and initial moments must be positive");
  BoundsReport report;
  report.regime = classify_regime(kernel, law);
  report.hypotheses = hypothesis_checklist(kernel, law);
  if (report.regime != Regime::nonexistence) return report;

  const double lo = std::fabs(law.nu()) - 1.0;
  NonexistenceBounds nb;
  nb.T1_bound = inf;
  for (double k : k_grid) {
    if (!(k > lo && k < 1.0))
      throw InputError("k = " + num(k) + " outside (|nu| - 1, 1) = (" + num(lo) +
                       ", 1)");
    const double t1 = T1_of_k(kernel, law, rho, initial_moment(k), m_k0p1, k);
    nb.k_grid.push_back(k);
    nb.ell1.push_back(ell1(kernel, k));
    nb.ell2.push_back(ell2(kernel, law, rho, m_k0p1, k));
    nb.T1.push_back(t1);
    if (t1 < nb.T1_bound) {
      nb.T1_bound = t1;
      nb.argmin_k = k;
    }
  }
  report.nonexistence = std::move(nb);
  return report;
}

std::vector<double> gronwall_envelope(const DaughterLaw& law,
                                      std::span<const double> times,
                                      std::span<const double> m_k0,
                                      std::span<const double> m_high, double d0) {
  if (times.size() != m_k0.size() || times.size() != m_high.size())
    throw InputError("moment series and time mesh differ in length");
  const double rate = 12.0 * e_constant(law, 1.0);
  std::vector<double> env(times.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) {
      const double dt = times[i] - times[i - 1];
      if (dt < 0.0) throw InputError("time mesh is not increasing");
      integral += 0.5 * dt * (m_k0[i - 1] + m_high[i - 1] + m_k0[i] + m_high[i]);
    }
    env[i] = d0 * std::exp(rate * integral);
  }
  return env;
}

}  // namespace collfrag
