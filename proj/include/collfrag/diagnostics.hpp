#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "collfrag/bounds.hpp"
#include "collfrag/grid.hpp"
#include "collfrag/integrate.hpp"

namespace collfrag {

// d/dt of a sampled series: three-point differences on a possibly
// non-uniform mesh, one-sided second order at both ends.
std::vector<double> time_derivative(std::span<const double> times,
                                    std::span<const double> values);

// Ratio of k-content to mass of the fragments that fall below x_min,
// (nu+2)/(k+nu+1) x_min^(k-1). It does not depend on the parent size.
double dust_content_ratio(const DaughterLaw& law, double x_min, double k);

struct IdentityResidual {
  double k = 0.0;
  std::vector<double> times;
  std::vector<double> derivative;       // dM_k/dt
  std::vector<double> production;       // (1-k)/(k+nu+1) [..]
  std::vector<double> dust_correction;  // ratio * d(dust)/dt
  std::vector<double> residual;

  // max |residual| / max |derivative|
  double relative() const;
};

// r = dM_k/dt - (1-k)/(k+nu+1) [M_{k+l1} M_l2 + M_{k+l2} M_l1] + correction,
// where the correction puts back the k-content carried below x_min.
// DivergentMomentError for k <= |nu| - 1; InputError for fewer than three
// snapshots.
IdentityResidual moment_identity_residual(const RunOutput& run, double k);

struct CheckResult {
  bool passed = false;
  // Signed slack of the worst point: positive means inside the bound.
  double margin = 0.0;
  double worst_time = 0.0;
  std::string detail;
};

// |M_1 + dust - (M_1 + dust)(0)| <= tol * rho at every snapshot.
CheckResult mass_budget_check(const RunOutput& run, double tol = 1e-6);

// For every grid edge x and consecutive snapshots, the tail k-moment above x
// may grow by at most tol * rho * x^(k-1).
CheckResult tail_monotonicity_check(const RunOutput& run, double k,
                                    double tol = 1e-8);

// M_k(t) <= M_k(0) + tol * rho at every snapshot.
CheckResult moment_nonincrease_check(const RunOutput& run, double k,
                                     double tol = 1e-8);

// max_{t <= T} M_k0(t) <= C1(T). InputError unless the report is in an
// existence regime and T does not exceed a finite T_k0. With `amplified`
// the E(k0,1)-scaled chain is used instead.
CheckResult c1_bound_check(const RunOutput& run, const BoundsReport& report,
                           double T, bool amplified = false);

// M~_k(t) >= M~_k(0) + (1-k)/(k+nu+1) int_0^t M_{k+l2} M_l1, with
// M~_k = M_k + dust_content_ratio * dust, up to 1% of the integral term plus
// 1e-12 M_k(0). InputError unless the report is in the non-existence regime
// and k lies in (|nu| - 1, 1].
CheckResult nonexistence_growth_check(const RunOutput& run,
                                      const BoundsReport& report, double k);

// sum_i max(x^k0, x^(1+k0)) |a_i - b_i|.
double weighted_distance(std::span<const double> a, std::span<const double> b,
                         const SizeGrid& grid, double k0);
double weighted_distance(const State& a, const State& b, const SizeGrid& grid,
                         double k0);

struct ShatterRow {
  double x_min = 0.0;
  std::size_t n_cells = 0;
  double dust_fraction = 0.0;
};

struct ShatterStudy {
  std::vector<ShatterRow> rows;
  // least-squares slope of log10(dust fraction) against log10(x_min)
  double slope = 0.0;
  // factor by which the dust fraction drops per decade of refinement
  double decrease_per_decade = 0.0;
  bool shattering = false;
  std::string verdict() const { return shattering ? "shattering" : "conservative"; }
};

// Fits the trend of an existing table. InputError for fewer than 3 rows or
// fewer than 2 distinct x_min values.
ShatterStudy shattering_verdict(std::vector<ShatterRow> rows);

// Reruns `base` with each x_min (same x_max, same number of cells per
// decade) and reports dust(t_end)/M_1(0). Runs are executed concurrently.
ShatterStudy shattering_study(const RunSpec& base, std::span<const double> x_mins);

}  // namespace collfrag
