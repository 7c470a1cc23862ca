#pragma once

#include <cstddef>
#include <vector>

#include "collfrag/daughter.hpp"
#include "collfrag/grid.hpp"
#include "collfrag/kernel.hpp"
#include "collfrag/scheme.hpp"

namespace collfrag {

struct Tolerances {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;

  bool operator==(const Tolerances&) const = default;
};

struct StepResult {
  State state;
  double dt_used = 0.0;
  double dt_next = 0.0;
  // Mass added back by clipping round-off negatives to zero.
  double clipped_mass = 0.0;
};

// Error weight max(x^k0, x^(1+k0)) of each cell.
std::vector<double> uniqueness_weights(const SizeGrid& grid, double k0);

// One accepted Bogacki-Shampine 3(2) step, attempted first with dt_target
// and halved on every rejection. The local error is measured as
// sum_i w_i |e_i| with w = uniqueness_weights(grid, k0) and accepted when
// it is below abs_tol + rel_tol * sum_i w_i |c_i|. A step that would drive a
// content below -1e-14 * sum |c| is rejected as well. Throws StiffnessError
// once the trial step drops below dt_min.
StepResult step(const RhsWorkspace& ws, const State& state, double dt_target,
                const Tolerances& tol, double dt_min, std::size_t workers = 1);

struct RunSpec {
  SizeGrid grid{1e-4, 10.0, 128};
  KernelSpec kernel{0.0, 0.0};
  DaughterLaw law{0.0, 0.5};
  InitialCondition initial;
  double t_end = 1.0;
  // Output times; 0 and t_end are always added.
  std::vector<double> snapshot_times;
  Tolerances tolerances;
  std::size_t workers = 1;

  bool operator==(const RunSpec&) const = default;
};

struct RunOutput {
  RunSpec spec;
  std::vector<State> snapshots;
  // Cumulative clipped mass at each snapshot.
  std::vector<double> clip_mass;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  const SizeGrid& grid() const noexcept { return spec.grid; }
  std::vector<double> times() const;
  std::vector<double> moment_series(double k) const;
  std::vector<double> dust_series() const;
};

// Sorted, de-duplicated output times including 0 and t_end.
std::vector<double> resolve_snapshot_times(double t_end,
                                           const std::vector<double>& requested);

// Integrates from the discretised initial condition to t_end. StiffnessError
// propagates with the failure time.
RunOutput run(const RunSpec& spec);
RunOutput run(const RunSpec& spec, const State& initial);

struct PicardResult {
  State state;
  // sup over the time mesh of ||u^{m+1} - u^m||_{k0} + ||u^{m+1} - u^m||_1,
  // one entry per iteration.
  std::vector<double> differences;
  std::size_t iterations = 0;
};

inline constexpr std::size_t picard_time_nodes = 64;

// Fixed-point iteration u^{m+1}(t) = u0 + int_0^t rhs(u^m) on a uniform mesh
// of picard_time_nodes nodes with the composite trapezoid rule. The kernel
// must be truncated. ContractionError if the iterates have not settled to
// `tol` after max_iter sweeps or stop being finite.
PicardResult picard_solve(const RhsWorkspace& ws, const State& initial,
                          double t_end, std::size_t max_iter, double tol);

}  // namespace collfrag
