#include "collfrag/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"

namespace collfrag {

std::vector<double> uniqueness_weights(const SizeGrid& grid, double k0) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.rep(i);
    w[i] = std::max(power(x, k0), power(x, 1.0 + k0));
  }
  return w;
}

namespace {

// Bogacki-Shampine 3(2) tableau.
constexpr double a21 = 0.5;
constexpr double a32 = 0.75;
constexpr double b1 = 2.0 / 9.0, b2 = 1.0 / 3.0, b3 = 4.0 / 9.0;
constexpr double e1 = b1 - 7.0 / 24.0, e2 = b2 - 0.25, e3 = b3 - 1.0 / 3.0,
                 e4 = -0.125;

double weighted_norm(const std::vector<double>& w, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::fabs(v[i]);
  return s;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

}  // namespace

StepResult step(const RhsWorkspace& ws, const State& state, double dt_target,
                const Tolerances& tol, double dt_min, std::size_t workers) {
  if (!(dt_target > 0.0)) throw DomainError("step size must be positive");
  const std::size_t n = ws.size();
  if (state.contents.size() != n)
    throw InputError("state size does not match the grid");

  const auto w = uniqueness_weights(ws.grid(), ws.law().k0());
  const auto& y = state.contents;
  const double tol_value = tol.abs_tol + tol.rel_tol * weighted_norm(w, y);
  const double negative_floor = -1e-14 * l1_norm(y);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n), next(n);
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  rhs(ws, y, k1, d1, workers);

  double dt = dt_target;
  for (;;) {
    if (dt < dt_min)
      throw StiffnessError(state.time,
                           "step size fell below " + std::to_string(dt_min) +
                               " at t = " + std::to_string(state.time));

    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * a21 * k1[i];
    rhs(ws, stage, k2, d2, workers);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * a32 * k2[i];
    rhs(ws, stage, k3, d3, workers);
    for (std::size_t i = 0; i < n; ++i)
      next[i] = y[i] + dt * (b1 * k1[i] + b2 * k2[i] + b3 * k3[i]);
    rhs(ws, next, k4, d4, workers);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err += w[i] * std::fabs(dt * (e1 * k1[i] + e2 * k2[i] + e3 * k3[i] +
                                    e4 * k4[i]));
    const double lowest = n ? *std::min_element(next.begin(), next.end()) : 0.0;

    if (!std::isfinite(err) || err > tol_value || lowest < negative_floor) {
      dt *= 0.5;
      continue;
    }

    StepResult out;
    out.dt_used = dt;
    const double factor =
        err == 0.0 ? 5.0
                   : std::clamp(0.9 * std::cbrt(tol_value / err), 0.2, 5.0);
    out.dt_next = dt * factor;
    const auto reps = ws.grid().reps();
    for (std::size_t i = 0; i < n; ++i)
      if (next[i] < 0.0) {
        out.clipped_mass += -next[i] * reps[i];
        next[i] = 0.0;
      }
    out.state.contents = std::move(next);
    out.state.dust_mass = state.dust_mass + dt * (b1 * d1 + b2 * d2 + b3 * d3);
    out.state.time = state.time + dt;
    return out;
  }
}

std::vector<double> resolve_snapshot_times(double t_end,
                                           const std::vector<double>& requested) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw DomainError("t_end must be finite and non-negative");
  std::vector<double> t{0.0};
  for (double v : requested) {
    if (!(v >= 0.0) || v > t_end)
      throw DomainError("snapshot time " + std::to_string(v) +
                        " lies outside [0, t_end]");
    t.push_back(v);
  }
  t.push_back(t_end);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

std::vector<double> RunOutput::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.time);
  return t;
}

std::vector<double> RunOutput::moment_series(double k) const {
  std::vector<double> m;
  m.reserve(snapshots.size());
  for (const auto& s : snapshots) m.push_back(moment(grid(), s, k));
  return m;
}

std::vector<double> RunOutput::dust_series() const {
  std::vector<double> d;
  d.reserve(snapshots.size());
  for (const auto& s : snapshots) d.push_back(s.dust_mass);
  return d;
}

RunOutput run(const RunSpec& spec) {
  return run(spec, initial_state(spec.grid, spec.initial));
}

RunOutput run(const RunSpec& spec, const State& initial) {
  const auto times = resolve_snapshot_times(spec.t_end, spec.snapshot_times);
  const RhsWorkspace ws = precompute(spec.grid, spec.kernel, spec.law);

  RunOutput out;
  out.spec = spec;
  State state = initial;
  state.time = 0.0;
  double clipped = 0.0;
  out.snapshots.push_back(state);
  out.clip_mass.push_back(clipped);
  if (times.size() == 1) return out;

  const double dt_min = 1e-12 * spec.t_end;
  const auto w = uniqueness_weights(spec.grid, spec.law.k0());
  const Derivative d0 = rhs(ws, state, spec.workers);
  const double rate = weighted_norm(w, d0.d_contents);
  const double scale = weighted_norm(w, state.contents);
  double dt = rate > 0.0 ? std::min(spec.t_end, 1e-3 * scale / rate) : spec.t_end;

  for (std::size_t s = 1; s < times.size(); ++s) {
    const double target = times[s];
    while (state.time < target) {
      const double remaining = target - state.time;
      const bool to_target = dt >= remaining;
      const double trial = to_target ? remaining : dt;
      StepResult r = step(ws, state, trial, spec.tolerances, dt_min, spec.workers);
      out.rejected_steps += r.dt_used < trial ? 1 : 0;
      ++out.accepted_steps;
      clipped += r.clipped_mass;
      if (to_target && r.dt_used == trial) r.state.time = target;
      state = std::move(r.state);
      // a step shortened only to land on an output time says nothing about
      // the attainable step size
      dt = (to_target && r.dt_used == trial) ? std::max(dt, r.dt_next)
                                             : r.dt_next;
    }
    out.snapshots.push_back(state);
    out.clip_mass.push_back(clipped);
  }
  return out;
}

PicardResult picard_solve(const RhsWorkspace& ws, const State& initial,
                          double t_end, std::size_t max_iter, double tol) {
  if (!ws.kernel().truncation())
    throw InputError("Picard iteration requires a truncated kernel");
  if (!(t_end >= 0.0)) throw DomainError("t_end must be non-negative");
  const std::size_t n = ws.size();
  if (initial.contents.size() != n)
    throw InputError("state size does not match the grid");

  PicardResult result;
  result.state = initial;
  if (t_end == 0.0) return result;

  constexpr std::size_t nodes = picard_time_nodes;
  const double h = t_end / static_cast<double>(nodes - 1);
  const double k0 = ws.law().k0();
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ws.grid().rep(i);
    weight[i] = power(x, k0) + x;
  }

  std::vector<std::vector<double>> u(nodes, initial.contents);
  std::vector<double> dust(nodes, initial.dust_mass);
  std::vector<std::vector<double>> f(nodes, std::vector<double>(n));
  std::vector<double> fd(nodes);

  for (std::size_t m = 1; m <= max_iter; ++m) {
    for (std::size_t q = 0; q < nodes; ++q) rhs(ws, u[q], f[q], fd[q]);

    double diff = 0.0;
    std::vector<double> prev = initial.contents;
    double prev_dust = initial.dust_mass;
    for (std::size_t q = 1; q < nodes; ++q) {
      std::vector<double> next(n);
      for (std::size_t i = 0; i < n; ++i)
        next[i] = prev[i] + 0.5 * h * (f[q - 1][i] + f[q][i]);
      const double next_dust = prev_dust + 0.5 * h * (fd[q - 1] + fd[q]);
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        d += weight[i] * std::fabs(next[i] - u[q][i]);
      diff = std::max(diff, d);
      if (!std::isfinite(d)) diff = d;
      u[q - 1] = std::move(prev);
      dust[q - 1] = prev_dust;
      prev = std::move(next);
      prev_dust = next_dust;
    }
    u[nodes - 1] = std::move(prev);
    dust[nodes - 1] = prev_dust;

    result.differences.push_back(diff);
    result.iterations = m;
    if (!std::isfinite(diff))
      throw ContractionError(diff, "Picard iterates diverged at iteration " +
                                       std::to_string(m));
    if (diff <= tol) {
      result.state.contents = u[nodes - 1];
      result.state.dust_mass = dust[nodes - 1];
      result.state.time = initial.time + t_end;
      return result;
    }
  }
  throw ContractionError(result.differences.back(),
                         "Picard iteration did not contract within " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(result.differences.back()) + ")");
}

}  // namespace collfrag
