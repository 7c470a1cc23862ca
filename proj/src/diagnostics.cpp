#include "collfrag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"

namespace collfrag {

std::vector<double> time_derivative(std::span<const double> t,
                                    std::span<const double> f) {
  const std::size_t n = t.size();
  if (f.size() != n) throw InputError("series and time mesh differ in length");
  if (n < 2) throw InputError("need at least two samples to differentiate");
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
           h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[0] +
           (h1 + h2) / (h1 * h2) * f[1] - h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
    d[n - 1] = (2 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1] -
               (h1 + h2) / (h1 * h2) * f[n - 2] +
               h2 / (h1 * (h1 + h2)) * f[n - 3];
  }
  return d;
}

double dust_content_ratio(const DaughterLaw& law, double x_min, double k) {
  const double q = k + law.nu() + 1.0;
  if (!(q > 0.0))
    throw DivergentMomentError("k-content below x_min diverges for k <= |nu| - 1");
  return (law.nu() + 2.0) / q * power(x_min, k - 1.0);
}

double IdentityResidual::relative() const {
  double r = 0.0, d = 0.0;
  for (double v : residual) r = std::max(r, std::fabs(v));
  for (double v : derivative) d = std::max(d, std::fabs(v));
  return d > 0.0 ? r / d : r;
}

IdentityResidual moment_identity_residual(const RunOutput& run, double k) {
  const auto& law = run.spec.law;
  const auto& kernel = run.spec.kernel;
  const double q = k + law.nu() + 1.0;
  if (!(q > 0.0))
    throw DivergentMomentError("moment identity needs k > |nu| - 1");
  if (run.snapshots.size() < 3)
    throw InputError("moment identity needs at least three snapshots");
  const double l1 = kernel.lambda1(), l2 = kernel.lambda2();

  IdentityResidual out;
  out.k = k;
  out.times = run.times();
  out.derivative = time_derivative(out.times, run.moment_series(k));
  const auto dust_rate = time_derivative(out.times, run.dust_series());
  const double ratio = dust_content_ratio(law, run.grid().x_min(), k);
  const double coef = (1.0 - k) / q;
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    const auto& st = run.snapshots[s];
    const auto& g = run.grid();
    const double prod = coef * (moment(g, st, k + l1) * moment(g, st, l2) +
                                moment(g, st, k + l2) * moment(g, st, l1));
    out.production.push_back(prod);
    out.dust_correction.push_back(ratio * dust_rate[s]);
    out.residual.push_back(out.derivative[s] - prod + ratio * dust_rate[s]);
  }
  return out;
}

namespace {

double total_mass(const RunOutput& run, std::size_t s) {
  return moment(run.grid(), run.snapshots[s], 1.0) + run.snapshots[s].dust_mass;
}

void require_snapshots(const RunOutput& run) {
  if (run.snapshots.empty()) throw InputError("run has no snapshots");
}

}  // namespace

CheckResult mass_budget_check(const RunOutput& run, double tol) {
  require_snapshots(run);
  const double rho = total_mass(run, 0);
  CheckResult r;
  r.margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    const double slack = tol * rho - std::fabs(total_mass(run, s) - rho);
    if (slack < r.margin) {
      r.margin = slack;
      r.worst_time = run.snapshots[s].time;
    }
  }
  r.passed = r.margin >= 0.0;
  r.detail = "largest drift of M_1 + dust relative to its initial value";
  return r;
}

CheckResult tail_monotonicity_check(const RunOutput& run, double k, double tol) {
  require_snapshots(run);
  const auto& g = run.grid();
  const double rho = total_mass(run, 0);
  CheckResult r;
  r.margin = std::numeric_limits<double>::infinity();
  std::vector<double> prev(g.size() + 1);
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    // tails at every edge via a reverse cumulative sum
    std::vector<double> tail(g.size() + 1, 0.0);
    for (std::size_t i = g.size(); i-- > 0;)
      tail[i] = tail[i + 1] + power(g.rep(i), k) * run.snapshots[s].contents[i];
    if (s > 0)
      for (std::size_t e = 0; e <= g.size(); ++e) {
        const double slack =
            tol * rho * power(g.edge(e), k - 1.0) - (tail[e] - prev[e]);
        if (slack < r.margin) {
          r.margin = slack;
          r.worst_time = run.snapshots[s].time;
        }
      }
    prev = std::move(tail);
  }
  r.passed = r.margin >= 0.0;
  r.detail = "tail moment growth between consecutive snapshots";
  return r;
}

CheckResult moment_nonincrease_check(const RunOutput& run, double k, double tol) {
  require_snapshots(run);
  const auto m = run.moment_series(k);
  const double rho = total_mass(run, 0);
  CheckResult r;
  r.margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < m.size(); ++s) {
    const double slack = tol * rho - (m[s] - m[0]);
    if (slack < r.margin) {
      r.margin = slack;
      r.worst_time = run.snapshots[s].time;
    }
  }
  r.passed = r.margin >= 0.0;
  r.detail = "growth of M_k above its initial value";
  return r;
}

CheckResult c1_bound_check(const RunOutput& run, const BoundsReport& report,
                           double T, bool amplified) {
  require_snapshots(run);
  if (!report.existence)
    throw InputError(std::string("C1 bound needs an existence regime, got ") +
                     std::string(to_string(report.regime)));
  const auto& b = *report.existence;
  const double horizon = amplified ? b.T_k0_amplified : b.T_k0;
  if (T > horizon)
    throw InputError("T = " + std::to_string(T) + " exceeds T_k0 = " +
                     std::to_string(horizon));
  const double bound = amplified ? b.C1_amplified_at(T) : b.C1(T);
  CheckResult r;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : run.snapshots) {
    if (s.time > T) break;
    const double m = moment(run.grid(), s, b.k0);
    if (m > worst) {
      worst = m;
      r.worst_time = s.time;
    }
  }
  r.margin = bound - worst;
  r.passed = r.margin >= 0.0;
  r.detail = "max M_k0 = " + std::to_string(worst) +
             ", C1(T) = " + std::to_string(bound);
  return r;
}

CheckResult nonexistence_growth_check(const RunOutput& run,
                                      const BoundsReport& report, double k) {
  require_snapshots(run);
  if (report.regime != Regime::nonexistence)
    throw InputError(std::string("growth check needs the non-existence regime, got ") +
                     std::string(to_string(report.regime)));
  const auto& law = run.spec.law;
  const double lo = std::fabs(law.nu()) - 1.0;
  if (!(k > lo && k <= 1.0))
    throw InputError("k must lie in (|nu| - 1, 1]");
  const auto& g = run.grid();
  const double l1 = run.spec.kernel.lambda1(), l2 = run.spec.kernel.lambda2();
  const double coef = (1.0 - k) / (k + law.nu() + 1.0);
  const double ratio = dust_content_ratio(law, g.x_min(), k);

  auto corrected = [&](const State& s) {
    return moment(g, s, k) + ratio * s.dust_mass;
  };
  auto integrand = [&](const State& s) {
    return moment(g, s, k + l2) * moment(g, s, l1);
  };

  const double m0 = corrected(run.snapshots.front());
  CheckResult r;
  r.margin = std::numeric_limits<double>::infinity();
  double integral = 0.0;
  double prev_f = integrand(run.snapshots.front());
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    const auto& st = run.snapshots[s];
    if (s > 0) {
      const double f = integrand(st);
      integral += 0.5 * (st.time - run.snapshots[s - 1].time) * (prev_f + f);
      prev_f = f;
    }
    const double lower = m0 + coef * integral;
    const double tol = 0.01 * std::fabs(coef * integral) + 1e-12 * m0;
    const double slack = corrected(st) - lower + tol;
    if (slack < r.margin) {
      r.margin = slack;
      r.worst_time = st.time;
    }
  }
  r.passed = r.margin >= 0.0;
  r.detail = "dust-corrected M_k against its integral lower bound";
  return r;
}

double weighted_distance(std::span<const double> a, std::span<const double> b,
                         const SizeGrid& grid, double k0) {
  if (a.size() != grid.size() || b.size() != grid.size())
    throw InputError("states do not live on the same grid");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = grid.rep(i);
    d += std::max(power(x, k0), power(x, 1.0 + k0)) * std::fabs(a[i] - b[i]);
  }
  return d;
}

double weighted_distance(const State& a, const State& b, const SizeGrid& grid,
                         double k0) {
  return weighted_distance(a.contents, b.contents, grid, k0);
}

ShatterStudy shattering_verdict(std::vector<ShatterRow> rows) {
  if (rows.size() < 3)
    throw InputError("shattering study needs at least three x_min values");
  std::sort(rows.begin(), rows.end(),
            [](const ShatterRow& a, const ShatterRow& b) { return a.x_min > b.x_min; });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log10(r.x_min);
    const double y = std::log10(std::max(r.dust_fraction, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw InputError("x_min values must be distinct");
  ShatterStudy st;
  st.rows = std::move(rows);
  st.slope = (n * sxy - sx * sy) / den;
  st.decrease_per_decade = std::pow(10.0, st.slope);
  st.shattering = st.decrease_per_decade < 2.0;
  return st;
}

ShatterStudy shattering_study(const RunSpec& base, std::span<const double> x_mins) {
  if (x_mins.size() < 3)
    throw InputError("shattering study needs at least three x_min values");
  const double decades = std::log10(base.grid.x_max() / base.grid.x_min());
  const double per_decade = static_cast<double>(base.grid.size()) / decades;

  std::vector<RunSpec> specs;
  for (double xm : x_mins) {
    if (!(xm > 0.0 && xm < base.grid.x_max()))
      throw InputError("x_min must lie in (0, x_max)");
    RunSpec s = base;
    const auto n = static_cast<std::size_t>(
        std::max(2.0, std::round(per_decade * std::log10(base.grid.x_max() / xm))));
    s.grid = build_grid(xm, base.grid.x_max(), n);
    specs.push_back(std::move(s));
  }

  std::vector<ShatterRow> rows(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < specs.size(); ++i)
      pool.emplace_back([&, i] {
        try {
          const auto out = run(specs[i]);
          const double rho = moment(out.grid(), out.snapshots.front(), 1.0) +
                             out.snapshots.front().dust_mass;
          rows[i] = {specs[i].grid.x_min(), specs[i].grid.size(),
                     out.snapshots.back().dust_mass / rho};
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return shattering_verdict(std::move(rows));
}

}  // namespace collfrag
