#include <doctest.h>

#include <cmath>
#include <random>

#include "collfrag/diagnostics.hpp"
#include "collfrag/errors.hpp"

using namespace collfrag;
using doctest::Approx;

TEST_CASE("time derivative is exact on quadratics") {
  const std::vector<double> t = {0.0, 0.1, 0.25, 0.3, 0.7, 1.0};
  std::vector<double> f;
  for (double x : t) f.push_back(3 * x * x - 2 * x + 1);
  const auto d = time_derivative(t, f);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == Approx(6 * t[i] - 2).epsilon(1e-12));
  CHECK_THROWS_AS(time_derivative(std::vector<double>{0.0}, std::vector<double>{1.0}), InputError);
}

TEST_CASE("weighted distance is a metric") {
  const SizeGrid g = build_grid(1e-3, 10, 40);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 2);
  auto draw = [&] {
    State s = zero_state(g);
    for (double& v : s.contents) v = u(rng);
    return s;
  };
  for (int n = 0; n < 200; ++n) {
    const State a = draw(), b = draw(), c = draw();
    CHECK(weighted_distance(a, a, g, 0.5) == 0.0);
    CHECK(weighted_distance(a, b, g, 0.5) == weighted_distance(b, a, g, 0.5));
    CHECK(weighted_distance(a, c, g, 0.5) <=
          weighted_distance(a, b, g, 0.5) + weighted_distance(b, c, g, 0.5) + 1e-12);
    State twice = a;
    for (double& v : twice.contents) v *= 2;
    CHECK(weighted_distance(a, twice, g, 0.5) ==
          Approx(weighted_distance(a, zero_state(g), g, 0.5)).epsilon(1e-14));
  }
  const SizeGrid other = build_grid(1e-3, 10, 41);
  CHECK_THROWS_AS(weighted_distance(draw(), zero_state(other), g, 0.5), InputError);
}

namespace {

RunSpec local_spec() {
  RunSpec s;
  s.grid = build_grid(1e-4, 10, 64);
  s.kernel = KernelSpec(0.3, 0.3);
  s.law = DaughterLaw(-1.1, 0.2);
  s.initial.kind = InitialCondition::Kind::monodisperse;
  s.t_end = 0.02;
  s.snapshot_times = {0.005, 0.01, 0.015};
  return s;
}

}  // namespace

TEST_CASE("C1 bound check preconditions") {
  const RunOutput run = collfrag::run(local_spec());
  const auto report = existence_bounds(KernelSpec(0.3, 0.3), DaughterLaw(-1.1, 0.2), 1, 1, 1,
                                       std::vector<double>{0.5});
  RunOutput first = run;
  first.snapshots.resize(1);
  first.clip_mass.resize(1);
  CHECK(c1_bound_check(first, report, 0.0).passed);
  CHECK_THROWS_AS(c1_bound_check(run, report, 1.5), InputError);
  const auto nonex = existence_bounds(KernelSpec(0, 0), DaughterLaw(-1.5, 0.6), 1, 1, 1, {});
  CHECK_THROWS_AS(c1_bound_check(run, nonex, 0.1), InputError);
}

TEST_CASE("growth check preconditions and trivial cases") {
  RunSpec s = local_spec();
  s.kernel = KernelSpec(0, 0);
  s.law = DaughterLaw(-1.5, 0.6);
  s.snapshot_times.clear();
  for (int i = 1; i < 100; ++i) s.snapshot_times.push_back(0.0002 * i);
  const RunOutput run = collfrag::run(s);
  const auto report = existence_bounds(s.kernel, s.law, 1, 1, 1, {});
  REQUIRE(report.regime == Regime::nonexistence);
  RunOutput first = run;
  first.snapshots.resize(1);
  CHECK(nonexistence_growth_check(first, report, 0.6).passed);
  CHECK(nonexistence_growth_check(run, report, 1.0).passed);
  CHECK(nonexistence_growth_check(run, report, 0.6).passed);
  CHECK_THROWS_AS(nonexistence_growth_check(run, report, 0.4), InputError);
  const auto local = existence_bounds(KernelSpec(0.3, 0.3), DaughterLaw(-1.1, 0.2), 1, 1, 1, {});
  CHECK_THROWS_AS(nonexistence_growth_check(run, local, 0.6), InputError);
}

TEST_CASE("moment identity at k = 1 is the dust correction") {
  RunSpec s = local_spec();
  s.law = DaughterLaw(-1.1, 0.5);
  s.kernel = KernelSpec(0.6, 0.6);
  s.snapshot_times.clear();
  for (int i = 1; i < 40; ++i) s.snapshot_times.push_back(0.0005 * i);
  const RunOutput run = collfrag::run(s);
  const auto r = moment_identity_residual(run, 1.0);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    CHECK(r.production[i] == 0.0);
    CHECK(std::fabs(r.residual[i]) <= 1e-9 * std::fabs(r.dust_correction[i]) + 1e-12);
  }
  CHECK_THROWS_AS(moment_identity_residual(run, 0.05), DivergentMomentError);
}

TEST_CASE("sublinear moments grow for an integrable law") {
  RunSpec s = local_spec();
  s.law = DaughterLaw(0.0, 0.5);
  s.kernel = KernelSpec(0.5, 0.5);
  const RunOutput run = collfrag::run(s);
  const auto r = moment_identity_residual(run, 0.5);
  CHECK(r.derivative.front() > 0.0);
  CHECK(r.production.front() > 0.0);
}

TEST_CASE("shattering verdicts") {
  CHECK_THROWS_AS(shattering_verdict({{1e-2, 10, 0.5}}), InputError);
  CHECK_THROWS_AS(shattering_verdict({{1e-2, 10, 0.5}, {1e-2, 10, 0.5}, {1e-2, 10, 0.5}}),
                  InputError);
  const auto cons = shattering_verdict({{1e-2, 1, 1e-2}, {1e-3, 1, 1e-4}, {1e-4, 1, 1e-6}});
  CHECK(cons.slope == Approx(2.0));
  CHECK_FALSE(cons.shattering);
  CHECK(cons.verdict() == "conservative");
  const auto shat = shattering_verdict({{1e-2, 1, 0.8}, {1e-3, 1, 0.9}, {1e-4, 1, 0.95}});
  CHECK(shat.shattering);

  RunSpec base;
  base.grid = build_grid(1e-2, 10, 36);
  base.kernel = KernelSpec(1, 1);
  base.law = DaughterLaw(0.0, 0.5);
  base.initial.kind = InitialCondition::Kind::monodisperse;
  base.t_end = 0.5;
  const double xmins[] = {1e-2, 1e-3, 1e-4};
  const auto study = shattering_study(base, xmins);
  CHECK_FALSE(study.shattering);
  CHECK(study.rows[2].n_cells == 60);
  CHECK(study.slope == Approx(2.0).epsilon(0.05));

  base.kernel = KernelSpec(0, 0);
  base.law = DaughterLaw(-1.5, 0.6);
  CHECK(shattering_study(base, xmins).shattering);
  const double two[] = {1e-2, 1e-3};
  CHECK_THROWS_AS(shattering_study(base, two), InputError);
}

TEST_CASE("mass budget and monotonicity checks flag violations") {
  RunSpec s = local_spec();
  RunOutput run = collfrag::run(s);
  CHECK(mass_budget_check(run).passed);
  CHECK(tail_monotonicity_check(run, 1.0).passed);
  CHECK(moment_nonincrease_check(run, 1.2).passed);
  run.snapshots.back().contents.back() += 1.0;
  CHECK_FALSE(mass_budget_check(run).passed);
  CHECK_FALSE(tail_monotonicity_check(run, 1.0).passed);
  CHECK_FALSE(moment_nonincrease_check(run, 1.2).passed);
}
