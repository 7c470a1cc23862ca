#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "collfrag/config.hpp"
#include "collfrag/errors.hpp"
#include "collfrag/output.hpp"

using namespace collfrag;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

std::string error_of(const std::string& text) {
  try {
    (void)parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("collfrag_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const SimConfig c = parse_config_text("# nothing but a comment\n\n");
  CHECK(c == SimConfig{});
  CHECK(c.moment_orders() == std::vector<double>{0.5, 1.0, 1.5});
  const SimConfig d = parse_config_text("daughter.nu = -1.2 # trailing\n  daughter.k0=0.5\n");
  CHECK(d.law.nu() == -1.2);
  CHECK(d.law.k0() == 0.5);
}

TEST_CASE("invariant violations cite the hypothesis") {
  const auto nu = error_of("daughter.nu = -2.5\n");
  CHECK(nu.find("daughter.nu") != std::string::npos);
  CHECK(nu.find("nu in (-2, 0]") != std::string::npos);
  CHECK(nu.find("line 1") != std::string::npos);

  const auto k0 = error_of("daughter.nu = -1.5\n# c\ndaughter.k0 = 0.4\n");
  CHECK(k0.find("line 3") != std::string::npos);
  CHECK(k0.find("k0 > |nu| - 1") != std::string::npos);

  CHECK(error_of("grid.bogus = 1\n").find("unknown key") != std::string::npos);
  CHECK(error_of("grid.n_cells = 1.5\n").find("integer") != std::string::npos);
  CHECK(error_of("grid.x_min = abc\n").find("real number") != std::string::npos);
  CHECK(error_of("grid.x_min = 20\n").find("x_max must exceed x_min") != std::string::npos);
  CHECK(error_of("no equals sign\n").find("line 1") != std::string::npos);
  CHECK(error_of("time.t_end = 1\ntime.t_end = 2\n").find("duplicate") != std::string::npos);
  CHECK(error_of("daughter.nu = -1.5\ndaughter.k0 = 0.6\noutput.moments = 0.3\n")
            .find("k > |nu| - 1") != std::string::npos);
  CHECK(error_of("time.snapshot_times = 0.5, 0.2\n").find("increasing") != std::string::npos);
  CHECK(error_of("time.method = picard\n").find("truncation_n") != std::string::npos);
  CHECK(error_of("init.kind = table\n").find("init.path") != std::string::npos);
  CHECK(error_of("kernel.lambda1 = 3\n").find("[-2, 2]") != std::string::npos);

  try {
    (void)parse_config_text("x = 1\nkernel.lambda2 = 0.5\ngrid.n_cells = 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "x");
    CHECK(e.line() == 1);
  }
}

TEST_CASE("config round trip") {
  const std::string text =
      "kernel.lambda1 = 0.9\nkernel.lambda2 = 0.2\nkernel.truncation_n = 4\n"
      "daughter.nu = -1.2\ndaughter.k0 = 0.5\ngrid.n_cells = 33\n"
      "init.kind = monodisperse\ninit.size = 0.7\ntime.t_end = 0.3\n"
      "time.snapshot_times = 0.1, 0.2\ntime.method = picard\noutput.moments = 0.25, 2\n"
      "bounds.horizons = 0.1\nscheme.workers = 3\n";
  const SimConfig once = parse_config_text(text);
  CHECK(once.kernel.lambda1() == 0.2);
  const SimConfig twice = parse_config_text(emit_config(once));
  CHECK(twice == once);
  CHECK(emit_config(twice) == emit_config(once));
}

TEST_CASE("relative table paths resolve against the config file") {
  const fs::path dir = scratch("relpath");
  fs::create_directories(dir / "sub");
  {
    std::ofstream(dir / "sub" / "run.cfg") << "init.kind = table\ninit.path = data.csv\n";
  }
  const SimConfig c = parse_config(dir / "sub" / "run.cfg");
  CHECK(c.initial.path == (dir / "sub" / "data.csv").lexically_normal());
  CHECK_THROWS_AS(parse_config(dir / "absent.cfg"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("outputs for an empty run") {
  SimConfig c;
  c.t_end = 0.0;
  c.n_cells = 16;
  const fs::path dir = scratch("empty");
  const RunOutput run = simulate(c);
  const auto emitted = emit_outputs(run, c, dir);
  CHECK(emitted.files.size() == 3);
  CHECK(fs::exists(dir / "snapshot_0.csv"));
  std::ifstream in(dir / "moments.csv");
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "t,M_0.5,M_1,M_1.5,dust_mass,clip_mass");
  CHECK_FALSE(std::getline(in, extra));
  fs::remove_all(dir);
}

TEST_CASE("snapshot files, hashes and reload") {
  SimConfig c;
  c.kernel = KernelSpec(0.6, 0.6);
  c.law = DaughterLaw(-1.2, 0.5);
  c.n_cells = 40;
  c.t_end = 0.2;
  c.snapshots = 3;
  const fs::path a = scratch("hash_a"), b = scratch("hash_b");
  const RunOutput run = simulate(c);
  const auto ea = emit_outputs(run, c, a);
  const auto eb = emit_outputs(simulate(c), c, b);
  CHECK(ea.content_hash == eb.content_hash);
  CHECK(ea.content_hash.size() == 16);

  std::ifstream in(a / "snapshot_0.1.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "cell_index,edge_lo,edge_hi,rep,content,density");

  const LoadedRun back = load_run(a);
  CHECK(back.config == c);
  CHECK(back.content_hash == ea.content_hash);
  REQUIRE(back.run.snapshots.size() == run.snapshots.size());
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) CHECK(back.run.snapshots[s] == run.snapshots[s]);

  const Verification v = verify_run(back.config, back.run);
  CHECK(v.passed);
  CHECK(v.report["regime"] == "GlobalExistence");

  // a snapshot fed back as table data reproduces the moments
  SimConfig t = c;
  t.initial.kind = InitialCondition::Kind::table;
  t.initial.path = a / "snapshot_0.2.csv";
  t.initial.mass = 0.0;
  const State reloaded = initial_state(t.grid(), t.initial);
  for (double k : {0.5, 1.0, 1.5})
    CHECK(moment(t.grid(), reloaded, k) ==
          Approx(moment(c.grid(), run.snapshots.back(), k)).epsilon(1e-10));

  CHECK_THROWS_AS(load_run(scratch("nothing")), InputError);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("picard method through the config") {
  SimConfig c = parse_config_text(
      "kernel.lambda1 = 0.6\nkernel.lambda2 = 0.6\nkernel.truncation_n = 4\n"
      "daughter.nu = -1.2\ndaughter.k0 = 0.5\ngrid.x_min = 0.25\ngrid.x_max = 4\n"
      "grid.n_cells = 32\ntime.t_end = 0.05\ntime.snapshots = 3\ntime.method = picard\n");
  const RunOutput p = simulate(c);
  c.method = "rk23";
  c.tolerances.rel_tol = 1e-12;
  const RunOutput r = simulate(c);
  REQUIRE(p.snapshots.size() == 3);
  CHECK(weighted_distance(p.snapshots.back(), r.snapshots.back(), c.grid(), 0.5) < 1e-6);
}

TEST_CASE("bounds report JSON") {
  SimConfig c;
  c.kernel = KernelSpec(0, 0);
  c.law = DaughterLaw(-1.5, 0.6);
  const State init = initial_state(c.grid(), c.initial);
  const auto j = to_json(bounds_for(c, init));
  CHECK(j["regime"] == "NonExistence");
  CHECK(j["nonexistence"]["T1"].size() == 64);
  CHECK(j["hypotheses"].size() > 5);

  SimConfig g;
  const auto jg = to_json(bounds_for(g, initial_state(g.grid(), g.initial)));
  CHECK(jg["existence"]["T_k0"].is_null());
}
