#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collfrag/bounds.hpp"
#include "collfrag/config.hpp"
#include "collfrag/diagnostics.hpp"
#include "collfrag/errors.hpp"
#include "collfrag/output.hpp"

namespace {

using namespace collfrag;
using nlohmann::json;

enum Exit { ok = 0, failure = 1, config_error = 2, numerical = 3, unverified = 4 };

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_simulate(const std::string& path, const std::string& out_dir,
                 std::size_t workers) {
  SimConfig config = parse_config(path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (workers > 0) config.workers = workers;
  const RunOutput run = simulate(config);
  const EmittedRun emitted = emit_outputs(run, config, config.output_dir);
  const auto& last = run.snapshots.back();
  print({{"output_dir", config.output_dir.string()},
         {"content_hash", emitted.content_hash},
         {"snapshots", run.snapshots.size()},
         {"accepted_steps", run.accepted_steps},
         {"rejected_steps", run.rejected_steps},
         {"final_time", last.time},
         {"final_dust_mass", last.dust_mass}});
  return ok;
}

int cmd_bounds(const std::string& path, bool regime_only) {
  const SimConfig config = parse_config(path);
  if (regime_only) {
    json j;
    j["regime"] = std::string(to_string(classify_regime(config.kernel, config.law)));
    j["hypotheses"] = json::array();
    for (const auto& h : hypothesis_checklist(config.kernel, config.law))
      j["hypotheses"].push_back({{"statement", h.statement}, {"holds", h.holds}});
    print(j);
    return ok;
  }
  const State initial = initial_state(config.grid(), config.initial);
  json j = to_json(bounds_for(config, initial));
  const auto grid = config.grid();
  j["initial_moments"] = {
      {"rho", moment(grid, initial, 1.0)},
      {"M_k0", moment(grid, initial, config.law.k0())},
      {"M_1+k0", moment(grid, initial, 1.0 + config.law.k0())}};
  j["E_k0_1"] = e_constant(config.law, 1.0);
  j["E_k0"] = e_k0(config.law);
  j["p_max"] = std::isfinite(config.law.p_max()) ? json(config.law.p_max()) : json(nullptr);
  j["p0_max"] = config.law.p0_max();
  print(j);
  return ok;
}

int cmd_verify(const std::string& dir) {
  const LoadedRun loaded = load_run(dir);
  const Verification v = verify_run(loaded.config, loaded.run);
  print(v.report);
  return v.passed ? ok : unverified;
}

int cmd_distance(const std::string& a, const std::string& b) {
  const LoadedRun ra = load_run(a), rb = load_run(b);
  if (!(ra.run.grid() == rb.run.grid()))
    throw InputError("runs use different grids");
  const double k0 = ra.config.law.k0();
  json rows = json::array();
  for (const auto& sa : ra.run.snapshots)
    for (const auto& sb : rb.run.snapshots)
      if (sa.time == sb.time)
        rows.push_back({{"t", sa.time},
                        {"distance", weighted_distance(sa, sb, ra.run.grid(), k0)}});
  print({{"k0", k0}, {"weight", "max(x^k0, x^(1+k0))"}, {"distances", rows}});
  return ok;
}

int cmd_shatter(const std::string& path, const std::vector<double>& xmins) {
  const SimConfig config = parse_config(path);
  const ShatterStudy st = shattering_study(config.run_spec(), xmins);
  json rows = json::array();
  for (const auto& r : st.rows)
    rows.push_back({{"x_min", r.x_min}, {"n_cells", r.n_cells},
                    {"dust_fraction", r.dust_fraction}});
  print({{"t_obs", config.t_end},
         {"rows", rows},
         {"slope_log10", st.slope},
         {"decrease_per_decade", st.decrease_per_decade},
         {"verdict", st.verdict()}});
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-induced fragmentation solver and bound calculator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dir_a, dir_b;
  std::size_t workers = 0;
  std::vector<double> xmins;

  auto* sim = app.add_subcommand("simulate", "integrate a configuration and write outputs");
  sim->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "override output.dir");
  sim->add_option("--workers", workers, "override scheme.workers");

  auto* bnd = app.add_subcommand("bounds", "constants, horizons and hypothesis checklist");
  bnd->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  auto* reg = app.add_subcommand("regime", "classify kernel and daughter parameters");
  reg->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  auto* ver = app.add_subcommand("verify", "run the check battery on a run directory");
  ver->add_option("run-dir", dir_a)->required()->check(CLI::ExistingDirectory);

  auto* dst = app.add_subcommand("distance", "weighted distance between two runs");
  dst->add_option("run-dir-a", dir_a)->required()->check(CLI::ExistingDirectory);
  dst->add_option("run-dir-b", dir_b)->required()->check(CLI::ExistingDirectory);

  auto* sh = app.add_subcommand("shatter-study", "dust fraction under x_min refinement");
  sh->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  sh->add_option("--xmins", xmins, "comma separated x_min values")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*sim) return cmd_simulate(config_path, out_dir, workers);
    if (*bnd) return cmd_bounds(config_path, false);
    if (*reg) return cmd_bounds(config_path, true);
    if (*ver) return cmd_verify(dir_a);
    if (*dst) return cmd_distance(dir_a, dir_b);
    if (*sh) return cmd_shatter(config_path, xmins);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const StiffnessError& e) {
    std::cerr << "numerical failure at t = " << e.time() << ": " << e.what() << '\n';
    return numerical;
  } catch (const ContractionError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}
