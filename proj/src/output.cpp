#include "collfrag/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "collfrag/errors.hpp"

namespace collfrag {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutput simulate(const SimConfig& config) {
  const RunSpec spec = config.run_spec();
  if (config.method != "picard") return run(spec);

  const auto times = resolve_snapshot_times(spec.t_end, spec.snapshot_times);
  const RhsWorkspace ws = precompute(spec.grid, spec.kernel, spec.law);
  RunOutput out;
  out.spec = spec;
  State state = initial_state(spec.grid, spec.initial);
  out.snapshots.push_back(state);
  out.clip_mass.push_back(0.0);
  for (std::size_t s = 1; s < times.size(); ++s) {
    auto r = picard_solve(ws, state, times[s] - times[s - 1],
                          config.picard_max_iter, config.picard_tol);
    state = std::move(r.state);
    state.time = times[s];
    out.accepted_steps += r.iterations;
    out.snapshots.push_back(state);
    out.clip_mass.push_back(0.0);
  }
  return out;
}

BoundsReport bounds_for(const SimConfig& config, const State& initial) {
  const SizeGrid grid = config.grid();
  const double k0 = config.law.k0();
  const double rho = moment(grid, initial, 1.0) + initial.dust_mass;
  const double m_k0 = moment(grid, initial, k0);
  const double m_k0p1 = moment(grid, initial, 1.0 + k0);
  const auto horizons = config.horizon_values();
  BoundsReport report =
      existence_bounds(config.kernel, config.law, rho, m_k0, m_k0p1, horizons);
  if (report.regime == Regime::nonexistence) {
    const auto ks = default_k_grid(config.law);
    report = nonexistence_bound(
        config.kernel, config.law, rho,
        [&](double k) { return moment(grid, initial, k); }, m_k0p1, ks);
  }
  return report;
}

namespace {

// JSON has no infinity; unbounded values are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json series(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

}  // namespace

json to_json(const BoundsReport& report) {
  json j;
  j["regime"] = std::string(to_string(report.regime));
  j["hypotheses"] = json::array();
  for (const auto& h : report.hypotheses)
    j["hypotheses"].push_back({{"statement", h.statement}, {"holds", h.holds}});
  if (report.existence) {
    const auto& b = *report.existence;
    j["existence"] = {
        {"c1", b.c1},
        {"c2", b.c2},
        {"c3", b.c3},
        {"T_k0", finite_or_null(b.T_k0)},
        {"T", series(b.T_values)},
        {"C1", series(b.C1_values)},
        {"c3_amplified", b.c3_amplified},
        {"T_k0_amplified", finite_or_null(b.T_k0_amplified)},
        {"C1_amplified", series(b.C1_amplified)},
        {"M_k0_initial", b.m_k0},
    };
  }
  if (report.nonexistence) {
    const auto& n = *report.nonexistence;
    j["nonexistence"] = {
        {"k", series(n.k_grid)},   {"ell1", series(n.ell1)},
        {"ell2", series(n.ell2)},  {"T1", series(n.T1)},
        {"T1_bound", finite_or_null(n.T1_bound)},
        {"argmin_k", n.argmin_k},
    };
  }
  return j;
}

json to_json(const CheckResult& c) {
  return {{"passed", c.passed},
          {"margin", finite_or_null(c.margin)},
          {"worst_time", c.worst_time},
          {"detail", c.detail}};
}

namespace {

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << body;
  if (!out.flush()) throw InputError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv_numbers(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = std::min(line.find(',', pos), line.size());
      double v = 0.0;
      auto [p, ec] = std::from_chars(line.data() + pos, line.data() + comma, v);
      if (ec != std::errc() || p != line.data() + comma)
        throw InputError("malformed number in " + path.string());
      row.push_back(v);
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

EmittedRun emit_outputs(const RunOutput& run, const SimConfig& config,
                        const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());

  const auto& g = run.grid();
  const auto orders = config.moment_orders();
  EmittedRun out;
  json files = json::array();
  std::string combined;

  auto record = [&](const std::string& name, const std::string& body) {
    write_file(dir / name, body);
    const std::string h = fnv1a_hex(body);
    files.push_back({{"file", name}, {"fnv1a", h}});
    combined += name + ':' + h + '\n';
    out.files.push_back(dir / name);
  };

  {
    std::string csv = "t";
    for (double k : orders) csv += ",M_" + format_double(k);
    csv += ",dust_mass,clip_mass\n";
    for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
      const auto& st = run.snapshots[s];
      csv += format_double(st.time);
      for (double k : orders) csv += ',' + format_double(moment(g, st, k));
      csv += ',' + format_double(st.dust_mass) + ',' +
             format_double(run.clip_mass.at(s)) + '\n';
    }
    record("moments.csv", csv);
  }

  json snaps = json::array();
  for (const auto& st : run.snapshots) {
    std::string csv = "cell_index,edge_lo,edge_hi,rep,content,density\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
      csv += std::to_string(i) + ',' + format_double(g.edge(i)) + ',' +
             format_double(g.edge(i + 1)) + ',' + format_double(g.rep(i)) + ',' +
             format_double(st.contents[i]) + ',' +
             format_double(st.contents[i] / g.width(i)) + '\n';
    }
    const std::string name = "snapshot_" + format_double(st.time) + ".csv";
    record(name, csv);
    snaps.push_back({{"time", st.time}, {"file", name}});
  }

  out.content_hash = fnv1a_hex(combined);
  const BoundsReport report = bounds_for(config, run.snapshots.front());
  json manifest = {
      {"config", emit_config(config)},
      {"regime", std::string(to_string(report.regime))},
      {"bounds", to_json(report)},
      {"moment_orders", orders},
      {"snapshots", snaps},
      {"files", files},
      {"content_hash", out.content_hash},
      {"accepted_steps", run.accepted_steps},
      {"rejected_steps", run.rejected_steps},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + '\n');
  out.files.push_back(dir / "manifest.json");
  return out;
}

LoadedRun load_run(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(read_file(mpath));
  } catch (const json::exception& e) {
    throw InputError("malformed " + mpath.string() + ": " + e.what());
  }
  LoadedRun loaded;
  try {
    loaded.config = parse_config_text(manifest.at("config").get<std::string>());
    loaded.content_hash = manifest.at("content_hash").get<std::string>();
    loaded.run.spec = loaded.config.run_spec();
    const auto moments = read_csv_numbers(dir / "moments.csv");
    const auto& snaps = manifest.at("snapshots");
    if (moments.size() != snaps.size())
      throw InputError("moments.csv and manifest disagree on snapshot count in " +
                       dir.string());
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const auto rows = read_csv_numbers(dir / snaps[s].at("file").get<std::string>());
      State st;
      st.time = snaps[s].at("time").get<double>();
      for (const auto& row : rows) st.contents.push_back(row.at(4));
      if (st.contents.size() != loaded.run.grid().size())
        throw InputError("snapshot size does not match the grid in " + dir.string());
      const auto& m = moments[s];
      st.dust_mass = m.at(m.size() - 2);
      loaded.run.clip_mass.push_back(m.back());
      loaded.run.snapshots.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    throw InputError("malformed " + mpath.string() + ": " + e.what());
  }
  return loaded;
}

}  // namespace collfrag

namespace collfrag {

Verification verify_run(const SimConfig& config, const RunOutput& run) {
  Verification v;
  json checks = json::object();
  auto add = [&](const std::string& name, const CheckResult& c) {
    checks[name] = to_json(c);
    v.passed = v.passed && c.passed;
  };
  const double k0 = config.law.k0();
  add("mass_budget", mass_budget_check(run));
  add("tail_monotonicity_k1", tail_monotonicity_check(run, 1.0));
  add("tail_monotonicity_k" + format_double(1.0 + k0),
      tail_monotonicity_check(run, 1.0 + k0));
  add("superlinear_moment_nonincrease", moment_nonincrease_check(run, 1.0 + k0));

  {
    const auto& s = run.snapshots.front();
    const double rho = moment(run.grid(), s, 1.0) + s.dust_mass;
    CheckResult c;
    const double clipped = run.clip_mass.empty() ? 0.0 : run.clip_mass.back();
    c.margin = 1e-8 * rho - clipped;
    c.passed = c.margin >= 0.0;
    c.worst_time = run.snapshots.back().time;
    c.detail = "clipped mass against 1e-8 rho";
    add("clip_mass", c);
  }

  const BoundsReport report = bounds_for(config, run.snapshots.front());
  if (report.existence) {
    const double t_end = run.snapshots.back().time;
    for (double T : report.existence->T_values) {
      if (T > t_end || T > report.existence->T_k0) continue;
      add("c1_bound_T" + format_double(T), c1_bound_check(run, report, T));
    }
  }
  if (report.regime == Regime::nonexistence)
    add("nonexistence_growth_k" + format_double(k0),
        nonexistence_growth_check(run, report, k0));

  json info = json::object();
  if (report.existence) {
    // the amplified chain is reported next to the stated constant, never gated on
    const double t_end = run.snapshots.back().time;
    for (double T : report.existence->T_values) {
      if (T > t_end || T > report.existence->T_k0_amplified) continue;
      info["c1_amplified_T" + format_double(T)] = to_json(c1_bound_check(run, report, T, true));
    }
  }
  if (run.snapshots.size() >= 3)
    info["moment_identity_k1_relative_residual"] =
        moment_identity_residual(run, 1.0).relative();

  v.report = {{"regime", std::string(to_string(report.regime))},
              {"checks", checks},
              {"info", info},
              {"passed", v.passed}};
  return v;
}

}  // namespace collfrag
