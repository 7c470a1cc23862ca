#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "collfrag/daughter.hpp"
#include "collfrag/grid.hpp"
#include "collfrag/integrate.hpp"
#include "collfrag/kernel.hpp"

namespace collfrag {

// Fully validated simulation settings. Files use one `section.key = value`
// per line; `#` starts a comment, lists are comma separated:
//
//   kernel.lambda1 = 0.6        kernel.lambda2 = 0.6   kernel.truncation_n = 4
//   daughter.nu = -1.2          daughter.k0 = 0.5
//   grid.x_min = 1e-4           grid.x_max = 10        grid.n_cells = 128
//   init.kind = exponential     init.mass = 1          init.mean = 1
//   init.size = 1               init.path = data.csv
//   time.t_end = 1              time.snapshots = 11    time.snapshot_times = 0.1, 0.5
//   time.rel_tol = 1e-8         time.abs_tol = 1e-14   time.method = rk23 | picard
//   picard.max_iter = 50        picard.tol = 1e-10
//   output.dir = out            output.moments = 0.5, 1, 1.5
//   scheme.workers = 1          bounds.horizons = 0.25, 0.5
struct SimConfig {
  KernelSpec kernel{1.0, 1.0};
  DaughterLaw law{-0.5, 0.5};
  double x_min = 1e-4;
  double x_max = 10.0;
  std::size_t n_cells = 128;
  InitialCondition initial;
  double t_end = 1.0;
  // evenly spaced output times including both ends; added to snapshot_times
  std::size_t snapshots = 11;
  std::vector<double> snapshot_times;
  Tolerances tolerances;
  std::string method = "rk23";
  std::size_t picard_max_iter = 50;
  double picard_tol = 1e-10;
  std::filesystem::path output_dir = "out";
  // empty: k0, 1 and 1 + k0
  std::vector<double> moments;
  std::size_t workers = 1;
  // horizons T at which C1(T) is tabulated; empty: t_end
  std::vector<double> horizons;

  bool operator==(const SimConfig&) const = default;

  SizeGrid grid() const { return {x_min, x_max, n_cells}; }
  RunSpec run_spec() const;
  std::vector<double> moment_orders() const;
  std::vector<double> horizon_values() const;
};

// ConfigError carrying key and line for unknown keys, malformed values and
// violated invariants. Relative init.path values are resolved against
// base_dir.
SimConfig parse_config_text(std::string_view text,
                            const std::filesystem::path& base_dir = {});
SimConfig parse_config(const std::filesystem::path& path);

// Canonical text form; parse_config_text(emit_config(c)) == c.
std::string emit_config(const SimConfig& config);

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace collfrag
