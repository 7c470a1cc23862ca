#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace collfrag {

// Geometric partition of [x_min, x_max]. Cell i is (edges[i], edges[i+1])
// with representative size sqrt(edges[i] edges[i+1]).
class SizeGrid {
 public:
  SizeGrid(double x_min, double x_max, std::size_t n_cells);

  std::size_t size() const noexcept { return reps_.size(); }
  double x_min() const noexcept { return edges_.front(); }
  double x_max() const noexcept { return edges_.back(); }
  // Constant log-width ln(edges[i+1]/edges[i]).
  double log_width() const noexcept { return log_width_; }

  std::span<const double> edges() const noexcept { return edges_; }
  std::span<const double> reps() const noexcept { return reps_; }
  double edge(std::size_t i) const { return edges_[i]; }
  double rep(std::size_t i) const { return reps_[i]; }
  double width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }

  // Index of the cell whose closed interval contains x (the upper one on an
  // interior edge); size() when x lies outside the grid.
  std::size_t locate(double x) const;

  bool operator==(const SizeGrid&) const = default;

 private:
  std::vector<double> edges_;
  std::vector<double> reps_;
  double log_width_;
};

// DomainError unless 0 < x_min < x_max and n_cells >= 2.
SizeGrid build_grid(double x_min, double x_max, std::size_t n_cells);

// Discrete solution at one time: particle number per cell plus the mass that
// has been fragmented below x_min.
struct State {
  std::vector<double> contents;
  double dust_mass = 0.0;
  double time = 0.0;

  bool operator==(const State&) const = default;
};

State zero_state(const SizeGrid& grid);

// sum_i reps[i]^k contents[i]
double moment(const SizeGrid& grid, const State& state, double k);
double moment(const SizeGrid& grid, std::span<const double> contents, double k);

// Same sum restricted to cells with reps[i] >= x.
double tail_moment(const SizeGrid& grid, const State& state, double k,
                   double x);

struct InitialCondition {
  enum class Kind { monodisperse, exponential, table };

  Kind kind = Kind::exponential;
  double size = 1.0;  // monodisperse particle size
  double mass = 1.0;  // grid mass M_1 after normalisation; <= 0 disables it for tables
  double mean = 1.0;  // exponential mean size
  std::filesystem::path path;  // table file

  bool operator==(const InitialCondition&) const = default;
};

// Per-cell integrals of a density, each to relative accuracy rel_tol by
// adaptive Gauss-Kronrod quadrature.
std::vector<double> cell_integrals(const SizeGrid& grid,
                                   const std::function<double(double)>& density,
                                   double rel_tol = 1e-12);

// Discretises an initial condition:
//  - monodisperse: mass/rep particles in the enclosing cell;
//  - exponential:  density (mass/mean^2) exp(-x/mean), cell-integrated;
//  - table:        two-column (size, density) CSV, linear in between and zero
//                  outside; a snapshot CSV (edge_lo, edge_hi, density columns)
//                  is read as a piecewise-constant density instead.
// Exponential data, and table data with mass > 0, are rescaled so that
// moment(grid, state, 1) equals the requested mass.
State initial_state(const SizeGrid& grid, const InitialCondition& init);

}  // namespace collfrag
