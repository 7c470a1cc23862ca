#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "collfrag/daughter.hpp"
#include "collfrag/grid.hpp"
#include "collfrag/kernel.hpp"

namespace collfrag {

// Precomputed tables for the conservative sectional right-hand side.
//
// A parent in cell j breaks from size reps[j]. The fragment mass it drops
// into cell i <= j (the part of (edges[i], edges[i+1]) below reps[j]) is
// converted to a fragment count n(i|j) = mass / reps[i], and the mass that
// falls below x_min is kept separately in dust_row[j]. By construction
//   sum_i reps[i] n(i|j) + dust_row[j] = reps[j].
class RhsWorkspace {
 public:
  RhsWorkspace(SizeGrid grid, KernelSpec kernel, DaughterLaw law);

  const SizeGrid& grid() const noexcept { return grid_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const DaughterLaw& law() const noexcept { return law_; }
  std::size_t size() const noexcept { return grid_.size(); }

  // n(i|j); zero for i > j.
  double fragments(std::size_t i, std::size_t j) const {
    return i > j ? 0.0 : deposit_[row_offset(i) + (j - i)];
  }
  double dust_row(std::size_t j) const { return dust_row_[j]; }
  double kernel_entry(std::size_t i, std::size_t j) const {
    return kernel_matrix_[i * size() + j];
  }

  // Row i of the fragment table, n(i|j) for j = i..N-1.
  std::span<const double> fragment_row(std::size_t i) const {
    return {deposit_.data() + row_offset(i), size() - i};
  }
  std::span<const double> kernel_row(std::size_t i) const {
    return {kernel_matrix_.data() + i * size(), size()};
  }

 private:
  std::size_t row_offset(std::size_t i) const noexcept {
    return i * (2 * size() - i + 1) / 2;
  }

  SizeGrid grid_;
  KernelSpec kernel_;
  DaughterLaw law_;
  std::vector<double> deposit_;        // packed upper triangle, row-major
  std::vector<double> dust_row_;
  std::vector<double> kernel_matrix_;  // dense, symmetric
};

RhsWorkspace precompute(const SizeGrid& grid, const KernelSpec& kernel,
                        const DaughterLaw& law);

struct Derivative {
  std::vector<double> d_contents;
  double d_dust = 0.0;
};

// With R(j,l) = Phi(reps[j], reps[l]) c[j] c[l]:
//   d c[i]  = 1/2 sum_{j,l} R(j,l) (n(i|j) + n(i|l)) - c[i] sum_l Phi(i,l) c[l]
//   d dust  = 1/2 sum_{j,l} R(j,l) (dust_row[j] + dust_row[l])
// so that sum_i reps[i] d c[i] + d dust = 0 up to rounding.
//
// The result is bitwise independent of `workers`: every output entry is
// reduced by a single thread in a fixed order and the dust sum uses a fixed
// block tree.
void rhs(const RhsWorkspace& ws, std::span<const double> contents,
         std::span<double> d_contents, double& d_dust, std::size_t workers = 1);

Derivative rhs(const RhsWorkspace& ws, const State& state,
               std::size_t workers = 1);

// Collision rate of each cell, c[j] sum_l Phi(j,l) c[l].
std::vector<double> collision_rates(const RhsWorkspace& ws,
                                    std::span<const double> contents,
                                    std::size_t workers = 1);

// sum_i reps[i]^k dc[i] - 1/2 sum_{j,l} Upsilon_k(reps[j], reps[l]) R(j,l):
// the gap between the discrete k-th moment production and the continuum
// weak form. The k-content carried below x_min is part of this gap (for
// k = 1 the gap is exactly -d_dust); subgrid_production() isolates it.
double weak_form_residual(const RhsWorkspace& ws, const State& state, double k);

// Rate at which k-content is carried below x_min by fragments, using the
// exact partial moment of the daughter law on (0, x_min).
double subgrid_production(const RhsWorkspace& ws, const State& state, double k);

}  // namespace collfrag
