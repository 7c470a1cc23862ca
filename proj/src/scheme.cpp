#include "collfrag/scheme.hpp"

#include <algorithm>
#include <utility>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"
#include "parallel.hpp"

namespace collfrag {

RhsWorkspace::RhsWorkspace(SizeGrid grid, KernelSpec kernel, DaughterLaw law)
    : grid_(std::move(grid)), kernel_(std::move(kernel)), law_(std::move(law)) {
  const std::size_t n = size();
  const auto edges = grid_.edges();
  const auto reps = grid_.reps();

  deposit_.assign(n * (n + 1) / 2, 0.0);
  dust_row_.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double parent = reps[j];
    for (std::size_t i = 0; i <= j; ++i) {
      const double hi = std::min(edges[i + 1], parent);
      deposit_[row_offset(i) + (j - i)] =
          cell_mass_deposit(law_, parent, edges[i], hi) / reps[i];
    }
    dust_row_[j] = cell_mass_deposit(law_, parent, 0.0, edges[0]);
  }

  kernel_matrix_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = eval_kernel(kernel_, reps[i], reps[j]);
      kernel_matrix_[i * n + j] = v;
      kernel_matrix_[j * n + i] = v;
    }
}

RhsWorkspace precompute(const SizeGrid& grid, const KernelSpec& kernel,
                        const DaughterLaw& law) {
  return RhsWorkspace(grid, kernel, law);
}

namespace {

void compute_rates(const RhsWorkspace& ws, std::span<const double> c,
                   std::span<double> rates, std::size_t workers) {
  const std::size_t n = ws.size();
  detail::parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      if (c[j] == 0.0) {
        rates[j] = 0.0;
        continue;
      }
      const auto row = ws.kernel_row(j);
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += row[l] * c[l];
      rates[j] = c[j] * s;
    }
  });
}

}  // namespace

std::vector<double> collision_rates(const RhsWorkspace& ws,
                                    std::span<const double> contents,
                                    std::size_t workers) {
  if (contents.size() != ws.size())
    throw InputError("state size does not match the grid");
  std::vector<double> rates(ws.size());
  compute_rates(ws, contents, rates, workers);
  return rates;
}

// The symmetric pair sum collapses to sum_j n(i|j) rate[j], with rate[j] the
// total collision rate of cell j, because R is symmetric.
void rhs(const RhsWorkspace& ws, std::span<const double> contents,
         std::span<double> d_contents, double& d_dust, std::size_t workers) {
  const std::size_t n = ws.size();
  if (contents.size() != n || d_contents.size() != n)
    throw InputError("state size does not match the grid");

  std::vector<double> rates(n);
  compute_rates(ws, contents, rates, workers);

  detail::parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto row = ws.fragment_row(i);
      double gain = 0.0;
      for (std::size_t m = 0; m < row.size(); ++m) gain += row[m] * rates[i + m];
      d_contents[i] = gain - rates[i];
    }
  });

  std::vector<double> dust_terms(n);
  for (std::size_t j = 0; j < n; ++j) dust_terms[j] = ws.dust_row(j) * rates[j];
  d_dust = detail::block_sum(dust_terms);
}

Derivative rhs(const RhsWorkspace& ws, const State& state, std::size_t workers) {
  Derivative d;
  d.d_contents.resize(ws.size());
  rhs(ws, state.contents, d.d_contents, d.d_dust, workers);
  return d;
}

double weak_form_residual(const RhsWorkspace& ws, const State& state, double k) {
  const DaughterLaw& law = ws.law();
  const double q = k + law.nu() + 1.0;
  if (q <= 0.0)
    throw DivergentMomentError("weak form with s^k requires k > |nu| - 1");

  const Derivative d = rhs(ws, state);
  const auto reps = ws.grid().reps();
  double produced = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i)
    produced += power(reps[i], k) * d.d_contents[i];

  // 1/2 sum_{j,l} Upsilon(j,l) R(j,l) = sum_j (1-k)/q reps[j]^k rate[j]
  const auto rates = collision_rates(ws, state.contents);
  double continuum = 0.0;
  for (std::size_t j = 0; j < ws.size(); ++j)
    continuum += upsilon_power(law, k, reps[j], reps[j]) * 0.5 * rates[j];
  return produced - continuum;
}

double subgrid_production(const RhsWorkspace& ws, const State& state, double k) {
  const auto rates = collision_rates(ws, state.contents);
  const auto reps = ws.grid().reps();
  const double x_min = ws.grid().x_min();
  double sum = 0.0;
  for (std::size_t j = 0; j < ws.size(); ++j)
    if (rates[j] != 0.0)
      sum += rates[j] * partial_moment(ws.law(), k, reps[j], 0.0, x_min);
  return sum;
}

}  // namespace collfrag
