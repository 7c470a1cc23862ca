#include "collfrag/grid.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "collfrag/errors.hpp"
#include "collfrag/numerics.hpp"

namespace collfrag {

SizeGrid::SizeGrid(double x_min, double x_max, std::size_t n_cells) {
  if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_max))
    throw DomainError("grid requires 0 < x_min < x_max");
  if (n_cells < 2) throw DomainError("grid requires at least two cells");

  log_width_ = std::log(x_max / x_min) / static_cast<double>(n_cells);
  edges_.resize(n_cells + 1);
  edges_[0] = x_min;
  for (std::size_t i = 1; i < n_cells; ++i)
    edges_[i] = x_min * std::exp(static_cast<double>(i) * log_width_);
  edges_[n_cells] = x_max;

  reps_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i)
    reps_[i] = std::sqrt(edges_[i] * edges_[i + 1]);
}

std::size_t SizeGrid::locate(double x) const {
  if (!(x >= edges_.front()) || !(x <= edges_.back())) return size();
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  auto idx = static_cast<std::size_t>(it - edges_.begin());
  return idx == 0 ? 0 : std::min(idx - 1, size() - 1);
}

SizeGrid build_grid(double x_min, double x_max, std::size_t n_cells) {
  return SizeGrid(x_min, x_max, n_cells);
}

State zero_state(const SizeGrid& grid) {
  return State{std::vector<double>(grid.size(), 0.0), 0.0, 0.0};
}

double moment(const SizeGrid& grid, std::span<const double> contents,
              double k) {
  double sum = 0.0;
  const auto reps = grid.reps();
  for (std::size_t i = 0; i < contents.size(); ++i)
    sum += power(reps[i], k) * contents[i];
  return sum;
}

double moment(const SizeGrid& grid, const State& state, double k) {
  return moment(grid, std::span<const double>(state.contents), k);
}

double tail_moment(const SizeGrid& grid, const State& state, double k,
                   double x) {
  double sum = 0.0;
  const auto reps = grid.reps();
  for (std::size_t i = 0; i < state.contents.size(); ++i)
    if (reps[i] >= x) sum += power(reps[i], k) * state.contents[i];
  return sum;
}

std::vector<double> cell_integrals(const SizeGrid& grid,
                                   const std::function<double(double)>& density,
                                   double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // Integrate over the unit interval: some Boost releases compare an
    // unscaled error estimate with a scaled tolerance, which never settles
    // on short cells.
    const double a = grid.edge(i), h = grid.width(i);
    auto mapped = [&](double u) { return h * density(a + h * u); };
    double err = 0.0;
    out[i] = gauss_kronrod<double, 31>::integrate(mapped, 0.0, 1.0, 15, rel_tol,
                                                  &err);
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{}
                                         : field.substr(b, e - b + 1));
  }
  return out;
}

bool parse_number(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

struct TableData {
  bool piecewise_constant = false;
  std::vector<double> lo, hi, value;  // constant pieces
  std::vector<double> x, y;           // linear nodes
};

TableData read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open initial-condition table " + path.string());

  TableData t;
  std::string line;
  std::size_t line_no = 0;
  int col_lo = -1, col_hi = -1, col_density = -1;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    double probe = 0.0;
    if (!header_seen && !fields.empty() && !parse_number(fields[0], probe)) {
      header_seen = true;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] == "edge_lo") col_lo = static_cast<int>(c);
        if (fields[c] == "edge_hi") col_hi = static_cast<int>(c);
        if (fields[c] == "density") col_density = static_cast<int>(c);
      }
      t.piecewise_constant = col_lo >= 0 && col_hi >= 0 && col_density >= 0;
      continue;
    }
    header_seen = true;
    std::vector<double> v(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c)
      if (!parse_number(fields[c], v[c]))
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": not a number: '" + fields[c] + "'");
    if (t.piecewise_constant) {
      const auto need = static_cast<std::size_t>(
          std::max({col_lo, col_hi, col_density}));
      if (v.size() <= need)
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": missing columns");
      t.lo.push_back(v[col_lo]);
      t.hi.push_back(v[col_hi]);
      t.value.push_back(v[col_density]);
    } else {
      if (v.size() < 2)
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": expected two columns (size, density)");
      if (!t.x.empty() && !(v[0] > t.x.back()))
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": sizes must be strictly increasing");
      t.x.push_back(v[0]);
      t.y.push_back(v[1]);
    }
  }
  if (t.piecewise_constant ? t.lo.empty() : t.x.size() < 2)
    throw InputError("initial-condition table " + path.string() +
                     " has too few rows");
  return t;
}

// Exact integral of the table density over (a, b).
double integrate_table(const TableData& t, double a, double b) {
  double sum = 0.0;
  if (t.piecewise_constant) {
    for (std::size_t r = 0; r < t.lo.size(); ++r) {
      if (t.lo[r] == t.hi[r]) continue;
      const double lo = std::max(a, t.lo[r]);
      const double hi = std::min(b, t.hi[r]);
      if (hi > lo) {
        // full overlap keeps the stored content bit-for-bit up to one rounding
        const double len = (lo == t.lo[r] && hi == t.hi[r]) ? t.hi[r] - t.lo[r]
                                                            : hi - lo;
        sum += t.value[r] * len;
      }
    }
    return sum;
  }
  for (std::size_t r = 0; r + 1 < t.x.size(); ++r) {
    const double lo = std::max(a, t.x[r]);
    const double hi = std::min(b, t.x[r + 1]);
    if (!(hi > lo)) continue;
    const double slope = (t.y[r + 1] - t.y[r]) / (t.x[r + 1] - t.x[r]);
    const double y_lo = t.y[r] + slope * (lo - t.x[r]);
    const double y_hi = t.y[r] + slope * (hi - t.x[r]);
    sum += 0.5 * (y_lo + y_hi) * (hi - lo);
  }
  return sum;
}

void normalise_mass(const SizeGrid& grid, State& s, double mass) {
  const double current = moment(grid, s, 1.0);
  if (!(current > 0.0))
    throw InputError("initial condition carries no mass on the grid");
  const double scale = mass / current;
  for (double& c : s.contents) c *= scale;
}

}  // namespace

State initial_state(const SizeGrid& grid, const InitialCondition& init) {
  State s = zero_state(grid);
  switch (init.kind) {
    case InitialCondition::Kind::monodisperse: {
      const std::size_t cell = grid.locate(init.size);
      if (cell >= grid.size())
        throw InputError("monodisperse size lies outside the grid");
      if (!(init.mass > 0.0)) throw InputError("initial mass must be positive");
      s.contents[cell] = init.mass / grid.rep(cell);
      break;
    }
    case InitialCondition::Kind::exponential: {
      if (!(init.mean > 0.0)) throw InputError("exponential mean must be positive");
      if (!(init.mass > 0.0)) throw InputError("initial mass must be positive");
      const double mean = init.mean;
      const double scale = init.mass / (mean * mean);
      s.contents = cell_integrals(
          grid, [&](double x) { return scale * std::exp(-x / mean); });
      normalise_mass(grid, s, init.mass);
      break;
    }
    case InitialCondition::Kind::table: {
      const TableData table = read_table(init.path);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = integrate_table(table, grid.edge(i), grid.edge(i + 1));
        if (v < 0.0) throw InputError("initial-condition table has negative density");
        s.contents[i] = v;
      }
      if (init.mass > 0.0) normalise_mass(grid, s, init.mass);
      break;
    }
  }
  return s;
}

}  // namespace collfrag
