#include "collfrag/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "collfrag/errors.hpp"

namespace collfrag {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

RunSpec SimConfig::run_spec() const {
  RunSpec s;
  s.grid = grid();
  s.kernel = kernel;
  s.law = law;
  s.initial = initial;
  s.t_end = t_end;
  s.snapshot_times = snapshot_times;
  if (snapshots >= 2)
    for (std::size_t i = 0; i < snapshots; ++i)
      s.snapshot_times.push_back(i + 1 == snapshots
                                     ? t_end
                                     : t_end * static_cast<double>(i) /
                                           static_cast<double>(snapshots - 1));
  std::sort(s.snapshot_times.begin(), s.snapshot_times.end());
  s.snapshot_times.erase(
      std::unique(s.snapshot_times.begin(), s.snapshot_times.end()),
      s.snapshot_times.end());
  s.tolerances = tolerances;
  s.workers = workers;
  return s;
}

std::vector<double> SimConfig::moment_orders() const {
  if (!moments.empty()) return moments;
  return {law.k0(), 1.0, 1.0 + law.k0()};
}

std::vector<double> SimConfig::horizon_values() const {
  if (!horizons.empty()) return horizons;
  return {t_end};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries)
      : entries_(std::move(entries)) {}

  std::size_t line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key, line(key), what);
  }

  std::optional<double> real(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return parse_real(key, it->second.value);
  }

  std::optional<long long> integer(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    const auto& v = it->second.value;
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      fail(key, "expected an integer, got '" + v + "'");
    return out;
  }

  std::optional<std::string> text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  std::optional<std::vector<double>> list(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::vector<double> out;
    std::string_view rest = it->second.value;
    if (trim(rest).empty()) return out;
    while (true) {
      const auto comma = rest.find(',');
      out.push_back(parse_real(key, std::string(trim(rest.substr(0, comma)))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

 private:
  double parse_real(const std::string& key, const std::string& v) const {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
      fail(key, "expected a finite real number, got '" + v + "'");
    return out;
  }

  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "kernel.lambda1",  "kernel.lambda2",      "kernel.truncation_n",
      "daughter.nu",     "daughter.k0",         "grid.x_min",
      "grid.x_max",      "grid.n_cells",        "init.kind",
      "init.size",       "init.mass",           "init.mean",
      "init.path",       "time.t_end",          "time.snapshots",
      "time.snapshot_times", "time.rel_tol",    "time.abs_tol",
      "time.method",     "picard.max_iter",     "picard.tol",
      "output.dir",      "output.moments",      "scheme.workers",
      "bounds.horizons"};
  return keys;
}

}  // namespace

SimConfig parse_config_text(std::string_view text,
                            const std::filesystem::path& base_dir) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", line_no, "expected 'section.key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(key, line_no, "unknown key");
    if (entries.count(key))
      throw ConfigError(key, line_no,
                        "duplicate key (first set on line " +
                            std::to_string(entries[key].line) + ")");
    entries[key] = {value, line_no};
  }

  const Reader r(std::move(entries));
  SimConfig c;

  // daughter law
  const double nu = r.real("daughter.nu").value_or(c.law.nu());
  const double k0 = r.real("daughter.k0").value_or(c.law.k0());
  if (!(nu > -2.0 && nu <= 0.0))
    r.fail("daughter.nu", "nu = " + format_double(nu) +
                              " violates the power-law range nu in (-2, 0]");
  const double k0_floor = std::max(0.0, std::fabs(nu) - 1.0);
  if (!(k0 > 0.0 && k0 < 1.0))
    r.fail("daughter.k0", "k0 = " + format_double(k0) + " violates k0 in (0, 1)");
  if (!(k0 > k0_floor))
    r.fail("daughter.k0", "k0 = " + format_double(k0) +
                              " violates k0 > |nu| - 1 = " + format_double(k0_floor));
  c.law = DaughterLaw(nu, k0);

  // kernel
  const double l1 = r.real("kernel.lambda1").value_or(c.kernel.lambda1());
  const double l2 = r.real("kernel.lambda2").value_or(c.kernel.lambda2());
  for (auto [key, v] : {std::pair{"kernel.lambda1", l1}, std::pair{"kernel.lambda2", l2}})
    if (!(v >= -2.0 && v <= 2.0))
      r.fail(key, "exponent " + format_double(v) + " outside [-2, 2]");
  std::optional<int> trunc;
  if (auto n = r.integer("kernel.truncation_n")) {
    if (*n <= 0 || *n > 1000000)
      r.fail("kernel.truncation_n", "truncation index must be a positive integer");
    trunc = static_cast<int>(*n);
  }
  c.kernel = KernelSpec(l1, l2, trunc);

  // grid
  c.x_min = r.real("grid.x_min").value_or(c.x_min);
  c.x_max = r.real("grid.x_max").value_or(c.x_max);
  if (!(c.x_min > 0.0)) r.fail("grid.x_min", "x_min must be positive");
  if (!(c.x_max > c.x_min))
    r.fail(r.has("grid.x_max") ? "grid.x_max" : "grid.x_min",
           "x_max must exceed x_min");
  if (auto n = r.integer("grid.n_cells")) {
    if (*n < 2 || *n > 100000) r.fail("grid.n_cells", "n_cells must be at least 2");
    c.n_cells = static_cast<std::size_t>(*n);
  }

  // initial condition
  if (auto kind = r.text("init.kind")) {
    if (*kind == "monodisperse") c.initial.kind = InitialCondition::Kind::monodisperse;
    else if (*kind == "exponential") c.initial.kind = InitialCondition::Kind::exponential;
    else if (*kind == "table") c.initial.kind = InitialCondition::Kind::table;
    else r.fail("init.kind", "expected monodisperse, exponential or table, got '" + *kind + "'");
  }
  c.initial.size = r.real("init.size").value_or(c.initial.size);
  c.initial.mass = r.real("init.mass").value_or(c.initial.mass);
  c.initial.mean = r.real("init.mean").value_or(c.initial.mean);
  if (auto p = r.text("init.path")) {
    std::filesystem::path path(*p);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    c.initial.path = path.lexically_normal();
  }
  using K = InitialCondition::Kind;
  if (c.initial.kind == K::monodisperse &&
      !(c.initial.size >= c.x_min && c.initial.size <= c.x_max))
    r.fail("init.size", "monodisperse size must lie in [x_min, x_max]");
  if (c.initial.kind != K::table && !(c.initial.mass > 0.0))
    r.fail("init.mass", "initial mass rho must be positive");
  if (c.initial.kind == K::exponential && !(c.initial.mean > 0.0))
    r.fail("init.mean", "mean size must be positive");
  if (c.initial.kind == K::table && c.initial.path.empty())
    r.fail("init.kind", "init.kind = table requires init.path");

  // time controls
  c.t_end = r.real("time.t_end").value_or(c.t_end);
  if (!(c.t_end >= 0.0)) r.fail("time.t_end", "t_end must be non-negative");
  if (auto n = r.integer("time.snapshots")) {
    if (*n < 0 || *n > 1000000) r.fail("time.snapshots", "snapshot count must be non-negative");
    c.snapshots = static_cast<std::size_t>(*n);
  }
  if (auto t = r.list("time.snapshot_times")) {
    for (std::size_t i = 0; i < t->size(); ++i) {
      if ((*t)[i] < 0.0 || (*t)[i] > c.t_end)
        r.fail("time.snapshot_times", "snapshot time " + format_double((*t)[i]) +
                                          " outside [0, t_end]");
      if (i > 0 && !((*t)[i] > (*t)[i - 1]))
        r.fail("time.snapshot_times", "snapshot times must be strictly increasing");
    }
    c.snapshot_times = *t;
  }
  c.tolerances.rel_tol = r.real("time.rel_tol").value_or(c.tolerances.rel_tol);
  c.tolerances.abs_tol = r.real("time.abs_tol").value_or(c.tolerances.abs_tol);
  if (!(c.tolerances.rel_tol > 0.0)) r.fail("time.rel_tol", "rel_tol must be positive");
  if (!(c.tolerances.abs_tol >= 0.0)) r.fail("time.abs_tol", "abs_tol must be non-negative");
  if (auto m = r.text("time.method")) {
    if (*m != "rk23" && *m != "picard")
      r.fail("time.method", "expected rk23 or picard, got '" + *m + "'");
    c.method = *m;
  }
  if (c.method == "picard" && !c.kernel.truncation())
    r.fail("time.method", "picard iteration needs bounded rates: set kernel.truncation_n");
  if (auto n = r.integer("picard.max_iter")) {
    if (*n < 1) r.fail("picard.max_iter", "max_iter must be at least 1");
    c.picard_max_iter = static_cast<std::size_t>(*n);
  }
  c.picard_tol = r.real("picard.tol").value_or(c.picard_tol);
  if (!(c.picard_tol > 0.0)) r.fail("picard.tol", "tol must be positive");

  // output and execution
  if (auto d = r.text("output.dir")) {
    if (d->empty()) r.fail("output.dir", "output directory must not be empty");
    c.output_dir = *d;
  }
  if (auto m = r.list("output.moments")) {
    for (double k : *m)
      if (!(k > std::fabs(nu) - 1.0))
        r.fail("output.moments", "order " + format_double(k) +
                                     " violates k > |nu| - 1 = " +
                                     format_double(std::fabs(nu) - 1.0));
    c.moments = *m;
  }
  if (auto w = r.integer("scheme.workers")) {
    if (*w < 1 || *w > 1024) r.fail("scheme.workers", "workers must be in [1, 1024]");
    c.workers = static_cast<std::size_t>(*w);
  }
  if (auto h = r.list("bounds.horizons")) {
    for (double T : *h)
      if (!(T >= 0.0)) r.fail("bounds.horizons", "horizons must be non-negative");
    c.horizons = *h;
  }
  return c;
}

SimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

std::string emit_config(const SimConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? ", " : "") + format_double(v[i]);
    return s;
  };
  std::ostringstream o;
  o << "kernel.lambda1 = " << format_double(c.kernel.lambda1()) << '\n'
    << "kernel.lambda2 = " << format_double(c.kernel.lambda2()) << '\n';
  if (c.kernel.truncation())
    o << "kernel.truncation_n = " << *c.kernel.truncation() << '\n';
  o << "daughter.nu = " << format_double(c.law.nu()) << '\n'
    << "daughter.k0 = " << format_double(c.law.k0()) << '\n'
    << "grid.x_min = " << format_double(c.x_min) << '\n'
    << "grid.x_max = " << format_double(c.x_max) << '\n'
    << "grid.n_cells = " << c.n_cells << '\n';
  switch (c.initial.kind) {
    case InitialCondition::Kind::monodisperse: o << "init.kind = monodisperse\n"; break;
    case InitialCondition::Kind::exponential: o << "init.kind = exponential\n"; break;
    case InitialCondition::Kind::table: o << "init.kind = table\n"; break;
  }
  o << "init.size = " << format_double(c.initial.size) << '\n'
    << "init.mass = " << format_double(c.initial.mass) << '\n'
    << "init.mean = " << format_double(c.initial.mean) << '\n';
  if (!c.initial.path.empty()) o << "init.path = " << c.initial.path.string() << '\n';
  o << "time.t_end = " << format_double(c.t_end) << '\n'
    << "time.snapshots = " << c.snapshots << '\n';
  if (!c.snapshot_times.empty())
    o << "time.snapshot_times = " << list(c.snapshot_times) << '\n';
  o << "time.rel_tol = " << format_double(c.tolerances.rel_tol) << '\n'
    << "time.abs_tol = " << format_double(c.tolerances.abs_tol) << '\n'
    << "time.method = " << c.method << '\n'
    << "picard.max_iter = " << c.picard_max_iter << '\n'
    << "picard.tol = " << format_double(c.picard_tol) << '\n'
    << "output.dir = " << c.output_dir.string() << '\n';
  if (!c.moments.empty()) o << "output.moments = " << list(c.moments) << '\n';
  o << "scheme.workers = " << c.workers << '\n';
  if (!c.horizons.empty()) o << "bounds.horizons = " << list(c.horizons) << '\n';
  return o.str();
}

}  // namespace collfrag
