#include "swaa/cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "swaa/cli/expression.hpp"
#include "swaa/error.hpp"
#include "swaa/scenarios.hpp"

namespace swaa::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"bathymetry", {"kind", "p", "depth", "x_extent", "table_path"}},
    {"initial", {"preset", "center", "u0", "eta0", "phi_path"}},
    {"domain", {"x_max"}},
    {"grid", {"dx", "dt", "min_s_nodes"}},
    {"solver",
     {"tol_inner", "tol_outer", "max_inner", "max_outer", "sign_tol", "schedule", "max_windows", "norm_safety",
      "exec"}},
    {"run", {"t_final", "snapshot_stride", "breaking_threshold", "oracle_dx"}},
    {"output", {"dir"}},
};

[[noreturn]] void bad(const std::string& origin, const std::string& what) {
  throw Error(ErrorKind::config, origin + ": " + what);
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string origin) : tree_(tree), origin_(std::move(origin)) {}

  const pt::ptree::value_type* find(const std::string& section, const std::string& key) const {
    const auto s = tree_.find(section);
    if (s == tree_.not_found()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.not_found()) return nullptr;
    return &*k;
  }

  bool has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

  std::string text(const std::string& section, const std::string& key, const std::string& fallback = "") const {
    const auto* v = find(section, key);
    return v ? v->second.data() : fallback;
  }

  double number(const std::string& section, const std::string& key, double fallback, bool required = false) const {
    const auto* v = find(section, key);
    if (v == nullptr) {
      if (required) bad(origin_, "missing required key " + section + "." + key);
      return fallback;
    }
    const std::string& s = v->second.data();
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(d)) bad(origin_, section + "." + key + " = '" + s + "' is not a number");
    return d;
  }

  double positive(const std::string& section, const std::string& key, double fallback, bool required = false) const {
    const double d = number(section, key, fallback, required);
    if (!(d > 0.0)) bad(origin_, section + "." + key + " must be positive");
    return d;
  }

  std::size_t count(const std::string& section, const std::string& key, std::size_t fallback) const {
    const double d = number(section, key, static_cast<double>(fallback));
    if (d < 0.0 || d != std::floor(d)) bad(origin_, section + "." + key + " must be a nonnegative integer");
    return static_cast<std::size_t>(d);
  }

 private:
  const pt::ptree& tree_;
  std::string origin_;
};

std::vector<std::vector<double>> read_table(const std::string& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open table '" + path + "'");
  std::vector<std::vector<double>> cols(columns);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header
      throw Error(ErrorKind::config, path + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    if (row.size() < columns)
      throw Error(ErrorKind::config, path + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                                         " columns");
    for (std::size_t c = 0; c < columns; ++c) cols[c].push_back(row[c]);
  }
  if (cols[0].size() < 2) throw Error(ErrorKind::config, "table '" + path + "' needs at least two rows");
  return cols;
}

std::string resolve(const std::string& source, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.is_absolute() || source.empty() || source.front() == '<') return path;
  return (fs::path(source).parent_path() / p).string();
}

RunConfig from_tree(const pt::ptree& tree, const std::string& origin) {
  for (const auto& [section, body] : tree) {
    const auto s = kSchema.find(section);
    if (s == kSchema.end()) bad(origin, "unknown section [" + section + "]");
    if (!body.data().empty()) bad(origin, "key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      if (!s->second.count(key)) bad(origin, "unknown key " + section + "." + key);
    }
  }
  const Reader r(tree, origin);
  RunConfig c;
  c.source = origin;

  c.has_bathymetry = tree.find("bathymetry") != tree.not_found();
  c.bathymetry_kind = r.text("bathymetry", "kind", "constant");
  if (c.bathymetry_kind != "power-law" && c.bathymetry_kind != "constant" && c.bathymetry_kind != "tabulated")
    bad(origin, "bathymetry.kind must be power-law, constant or tabulated");
  c.p = r.number("bathymetry", "p", 1.0);
  if (c.p < 0.0) bad(origin, "bathymetry.p must be nonnegative");
  c.depth = r.number("bathymetry", "depth", 1.0);
  if (c.depth < 0.0) bad(origin, "bathymetry.depth must be nonnegative");
  c.x_extent = r.has("bathymetry", "x_extent") ? r.positive("bathymetry", "x_extent", 1.0)
                                                : std::numeric_limits<double>::infinity();
  c.table_path = r.text("bathymetry", "table_path");
  if (c.bathymetry_kind == "tabulated" && c.table_path.empty()) bad(origin, "tabulated bathymetry needs table_path");

  c.preset = r.text("initial", "preset");
  c.center = r.number("initial", "center", 5.0);
  c.u0_expr = r.text("initial", "u0");
  c.eta0_expr = r.text("initial", "eta0");
  c.phi_path = r.text("initial", "phi_path");
  const int sources = !c.preset.empty() + (!c.u0_expr.empty() || !c.eta0_expr.empty()) + !c.phi_path.empty();
  if (sources == 0) bad(origin, "missing initial data: give initial.preset, initial.u0/eta0 or initial.phi_path");
  if (sources > 1) bad(origin, "initial data given more than once");
  if ((c.u0_expr.empty()) != (c.eta0_expr.empty())) bad(origin, "initial.u0 and initial.eta0 go together");
  if (!c.preset.empty() && c.has_bathymetry) bad(origin, "a preset fixes the bathymetry; drop [bathymetry]");

  c.grid.x_max = r.positive("domain", "x_max", 0.0, true);
  c.grid.dx = r.positive("grid", "dx", 0.0, true);
  c.grid.dt = r.positive("grid", "dt", 0.0, true);
  c.grid.min_s_nodes = r.count("grid", "min_s_nodes", 8);
  if (c.grid.min_s_nodes < 2) bad(origin, "grid.min_s_nodes must be at least 2");
  if (c.grid.dx > c.grid.x_max) bad(origin, "grid.dx exceeds domain.x_max");

  c.solver.tol_inner = r.positive("solver", "tol_inner", 1e-10);
  c.solver.tol_outer = r.positive("solver", "tol_outer", 1e-9);
  c.solver.max_inner = static_cast<int>(r.count("solver", "max_inner", 60));
  c.solver.max_outer = static_cast<int>(r.count("solver", "max_outer", 40));
  if (c.solver.max_inner < 1 || c.solver.max_outer < 1) bad(origin, "solver iteration caps must be at least 1");
  c.solver.sign_tol = r.positive("solver", "sign_tol", 1e-9);
  const std::string schedule = r.text("solver", "schedule", "harmonic");
  if (schedule == "harmonic") c.schedule = Schedule::harmonic;
  else if (schedule == "rebased") c.schedule = Schedule::rebased;
  else bad(origin, "solver.schedule must be harmonic or rebased");
  c.max_windows = r.count("solver", "max_windows", 100000);
  if (c.max_windows == 0) bad(origin, "solver.max_windows must be positive");
  c.norm_safety = r.number("solver", "norm_safety", 1.0);
  if (c.norm_safety < 1.0) bad(origin, "solver.norm_safety must be at least 1");
  const std::string exec = r.text("solver", "exec", "parallel");
  if (exec == "parallel") c.solver.exec = Exec::parallel;
  else if (exec == "serial") c.solver.exec = Exec::serial;
  else bad(origin, "solver.exec must be serial or parallel");

  c.t_final = r.positive("run", "t_final", 0.0, true);
  c.snapshot_stride = r.count("run", "snapshot_stride", 0);
  c.breaking_threshold = r.positive("run", "breaking_threshold", 100.0);
  c.oracle_dx = r.has("run", "oracle_dx") ? r.positive("run", "oracle_dx", 0.0) : c.grid.dx / 10.0;

  c.output_dir = r.text("output", "dir", "out");
  if (c.output_dir.empty()) bad(origin, "output.dir must not be empty");
  return c;
}

// d/dx by central differences, second-order one-sided near x = 0.
double slope(const std::function<double(double)>& f, double x) {
  constexpr double step = 1e-5;
  if (x >= step) return (f(x + step) - f(x - step)) / (2.0 * step);
  return (-3.0 * f(x) + 4.0 * f(x + step) - f(x + 2.0 * step)) / (2.0 * step);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(origin, "line " + std::to_string(e.line()) + ": " + e.message());
  }
  return from_tree(tree, origin);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

Problem build_problem(const RunConfig& c) {
  Problem p;
  if (!c.preset.empty()) {
    Scenario sc = preset(c.preset, c.center);
    p.profile = sc.profile;
    p.data = sc.data;
    p.burgers_reduction = sc.burgers_reduction;
    return p;
  }
  if (c.bathymetry_kind == "power-law") {
    p.profile = BathymetryProfile::power_law(c.p, c.x_extent);
  } else if (c.bathymetry_kind == "constant") {
    p.profile = BathymetryProfile::constant(c.depth, c.x_extent);
  } else {
    auto cols = read_table(resolve(c.source, c.table_path), 2);
    p.profile = BathymetryProfile::tabulated(std::move(cols[0]), std::move(cols[1]));
  }
  const BathymetryProfile prof = p.profile;

  if (!c.phi_path.empty()) {
    auto cols = read_table(resolve(c.source, c.phi_path), 3);
    const MonotoneCubic fp(cols[0], cols[1]);
    const MonotoneCubic fm(cols[0], cols[2]);
    p.data = from_riemann_data(
        "table", prof, [fp](double x) { return fp(x); }, [fm](double x) { return fm(x); },
        [fp](double x) { return fp.derivative(x); }, [fm](double x) { return fm.derivative(x); });
  } else {
    const Expression u0(c.u0_expr, c.source + ": initial.u0");
    const Expression eta0(c.eta0_expr, c.source + ": initial.eta0");
    std::function<double(double)> fu = [u0, prof](double x) { return u0(x, eval_bathymetry(prof, std::max(x, 0.0)).h); };
    std::function<double(double)> fe = [eta0, prof](double x) {
      return eta0(x, eval_bathymetry(prof, std::max(x, 0.0)).h);
    };
    p.data = from_physical(
        "expression", prof, fu, fe, [fu](double x) { return slope(fu, x); }, [fe](double x) { return slope(fe, x); });
  }
  p.burgers_reduction = prof.flat();
  return p;
}

}  // namespace swaa::cli
