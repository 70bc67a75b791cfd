#include "rdd/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rdd/expr.hpp"

namespace rdd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    fail_at(line, "expected a number, got \"" + v + "\"");
  }
  if (used != v.size()) fail_at(line, "trailing characters in number \"" + v + "\"");
  return x;
}

int parse_int(const std::string& v, int line) {
  const double x = parse_double(v, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) fail_at(line, "expected an integer, got \"" + v + "\"");
  return i;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail_at(line, "expected true/false, got \"" + v + "\"");
}

} // namespace

ScenarioSpec parse_config(const std::string& text) {
  ScenarioSpec spec;
  using Setter = std::function<void(ScenarioSpec&, const std::string&, int)>;
  auto num = [](double ScenarioSpec::* f) {
    return Setter([f](ScenarioSpec& s, const std::string& v, int ln) { s.*f = parse_double(v, ln); });
  };
  auto integer = [](int ScenarioSpec::* f) {
    return Setter([f](ScenarioSpec& s, const std::string& v, int ln) { s.*f = parse_int(v, ln); });
  };
  auto str = [](std::string ScenarioSpec::* f) {
    return Setter([f](ScenarioSpec& s, const std::string& v, int) { s.*f = v; });
  };
  auto soil_num = [](double SoilParams::* f) {
    return Setter([f](ScenarioSpec& s, const std::string& v, int ln) { s.soil.*f = parse_double(v, ln); });
  };

  const std::map<std::string, Setter> schema = {
      {"soil.model", str(&ScenarioSpec::soil_model)},
      {"soil.b", soil_num(&SoilParams::b)},
      {"soil.c", soil_num(&SoilParams::c)},
      {"soil.a", soil_num(&SoilParams::a)},
      {"soil.m", soil_num(&SoilParams::m)},
      {"soil.h_cap", soil_num(&SoilParams::h_cap)},
      {"soil.K_s", soil_num(&SoilParams::K_s)},
      {"soil.C", soil_num(&SoilParams::C_scale)},
      {"soil.porosity", soil_num(&SoilParams::phi_porosity)},
      {"soil.samples", integer(&ScenarioSpec::table_samples)},
      {"mesh.dim", integer(&ScenarioSpec::dim)},
      {"mesh.cells", integer(&ScenarioSpec::cells)},
      {"mesh.nx", integer(&ScenarioSpec::nx)},
      {"mesh.ny", integer(&ScenarioSpec::ny)},
      {"mesh.x0", num(&ScenarioSpec::x0)},
      {"mesh.x1", num(&ScenarioSpec::x1)},
      {"mesh.z0", num(&ScenarioSpec::z0)},
      {"mesh.z1", num(&ScenarioSpec::z1)},
      {"time.T", num(&ScenarioSpec::T)},
      {"time.steps", integer(&ScenarioSpec::steps)},
      {"bc.initial", str(&ScenarioSpec::initial)},
      {"bc.dirichlet", str(&ScenarioSpec::dirichlet)},
      {"bc.source", str(&ScenarioSpec::source)},
      {"solver.L", Setter([](ScenarioSpec& s, const std::string& v, int ln) {
         s.L = (v == "auto") ? 0.0 : parse_double(v, ln);
       })},
      {"solver.atol", num(&ScenarioSpec::atol)},
      {"solver.rtol", num(&ScenarioSpec::rtol)},
      {"solver.max_iters", integer(&ScenarioSpec::max_iters)},
      {"solver.lin_tol", num(&ScenarioSpec::lin_tol)},
      {"solver.lin_max_iters", integer(&ScenarioSpec::lin_max_iters)},
      {"solver.epsilon", num(&ScenarioSpec::epsilon)},
      {"output.fields", Setter([](ScenarioSpec& s, const std::string& v, int ln) {
         s.fields = parse_bool(v, ln);
       })},
  };

  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "soil" && section != "mesh" && section != "time" && section != "bc" &&
          section != "solver" && section != "output")
        fail_at(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail_at(line, "key \"" + key + "\" outside any section");
    const auto it = schema.find(section + "." + key);
    if (it == schema.end()) fail_at(line, "unknown key \"" + key + "\" in section [" + section + "]");
    it->second(spec, value, line);
  }

  // Validate eagerly so a bad file is rejected at parse time, not first use.
  if (spec.soil_model != "vangenuchten" && spec.soil_model != "linear")
    throw std::invalid_argument("config: soil model must be vangenuchten or linear, got \"" +
                                spec.soil_model + "\"");
  if (spec.soil_model == "vangenuchten") spec.soil.validate();
  if (spec.dim != 1 && spec.dim != 2)
    throw std::invalid_argument("config: mesh dim must be 1 or 2");
  if (spec.cells < 1 || spec.nx < 1 || spec.ny < 1)
    throw std::invalid_argument("config: mesh must have at least one cell per direction");
  if (!(spec.T > 0) || spec.steps < 1)
    throw std::invalid_argument("config: need T > 0 and steps >= 1");
  if (spec.L < 0) throw std::invalid_argument("config: solver L must be positive or auto");
  if (spec.epsilon < 0) throw std::invalid_argument("config: epsilon must be >= 0");
  if (spec.table_samples < 64) throw std::invalid_argument("config: soil samples must be >= 64");
  for (const auto* e : {&spec.initial, &spec.dirichlet, &spec.source})
    (void)Expression(*e); // surfaces expression syntax errors here
  return spec;
}

ScenarioSpec load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const ScenarioSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "[soil]\n"
      << "model = " << spec.soil_model << "\n"
      << "b = " << spec.soil.b << "\n"
      << "c = " << spec.soil.c << "\n"
      << "a = " << spec.soil.a << "\n"
      << "m = " << spec.soil.m << "\n"
      << "h_cap = " << spec.soil.h_cap << "\n"
      << "K_s = " << spec.soil.K_s << "\n"
      << "C = " << spec.soil.C_scale << "\n"
      << "porosity = " << spec.soil.phi_porosity << "\n"
      << "samples = " << spec.table_samples << "\n\n"
      << "[mesh]\n"
      << "dim = " << spec.dim << "\n"
      << "cells = " << spec.cells << "\n"
      << "nx = " << spec.nx << "\n"
      << "ny = " << spec.ny << "\n"
      << "x0 = " << spec.x0 << "\n"
      << "x1 = " << spec.x1 << "\n"
      << "z0 = " << spec.z0 << "\n"
      << "z1 = " << spec.z1 << "\n\n"
      << "[time]\n"
      << "T = " << spec.T << "\n"
      << "steps = " << spec.steps << "\n\n"
      << "[bc]\n"
      << "initial = " << spec.initial << "\n"
      << "dirichlet = " << spec.dirichlet << "\n"
      << "source = " << spec.source << "\n\n"
      << "[solver]\n";
  if (spec.L == 0.0)
    out << "L = auto\n";
  else
    out << "L = " << spec.L << "\n";
  out << "atol = " << spec.atol << "\n"
      << "rtol = " << spec.rtol << "\n"
      << "max_iters = " << spec.max_iters << "\n"
      << "lin_tol = " << spec.lin_tol << "\n"
      << "lin_max_iters = " << spec.lin_max_iters << "\n"
      << "epsilon = " << spec.epsilon << "\n\n"
      << "[output]\n"
      << "fields = " << (spec.fields ? "true" : "false") << "\n";
  return out.str();
}

BuiltScenario build_scenario(const ScenarioSpec& spec) {
  BuiltScenario built;
  Scenario& sc = built.scenario;

  if (spec.soil_model == "vangenuchten") {
    built.table = std::make_shared<const ConstitutiveTable>(
        build_table(spec.soil, spec.table_samples));
    sc.model = make_table_model(built.table);
  } else {
    sc.model = make_linear_model();
  }
  const double ustar = sc.model.u_star;

  sc.mesh = spec.dim == 1 ? uniform_interval_mesh(spec.cells, spec.z0, spec.z1)
                          : structured_triangle_mesh(spec.nx, spec.ny, spec.x0, spec.x1,
                                                     spec.z0, spec.z1);
  sc.T = spec.T;
  sc.N = spec.steps;

  auto initial = std::make_shared<Expression>(spec.initial);
  auto dirichlet = std::make_shared<Expression>(spec.dirichlet);
  auto source = std::make_shared<Expression>(spec.source);
  sc.initial = [initial, ustar](double x, double z) {
    return initial->eval({x, z, 0, 0, ustar});
  };
  sc.dirichlet = [dirichlet, ustar](double x, double z, double t) {
    return dirichlet->eval({x, z, t, 0, ustar});
  };
  sc.source = [source, ustar](double x, double z, double t, double u) {
    return source->eval({x, z, t, u, ustar});
  };

  sc.solver.L = spec.L > 0 ? spec.L : sc.model.L_theta;
  sc.solver.atol = spec.atol;
  sc.solver.rtol = spec.rtol;
  sc.solver.max_iters = spec.max_iters;
  sc.solver.lin_tol = spec.lin_tol;
  sc.solver.lin_max_iters = spec.lin_max_iters;
  sc.epsilon = spec.epsilon;
  sc.solver.check(sc.model.L_theta); // throws for L <= L_theta / 2
  return built;
}

} // namespace rdd
