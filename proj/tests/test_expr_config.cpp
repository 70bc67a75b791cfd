#include <doctest.h>

#include <cmath>
#include <string>

#include "rdd/config.hpp"
#include "rdd/csv.hpp"
#include "rdd/expr.hpp"

using namespace rdd;

TEST_CASE("expression arithmetic, precedence and right-associative power") {
  const ExprEnv env{};
  CHECK(Expression("1 + 2 * 3").eval(env) == 7.0);
  CHECK(Expression("(1 + 2) * 3").eval(env) == 9.0);
  CHECK(Expression("2 ^ 3 ^ 2").eval(env) == 512.0); // 2^(3^2)
  CHECK(Expression("-2 ^ 2").eval(env) == -4.0);     // power binds tighter than unary minus
  CHECK(Expression("7 / 2 / 2").eval(env) == 1.75);
  CHECK(Expression("1 - 2 - 3").eval(env) == -4.0);
}

TEST_CASE("expression variables and functions") {
  ExprEnv env;
  env.x = 0.5;
  env.z = -1.0;
  env.t = 2.0;
  env.u = 3.0;
  env.ustar = 1.2;
  CHECK(Expression("x + z + t + u + ustar").eval(env) == doctest::Approx(5.7));
  CHECK(Expression("sin(pi * x)").eval(env) == doctest::Approx(1.0));
  CHECK(Expression("cos(0) + exp(0)").eval(env) == doctest::Approx(2.0));
  CHECK(Expression("min(t, u) + max(t, u)").eval(env) == doctest::Approx(5.0));
  CHECK(Expression("sqrt(abs(z)) ").eval(env) == doctest::Approx(1.0));
  CHECK(Expression("max(0, z) * 100").eval(env) == 0.0);
}

TEST_CASE("expression errors carry a column pointer") {
  CHECK_THROWS_AS((void)Expression("1 +"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression("sin 3"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression("foo(1)"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression("(1 + 2"), std::invalid_argument);
  CHECK_THROWS_AS((void)Expression("min(1)"), std::invalid_argument);
  try {
    (void)Expression("2 * %");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}

TEST_CASE("minimal config yields documented defaults") {
  const ScenarioSpec spec = parse_config("");
  CHECK(spec.soil_model == "vangenuchten");
  CHECK(spec.atol == 1e-10);
  CHECK(spec.L == 0.0); // auto: resolved to L_theta when built
  const BuiltScenario built = build_scenario(spec);
  CHECK(built.scenario.solver.L == built.scenario.model.L_theta);
  CHECK(built.scenario.solver.atol == 1e-10);
  CHECK(built.table != nullptr);
}

TEST_CASE("config rejections: unknown keys, bad values, invariants") {
  CHECK_THROWS_WITH_AS((void)parse_config("[soil]\nbb = 1\n"),
                       "config line 2: unknown key \"bb\" in section [soil]",
                       std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config("[bogus]\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config("b = 1\n"), std::invalid_argument); // outside section
  CHECK_THROWS_AS((void)parse_config("[time]\nsteps = 1.5\n"), std::invalid_argument);
  try {
    (void)parse_config("[soil]\nb = 1.5\n");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("b must lie in [0,1)") != std::string::npos);
  }
  try {
    (void)parse_config("[soil]\na = 4.0\n"); // removability: 1/2 + 2/m - a < 0
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("1/2 + 2/m - a") != std::string::npos);
  }
  CHECK_THROWS_AS((void)parse_config("[bc]\nsource = 1 +\n"), std::invalid_argument);
}

TEST_CASE("config round-trips through emit and parse") {
  ScenarioSpec spec; // defaults
  CHECK(parse_config(emit_config(spec)) == spec);
  spec.soil.b = 0.25;
  spec.soil.m = 0.5;
  spec.dim = 2;
  spec.nx = 3;
  spec.ny = 5;
  spec.T = 0.125;
  spec.steps = 17;
  spec.initial = "max(0, z - 0.5) * ustar";
  spec.dirichlet = "ustar * z";
  spec.source = "sin(pi * x) * exp(-t)";
  spec.L = 2.0;
  spec.lin_tol = 1e-13;
  spec.fields = true;
  CHECK(parse_config(emit_config(spec)) == spec);
}

TEST_CASE("built scenario wires expressions and mesh together") {
  ScenarioSpec spec;
  spec.dirichlet = "ustar * z";
  spec.source = "2 * u + t";
  spec.cells = 10;
  const BuiltScenario built = build_scenario(spec);
  const double us = built.scenario.model.u_star;
  CHECK(us > 1.0);
  CHECK(built.scenario.dirichlet(0.0, 1.0, 0.0) == doctest::Approx(us));
  CHECK(built.scenario.source(0.0, 0.0, 0.5, 2.0) == doctest::Approx(4.5));
  CHECK(built.scenario.mesh.n_nodes() == 11);
}

TEST_CASE("csv: formatting, empty tables, ragged rejection") {
  CHECK(format_value(1.0) == "1");
  CHECK(format_value(0.1) == "0.10000000000000001"); // 17 significant digits
  CsvTable t;
  t.header = {"a", "b"};
  CHECK(to_csv(t) == "a,b\n");
  t.add_row({1.0, 2.5});
  CHECK(to_csv(t) == "a,b\n1,2.5\n");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  t.rows.push_back({1.0});
  CHECK_THROWS_AS((void)to_csv(t), std::invalid_argument);
}

TEST_CASE("csv emission is deterministic") {
  CsvTable t;
  t.header = {"x", "y"};
  for (int i = 0; i < 50; ++i)
    t.add_row({std::sin(0.1 * i), std::exp(-0.3 * i)});
  CHECK(to_csv(t) == to_csv(t));
}
