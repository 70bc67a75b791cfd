#pragma once

#include <memory>
#include <string>

#include "rdd/constitutive.hpp"
#include "rdd/soil.hpp"
#include "rdd/timestepper.hpp"

namespace rdd {

/// Round-trippable image of a sectioned key-value config file. All keys have
/// documented defaults; unknown keys are rejected with line numbers.
struct ScenarioSpec {
  // [soil]
  std::string soil_model = "vangenuchten"; // or "linear"
  SoilParams soil{0.6, 5.0 / 3.0, 5.0 / 3.0, 0.6, 1.0, 1.0, 1.0, 1.0};
  int table_samples = 1024;

  // [mesh]
  int dim = 1;
  int cells = 100; // 1D
  int nx = 8, ny = 8; // 2D
  double x0 = 0.0, x1 = 1.0;
  double z0 = 0.0, z1 = 1.0;

  // [time]
  double T = 1.0;
  int steps = 50;

  // [bc] expressions; initial over (x, z), dirichlet over (x, z, t),
  // source over (x, z, t, u); `ustar` and `pi` are always in scope.
  std::string initial = "0";
  std::string dirichlet = "0";
  std::string source = "0";

  // [solver] L = 0 means "use L_theta of the model".
  double L = 0.0;
  double atol = 1e-10;
  double rtol = 1e-8;
  int max_iters = 200;
  double lin_tol = 1e-12;
  int lin_max_iters = 0;
  double epsilon = 0.0;

  // [output]
  bool fields = false; // per-step nodal field files

  bool operator==(const ScenarioSpec&) const = default;
};

/// Parses sectioned key-value text. Diagnostics carry the line number;
/// soil invariants (including the removability exponent) are enforced here.
ScenarioSpec parse_config(const std::string& text);

ScenarioSpec load_config(const std::string& path);

/// Emits the spec as config text; parse(emit(spec)) == spec.
std::string emit_config(const ScenarioSpec& spec);

struct BuiltScenario {
  Scenario scenario;
  std::shared_ptr<const ConstitutiveTable> table; // null for the linear model
};

/// Materializes the runnable scenario (builds the constitutive table for the
/// van Genuchten model, compiles the expressions, resolves L = L_theta).
BuiltScenario build_scenario(const ScenarioSpec& spec);

} // namespace rdd
