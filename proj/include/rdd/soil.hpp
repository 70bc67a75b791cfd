#pragma once

namespace rdd {

/// Constitutive constants of the transformed van Genuchten-Mualem family.
/// b, c are the exponents of the saturation transform, a is the
/// change-of-variable exponent in the conductivity, m the van Genuchten
/// shape parameter (n = 1/(1-m)).
struct SoilParams {
  double b = 0.0;            // 0 <= b < 1
  double c = 1.0;            // >= 1
  double a = 1.0;            // >= 1
  double m = 0.5;            // 0 < m < 1
  double h_cap = 1.0;        // capillary length, > 0
  double K_s = 1.0;          // saturated conductivity, > 0
  double C_scale = 1.0;      // hydraulic scaling constant, > 0
  double phi_porosity = 1.0; // theta_s - theta_r, > 0

  double n() const { return 1.0 / (1.0 - m); }

  // Leading-order exponent of K_r(theta) * theta^{-a} as theta -> 0.
  // Must be positive for the singularity at dryness to be removable.
  double removability_exponent() const { return 0.5 + 2.0 / m - a; }

  // K(eta) for eta >= u*: (C/phi) K_s K_r(1) with K_r(1) = 1.
  double saturated_conductivity() const { return C_scale / phi_porosity * K_s; }

  /// Throws std::invalid_argument with a descriptive message on violation.
  void validate() const;

  bool operator==(const SoilParams&) const = default;
};

} // namespace rdd
