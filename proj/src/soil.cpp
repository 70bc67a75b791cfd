#include "rdd/soil.hpp"

#include <stdexcept>
#include <string>

namespace rdd {

void SoilParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(b >= 0.0 && b < 1.0)) fail("soil: b must lie in [0,1)");
  if (!(c >= 1.0)) fail("soil: c must be >= 1");
  if (!(a >= 1.0)) fail("soil: a must be >= 1");
  if (!(m > 0.0 && m < 1.0)) fail("soil: m must lie in (0,1)");
  if (!(h_cap > 0.0)) fail("soil: h_cap must be > 0");
  if (!(K_s > 0.0)) fail("soil: K_s must be > 0");
  if (!(C_scale > 0.0)) fail("soil: C must be > 0");
  if (!(phi_porosity > 0.0)) fail("soil: porosity must be > 0");
  if (!(removability_exponent() > 0.0))
    fail("soil: removability exponent 1/2 + 2/m - a must be positive "
         "(K_r(theta) theta^{-a} would diverge at dryness)");
}

} // namespace rdd
