#include "biotfs/materials.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace biotfs {

void MaterialParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("MaterialParams: " + what);
  };
  if (!(mu > 0.0) || !std::isfinite(mu))
    fail("shear modulus must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail("lambda must be >= 0");
  if (!(alpha > 0.0) || alpha > 1.0)
    fail("Biot coefficient must be in (0, 1]");
  if (!(biot_modulus > 0.0))
    fail("Biot modulus must be positive");
  if (!(permeability > 0.0))
    fail("permeability must be positive");
  if (!(viscosity > 0.0))
    fail("viscosity must be positive");
}

LameParams lame_from_young_poisson(double youngs, double poisson) {
  if (!(youngs > 0.0))
    throw std::invalid_argument("lame_from_young_poisson: E must be positive");
  if (!(poisson >= 0.0) || poisson >= 0.5)
    throw std::invalid_argument(
        "lame_from_young_poisson: nu must satisfy 0 <= nu < 0.5 (lambda is "
        "singular at 0.5), got " +
        std::to_string(poisson));
  LameParams out;
  out.mu = youngs / (2.0 * (1.0 + poisson));
  out.lambda = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  return out;
}

double resolve_kdr(const TuningSpec& spec, double mu, double lambda) {
  if (!(mu > 0.0) || lambda < 0.0)
    throw std::invalid_argument("resolve_kdr: need mu > 0 and lambda >= 0");
  double base = 0.0;
  switch (spec.variant) {
  case TuningVariant::OneD:
    base = 2.0 * mu / 1.0 + lambda;
    break;
  case TuningVariant::TwoD:
    base = 2.0 * mu / 2.0 + lambda;
    break;
  case TuningVariant::ThreeD:
    base = 2.0 * mu / 3.0 + lambda;
    break;
  case TuningVariant::TwoLambda:
    base = 2.0 * lambda;
    break;
  case TuningVariant::TwoTimesDD:
    if (spec.dimension < 1 || spec.dimension > 3)
      throw std::invalid_argument("resolve_kdr: dimension must be 1, 2 or 3");
    base = 2.0 * (2.0 * mu / spec.dimension + lambda);
    break;
  case TuningVariant::Explicit:
    base = spec.explicit_kdr;
    break;
  }
  const double kdr = spec.omega * base;
  if (!(kdr > 0.0))
    throw std::invalid_argument(
        "resolve_kdr: resolved K_dr must be positive, got " +
        std::to_string(kdr));
  return kdr;
}

} // namespace biotfs
