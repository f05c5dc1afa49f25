#pragma once

namespace biotfs {

// Unit conversions used when resolving test-case parameters to SI.
inline constexpr double kMilliDarcyToM2 = 9.869233e-16;
inline constexpr double kCentiPoiseToPaS = 1.0e-3;
inline constexpr double kGPaToPa = 1.0e9;

/// All physical constants of the quasi-static linear poroelastic model,
/// in SI units.
struct MaterialParams {
  double mu = 0.0;           ///< shear modulus [Pa]
  double lambda = 0.0;       ///< first Lame parameter [Pa]
  double alpha = 1.0;        ///< Biot coefficient [-]
  double biot_modulus = 0.0; ///< M [Pa]
  double permeability = 0.0; ///< k [m^2]
  double viscosity = 0.0;    ///< eta [Pa s]
  double rho_fluid = 0.0;    ///< [kg/m^3]
  double rho_bulk = 0.0;     ///< [kg/m^3]
  double gravity_x = 0.0;    ///< [m/s^2]
  double gravity_y = 0.0;    ///< [m/s^2]

  /// Throws std::invalid_argument on nonphysical values
  /// (mu > 0, lambda >= 0, 0 < alpha <= 1, M > 0, k > 0, eta > 0).
  void validate() const;
};

struct LameParams {
  double mu = 0.0;
  double lambda = 0.0;
};

/// mu = E / (2 (1 + nu)), lambda = E nu / ((1 + nu)(1 - 2 nu)).
/// Requires E > 0 and 0 <= nu < 0.5.
LameParams lame_from_young_poisson(double youngs, double poisson);

/// Catalog of stabilization coefficients for the fixed-stress splitting.
enum class TuningVariant {
  OneD,       ///< 2 mu / 1 + lambda (uniaxial bulk modulus)
  TwoD,       ///< 2 mu / 2 + lambda
  ThreeD,     ///< 2 mu / 3 + lambda
  TwoLambda,  ///< 2 lambda
  TwoTimesDD, ///< 2 (2 mu / d + lambda)
  Explicit,   ///< user-supplied value
};

struct TuningSpec {
  TuningVariant variant = TuningVariant::OneD;
  double omega = 1.0;        ///< scale factor applied to the catalog value
  int dimension = 2;         ///< d for TwoTimesDD
  double explicit_kdr = 0.0; ///< [Pa], for Explicit
};

/// Resolve the tuning parameter K_dr [Pa] = omega * catalog(variant).
/// Throws if the resolved value is not positive (possible for TwoLambda
/// with lambda = 0).
double resolve_kdr(const TuningSpec& spec, double mu, double lambda);

} // namespace biotfs
