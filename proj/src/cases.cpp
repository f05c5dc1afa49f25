#include "biotfs/cases.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace biotfs {

namespace {

std::string fmt_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

} // namespace

CaseId parse_case_id(const std::string& s) {
  if (s == "1a")
    return CaseId::T1a;
  if (s == "1b")
    return CaseId::T1b;
  if (s == "1c")
    return CaseId::T1c;
  if (s == "2")
    return CaseId::T2;
  throw std::invalid_argument("unknown test case '" + s +
                              "' (valid ids: 1a, 1b, 1c, 2)");
}

const char* case_name(CaseId id) {
  switch (id) {
  case CaseId::T1a:
    return "1a";
  case CaseId::T1b:
    return "1b";
  case CaseId::T1c:
    return "1c";
  case CaseId::T2:
    return "2";
  }
  return "?";
}

std::vector<double> default_variations(CaseId id) {
  if (id == CaseId::T1c)
    return {0.1, 1.0, 10.0, 100.0, 1000.0}; // k [mD]
  return {0.01, 0.1, 0.2, 0.3, 0.4, 0.49};  // nu
}

CaseSpec make_case(CaseId id, const CaseOverrides& overrides) {
  CaseSpec cs;
  cs.id = id;
  cs.name = case_name(id);

  double youngs = 0.0, nu = 0.2, k_mD = 100.0;
  switch (id) {
  case CaseId::T1a:
    youngs = 100.0 * kGPaToPa;
    cs.h_max = 10.0 * kGPaToPa;
    cs.axis = VariationAxis::Poisson;
    cs.bc_set = BcSet::CutClamped;
    cs.sweep_base = TuningVariant::OneD;
    break;
  case CaseId::T1b:
    youngs = 1.0 * kGPaToPa;
    cs.h_max = 0.1 * kGPaToPa;
    cs.axis = VariationAxis::Poisson;
    cs.bc_set = BcSet::CutClamped;
    cs.sweep_base = TuningVariant::OneD;
    break;
  case CaseId::T1c:
    youngs = 1.0 * kGPaToPa;
    cs.h_max = 0.1 * kGPaToPa;
    nu = 0.01;
    cs.axis = VariationAxis::Permeability;
    cs.bc_set = BcSet::CutClamped;
    cs.sweep_base = TuningVariant::OneD;
    break;
  case CaseId::T2:
    youngs = 100.0 * kGPaToPa;
    cs.h_max = 10.0 * kGPaToPa;
    cs.axis = VariationAxis::Poisson;
    cs.bc_set = BcSet::CutTraction;
    cs.sweep_base = TuningVariant::TwoD;
    break;
  }

  if (overrides.poisson) {
    if (cs.axis != VariationAxis::Poisson)
      throw std::invalid_argument("make_case: case " + cs.name +
                                  " varies permeability, not Poisson's ratio");
    nu = *overrides.poisson;
  }
  if (overrides.permeability_mD) {
    if (cs.axis != VariationAxis::Permeability)
      throw std::invalid_argument("make_case: case " + cs.name +
                                  " varies Poisson's ratio, not permeability");
    k_mD = *overrides.permeability_mD;
  }
  if (!(k_mD > 0.0))
    throw std::invalid_argument("make_case: permeability must be positive");

  const LameParams lame = lame_from_young_poisson(youngs, nu);
  cs.youngs = youngs;
  cs.poisson = nu;
  cs.params.mu = lame.mu;
  cs.params.lambda = lame.lambda;
  cs.params.alpha = 0.9;
  cs.params.biot_modulus = 100.0 * kGPaToPa;
  cs.params.permeability = k_mD * kMilliDarcyToM2;
  cs.params.viscosity = 1.0 * kCentiPoiseToPaS;
  // Densities are inert placeholders: gravity is zero in every case.
  cs.params.rho_fluid = 1000.0;
  cs.params.rho_bulk = 2000.0;
  cs.params.gravity_x = 0.0;
  cs.params.gravity_y = 0.0;
  cs.params.validate();

  if (cs.axis == VariationAxis::Poisson) {
    cs.variation_value = nu;
    cs.variation_label = "nu=" + fmt_g6(nu);
  } else {
    cs.variation_value = k_mD;
    cs.variation_label = "k=" + fmt_g6(k_mD) + "mD";
  }
  return cs;
}

BcTable bc_table(const CaseSpec& cs) {
  const bool clamped = cs.bc_set == BcSet::CutClamped;
  BcTable t;
  // Top: time-dependent traction, drained (p_D = 0 acts naturally).
  t[BoundaryTag::Top] = {false, false, /*no_flow=*/false, 0.0};
  // Rollers: zero normal displacement, homogeneous tangential traction.
  t[BoundaryTag::Left] = {true, false, true, 0.0};
  t[BoundaryTag::Bottom] = {false, true, true, 0.0};
  // Homogeneous traction.
  t[BoundaryTag::LowerRight] = {false, false, true, 0.0};
  // The cut: rollers in cases 1, homogeneous traction in case 2.
  t[BoundaryTag::CutVertical] = {clamped, false, true, 0.0};
  t[BoundaryTag::CutHorizontal] = {false, clamped, true, 0.0};
  return t;
}

DofLayout build_dof_layout(const Mesh& mesh, const CaseSpec& cs) {
  return build_dof_layout(mesh, bc_table(cs));
}

Vec2 traction_at(const CaseSpec& cs, double t) {
  const double s = t - 0.5;
  return {0.0, -cs.h_max * 256.0 * t * t * s * s};
}

LoadVectors assemble_loads(const Mesh& mesh, const DofLayout& layout,
                           const CaseSpec& cs, double t) {
  LoadVectors loads = zero_loads(layout);
  const Vec2 sigma = traction_at(cs, t);
  add_traction(mesh, BoundaryTag::Top, sigma.x, sigma.y, loads);
  add_pressure_dirichlet_term(mesh, BoundaryTag::Top, 0.0, loads);
  add_gravity(mesh, cs.params, loads);
  return loads;
}

LoadFn case_loads(const Mesh& mesh, const DofLayout& layout,
                  const CaseSpec& cs) {
  return [&mesh, &layout, cs](double t) {
    return assemble_loads(mesh, layout, cs, t);
  };
}

SimulationReport run_simulation_on(const Mesh& mesh, const DofLayout& layout,
                                   const CaseSpec& cs,
                                   const TuningSpec& tuning,
                                   const StoppingConfig& cfg, double dt,
                                   double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("run_simulation: dt and t_end must be positive");
  const long steps = std::lround(t_end / dt);
  if (steps < 1 || std::abs(steps * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw std::invalid_argument(
        "run_simulation: t_end must be an integer multiple of dt");

  const double kdr = resolve_kdr(tuning, cs.params.mu, cs.params.lambda);
  FixedStressStepper stepper(mesh, layout, cs.params, kdr, dt,
                             case_loads(mesh, layout, cs));

  SimulationReport report;
  report.steps.reserve(steps);
  SolutionState state = initial_state(layout);
  for (long s = 0; s < steps; ++s) {
    TimestepReport tr = stepper.advance_timestep(state, cfg);
    report.accumulated_iterations += tr.iterations;
    report.converged = report.converged && tr.converged;
    report.steps.push_back(tr);
  }
  report.final_state = std::move(state);
  return report;
}

SimulationReport run_simulation(const CaseSpec& cs, const TuningSpec& tuning,
                                const StoppingConfig& cfg, int mesh_n,
                                double dt, double t_end) {
  const Mesh mesh = build_lshape_mesh(mesh_n);
  const DofLayout layout = build_dof_layout(mesh, cs);
  return run_simulation_on(mesh, layout, cs, tuning, cfg, dt, t_end);
}

} // namespace biotfs
