#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biotfs/biot.hpp"

namespace biotfs {

enum class CaseId { T1a, T1b, T1c, T2 };

/// Cases 1a/1b/1c clamp the normal displacement on the cut; case 2 leaves
/// the cut traction-free.
enum class BcSet { CutClamped, CutTraction };

enum class VariationAxis { Poisson, Permeability };

/// One fully resolved test case: geometry role of each boundary tag, SI
/// material set, load history and the sweep base of its tuning parameter.
struct CaseSpec {
  CaseId id = CaseId::T1a;
  std::string name;      ///< "1a", "1b", "1c", "2"
  MaterialParams params; ///< resolved SI values
  double youngs = 0.0;   ///< generating pair, kept for reporting [Pa]
  double poisson = 0.0;
  double h_max = 0.0; ///< traction amplitude [Pa]
  BcSet bc_set = BcSet::CutClamped;
  TuningVariant sweep_base = TuningVariant::OneD;
  VariationAxis axis = VariationAxis::Poisson;
  double variation_value = 0.0; ///< nu, or k in mD
  std::string variation_label;  ///< "nu=0.2" or "k=100mD"
};

struct CaseOverrides {
  std::optional<double> poisson;
  std::optional<double> permeability_mD;
};

/// "1a" | "1b" | "1c" | "2"; throws listing the valid ids otherwise.
CaseId parse_case_id(const std::string& s);
const char* case_name(CaseId id);

/// The parameter values each case varies in the study:
/// nu in {0.01, 0.1, 0.2, 0.3, 0.4, 0.49} for 1a/1b/2,
/// k  in {0.1, 1, 10, 100, 1000} mD for 1c.
std::vector<double> default_variations(CaseId id);

/// Resolve a case to SI units. An override outside the case's declared
/// variation axis is rejected.
CaseSpec make_case(CaseId id, const CaseOverrides& overrides = {});

/// Per-tag boundary conditions of the case: traction + drained top, rollers
/// with no-flow on left/bottom, traction-free no-flow lower right, and the
/// cut either clamped (cases 1) or traction-free (case 2).
BcTable bc_table(const CaseSpec& cs);

DofLayout build_dof_layout(const Mesh& mesh, const CaseSpec& cs);

/// Top traction (0, -h_max * 256 t^2 (t - 0.5)^2).
Vec2 traction_at(const CaseSpec& cs, double t);

LoadVectors assemble_loads(const Mesh& mesh, const DofLayout& layout,
                           const CaseSpec& cs, double t);

/// Load provider bound to a mesh/layout pair; both must outlive the result.
LoadFn case_loads(const Mesh& mesh, const DofLayout& layout,
                  const CaseSpec& cs);

/// Run the full fixed-stress time loop: t_end/dt steps of size dt on the
/// L-shape with resolution n. t_end/dt must be an integer count.
SimulationReport run_simulation(const CaseSpec& cs, const TuningSpec& tuning,
                                const StoppingConfig& cfg, int mesh_n,
                                double dt, double t_end);

/// Same loop on an existing mesh/layout (shared by sweep workers).
SimulationReport run_simulation_on(const Mesh& mesh, const DofLayout& layout,
                                   const CaseSpec& cs,
                                   const TuningSpec& tuning,
                                   const StoppingConfig& cfg, double dt,
                                   double t_end);

} // namespace biotfs
