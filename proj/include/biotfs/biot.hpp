#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "biotfs/fem.hpp"

namespace biotfs {

/// Coefficient vectors of the three fields at one time level or splitting
/// iterate. Full-size vectors; constrained entries stay at their prescribed
/// zero values.
struct SolutionState {
  Vector u; ///< displacement [m]
  Vector p; ///< pressure [Pa]
  Vector q; ///< normal flux density [m/s]
  double t = 0.0;
};

SolutionState initial_state(const DofLayout& layout);

struct StoppingConfig {
  double eps_rel = 1e-6;
  double eps_abs_u = 1e-10;
  double eps_abs_p = 1e-10;
  double eps_abs_q = 1e-10;
  int max_iter = 2000;
};

/// Increment test on the discrete Euclidean norm per field:
/// converged iff ||dx||_2 <= eps_abs_x + eps_rel * ||x||_2 for x in {u,p,q},
/// with <= at the threshold.
bool stopping_check(const Vector& du, const Vector& dp, const Vector& dq,
                    const Vector& u, const Vector& p, const Vector& q,
                    const StoppingConfig& cfg);

struct TimestepReport {
  int iterations = 0;
  bool converged = false;
  double delta_u = 0.0; ///< final increment norms
  double delta_p = 0.0;
  double delta_q = 0.0;
};

/// Loads of the weak form at a given time.
using LoadFn = std::function<LoadVectors(double)>;

/// Fixed-stress splitting integrator. The flow problem is solved with the
/// artificial volumetric stress K_dr div(u) - alpha p held fixed, then the
/// mechanics problem with the updated pressure. The mechanics matrix and
/// the flow saddle matrix are factorized once at construction and reused
/// across all time steps and iterations.
class FixedStressStepper {
public:
  FixedStressStepper(const Mesh& mesh, const DofLayout& layout,
                     const MaterialParams& params, double kdr, double dt,
                     LoadFn loads);

  /// One backward-Euler step from state.t to state.t + dt. Iterate 0 is the
  /// previous time-step solution; one iteration is one flow solve followed
  /// by one mechanics solve, the first pair counting as iteration 1.
  /// On max_iter exhaustion the last iterate is kept and converged=false.
  TimestepReport advance_timestep(SolutionState& state,
                                  const StoppingConfig& cfg) const;

  /// Flow substep: given the converged state at t^{n-1} and the latest
  /// iterate, solve the mixed system for (p, q) at t^n.
  void flow_substep(const SolutionState& prev_time,
                    const SolutionState& prev_iter, const LoadVectors& loads,
                    Vector& p_out, Vector& q_out) const;

  /// Mechanics substep: solve A_uu u = f_u + B_up p on free dofs.
  Vector mechanics_substep(const Vector& p_new, const LoadVectors& loads) const;

  const SystemBlocks& blocks() const { return blocks_; }
  const ReducedSystem& reduced() const { return reduced_; }
  double kdr() const { return kdr_; }
  double dt() const { return dt_; }
  LoadVectors loads_at(double t) const { return loads_(t); }

private:
  const Mesh& mesh_;
  const DofLayout& layout_;
  MaterialParams params_;
  double kdr_ = 0.0;
  double dt_ = 0.0;
  LoadFn loads_;
  SystemBlocks blocks_;
  ReducedSystem reduced_;
  std::unique_ptr<Factorization> mech_factor_;
  std::unique_ptr<Factorization> flow_factor_;
};

/// Fully coupled three-field system advanced by one backward-Euler step per
/// solve; the oracle the splitting is verified against.
class MonolithicStepper {
public:
  MonolithicStepper(const Mesh& mesh, const DofLayout& layout,
                    const MaterialParams& params, double dt, LoadFn loads);

  SolutionState step(const SolutionState& prev) const;

  const SystemBlocks& blocks() const { return blocks_; }
  double dt() const { return dt_; }
  LoadVectors loads_at(double t) const { return loads_(t); }

private:
  const Mesh& mesh_;
  const DofLayout& layout_;
  MaterialParams params_;
  double dt_ = 0.0;
  LoadFn loads_;
  SystemBlocks blocks_;
  ReducedSystem reduced_;
  std::unique_ptr<Factorization> factor_;
};

/// Residual norms of the coupled system at (now, prev), restricted to free
/// rows, together with the natural magnitude of each equation's terms
/// (used to scale convergence assertions).
struct ResidualNorms {
  double momentum = 0.0;
  double darcy = 0.0;
  double mass = 0.0;
  double momentum_scale = 0.0;
  double darcy_scale = 0.0;
  double mass_scale = 0.0;
};

ResidualNorms monolithic_residual(const SystemBlocks& blocks,
                                  const DofLayout& layout,
                                  const SolutionState& now,
                                  const SolutionState& prev,
                                  const LoadVectors& loads, double dt);

struct SimulationReport {
  long accumulated_iterations = 0;
  bool converged = true; ///< every time step converged
  std::vector<TimestepReport> steps;
  SolutionState final_state;
};

} // namespace biotfs
