#include "biotfs/biot.hpp"

#include <cmath>
#include <stdexcept>

namespace biotfs {

SolutionState initial_state(const DofLayout& layout) {
  SolutionState s;
  s.u = Vector::Zero(layout.n_u);
  s.p = Vector::Zero(layout.n_p);
  s.q = Vector::Zero(layout.n_q);
  s.t = 0.0;
  return s;
}

bool stopping_check(const Vector& du, const Vector& dp, const Vector& dq,
                    const Vector& u, const Vector& p, const Vector& q,
                    const StoppingConfig& cfg) {
  auto ok = [&](const Vector& d, const Vector& x, double eps_abs) {
    return d.norm() <= eps_abs + cfg.eps_rel * x.norm();
  };
  return ok(du, u, cfg.eps_abs_u) && ok(dp, p, cfg.eps_abs_p) &&
         ok(dq, q, cfg.eps_abs_q);
}

// ---- FixedStressStepper ---------------------------------------------------

FixedStressStepper::FixedStressStepper(const Mesh& mesh,
                                       const DofLayout& layout,
                                       const MaterialParams& params, double kdr,
                                       double dt, LoadFn loads)
    : mesh_(mesh), layout_(layout), params_(params), kdr_(kdr), dt_(dt),
      loads_(std::move(loads)) {
  blocks_ = assemble_all_blocks(mesh_, layout_, params_, kdr_, dt_);
  reduced_ = apply_constraints(blocks_, layout_);
  if (reduced_.n_uf > 0)
    mech_factor_ = std::make_unique<Factorization>(reduced_.A_ff);
  flow_factor_ = std::make_unique<Factorization>(reduced_.flow);
}

void FixedStressStepper::flow_substep(const SolutionState& prev_time,
                                      const SolutionState& prev_iter,
                                      const LoadVectors& loads, Vector& p_out,
                                      Vector& q_out) const {
  // Mass-balance right-hand side with the fixed-stress stabilization terms:
  // the alpha^2/K_dr storage sees the pressure iterate increment and the
  // volumetric-strain rate is frozen at the previous iterate.
  const Vector stab = blocks_.M_pp - blocks_.storage_pp; // alpha^2/K_dr |c|/dt
  Vector mass_rhs =
      blocks_.M_pp.cwiseProduct(prev_time.p) +
      stab.cwiseProduct(prev_iter.p - prev_time.p) -
      (blocks_.B_up.transpose() * (prev_iter.u - prev_time.u)) / dt_ +
      loads.f_p;

  Vector rhs(reduced_.n_qf + reduced_.n_p);
  rhs.head(reduced_.n_qf) = restrict_q(layout_, loads.f_q);
  rhs.tail(reduced_.n_p) = -mass_rhs;

  Vector sol = flow_factor_->solve(rhs);
  q_out = expand_q(layout_, sol.head(reduced_.n_qf));
  p_out = sol.tail(reduced_.n_p);
}

Vector FixedStressStepper::mechanics_substep(const Vector& p_new,
                                             const LoadVectors& loads) const {
  if (reduced_.n_uf == 0)
    return Vector::Zero(layout_.n_u);
  Vector rhs_full = loads.f_u + blocks_.B_up * p_new;
  Vector sol = mech_factor_->solve(restrict_u(layout_, rhs_full));
  return expand_u(layout_, sol);
}

TimestepReport FixedStressStepper::advance_timestep(
    SolutionState& state, const StoppingConfig& cfg) const {
  const double t_new = state.t + dt_;
  const LoadVectors loads = loads_(t_new);

  SolutionState iter = state; // iterate 0: previous time-step solution
  TimestepReport report;
  Vector p_new, q_new, u_new;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    flow_substep(state, iter, loads, p_new, q_new);
    u_new = mechanics_substep(p_new, loads);

    Vector du = u_new - iter.u;
    Vector dp = p_new - iter.p;
    Vector dq = q_new - iter.q;
    iter.u = u_new;
    iter.p = p_new;
    iter.q = q_new;

    report.iterations = it;
    report.delta_u = du.norm();
    report.delta_p = dp.norm();
    report.delta_q = dq.norm();
    const bool finite = std::isfinite(report.delta_u) &&
                        std::isfinite(report.delta_p) &&
                        std::isfinite(report.delta_q);
    if (!finite) {
      report.converged = false; // diverged; keep the last iterate
      break;
    }
    if (stopping_check(du, dp, dq, iter.u, iter.p, iter.q, cfg)) {
      report.converged = true;
      break;
    }
  }
  state = iter;
  state.t = t_new;
  return report;
}

// ---- MonolithicStepper ----------------------------------------------------

MonolithicStepper::MonolithicStepper(const Mesh& mesh, const DofLayout& layout,
                                     const MaterialParams& params, double dt,
                                     LoadFn loads)
    : mesh_(mesh), layout_(layout), params_(params), dt_(dt),
      loads_(std::move(loads)) {
  // K_dr plays no role in the coupled system; only storage_pp is used.
  blocks_ = assemble_all_blocks(mesh_, layout_, params_, 1.0, dt_);
  reduced_ = apply_constraints(blocks_, layout_);

  // Symmetric arrangement over (u_f, q_f, p): the Darcy row is scaled by dt
  // and the mass row by -dt.
  const int nu = reduced_.n_uf, nq = reduced_.n_qf, np = reduced_.n_p;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(reduced_.A_ff.nonZeros() + 2 * reduced_.B_f.nonZeros() +
                reduced_.M_ff.nonZeros() + 2 * reduced_.D_f.nonZeros() + np);
  for (int k = 0; k < reduced_.A_ff.outerSize(); ++k)
    for (SpMat::InnerIterator it(reduced_.A_ff, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < reduced_.B_f.outerSize(); ++k)
    for (SpMat::InnerIterator it(reduced_.B_f, k); it; ++it) {
      trips.emplace_back(it.row(), nu + nq + it.col(), -it.value());
      trips.emplace_back(nu + nq + it.col(), it.row(), -it.value());
    }
  for (int k = 0; k < reduced_.M_ff.outerSize(); ++k)
    for (SpMat::InnerIterator it(reduced_.M_ff, k); it; ++it)
      trips.emplace_back(nu + it.row(), nu + it.col(), dt_ * it.value());
  for (int k = 0; k < reduced_.D_f.outerSize(); ++k)
    for (SpMat::InnerIterator it(reduced_.D_f, k); it; ++it) {
      trips.emplace_back(nu + it.col(), nu + nq + it.row(), -dt_ * it.value());
      trips.emplace_back(nu + nq + it.row(), nu + it.col(), -dt_ * it.value());
    }
  for (int j = 0; j < np; ++j)
    trips.emplace_back(nu + nq + j, nu + nq + j,
                       -dt_ * blocks_.storage_pp[j]); // (1/M)|c|
  SpMat K(nu + nq + np, nu + nq + np);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  factor_ = std::make_unique<Factorization>(K);
}

SolutionState MonolithicStepper::step(const SolutionState& prev) const {
  const double t_new = prev.t + dt_;
  const LoadVectors loads = loads_(t_new);
  const int nu = reduced_.n_uf, nq = reduced_.n_qf, np = reduced_.n_p;

  Vector rhs(nu + nq + np);
  rhs.head(nu) = restrict_u(layout_, loads.f_u);
  rhs.segment(nu, nq) = dt_ * restrict_q(layout_, loads.f_q);
  rhs.tail(np) = -(blocks_.B_up.transpose() * prev.u +
                   dt_ * blocks_.storage_pp.cwiseProduct(prev.p) +
                   dt_ * loads.f_p);

  Vector sol = factor_->solve(rhs);
  SolutionState next;
  next.u = expand_u(layout_, sol.head(nu));
  next.q = expand_q(layout_, sol.segment(nu, nq));
  next.p = sol.tail(np);
  next.t = t_new;
  return next;
}

// ---- residual check ---------------------------------------------------------

ResidualNorms monolithic_residual(const SystemBlocks& blocks,
                                  const DofLayout& layout,
                                  const SolutionState& now,
                                  const SolutionState& prev,
                                  const LoadVectors& loads, double dt) {
  ResidualNorms out;

  Vector au = blocks.A_uu * now.u;
  Vector bp = blocks.B_up * now.p;
  Vector r_u = restrict_u(layout, au - bp - loads.f_u);
  out.momentum = r_u.norm();
  out.momentum_scale = restrict_u(layout, au).norm() +
                       restrict_u(layout, bp).norm() +
                       restrict_u(layout, loads.f_u).norm();

  Vector mq = blocks.M_qq * now.q;
  Vector dtp = blocks.D_qp.transpose() * now.p;
  Vector r_q = restrict_q(layout, mq - dtp - loads.f_q);
  out.darcy = r_q.norm();
  out.darcy_scale = restrict_q(layout, mq).norm() +
                    restrict_q(layout, dtp).norm() +
                    restrict_q(layout, loads.f_q).norm();

  Vector storage = blocks.storage_pp.cwiseProduct(now.p - prev.p);
  Vector strain = (blocks.B_up.transpose() * (now.u - prev.u)) / dt;
  Vector divq = blocks.D_qp * now.q;
  Vector r_m = storage + strain + divq - loads.f_p;
  out.mass = r_m.norm();
  out.mass_scale =
      storage.norm() + strain.norm() + divq.norm() + loads.f_p.norm();

  return out;
}

} // namespace biotfs
