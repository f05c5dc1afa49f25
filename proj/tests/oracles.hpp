// Independent dense reference implementations used only by tests. Everything
// here is assembled from the weak forms directly with explicit shape-function
// lambdas and high-order Gauss quadrature, without touching the production
// assembly path.
#pragma once

#include <Eigen/Dense>

#include "biotfs/biot.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// 8x8 vector-Q1 strain stiffness of one square cell of side h,
/// dofs (node, component) with nodes ll, lr, ur, ul.
MatrixXd element_elasticity(double h, double mu, double lambda);

/// 4x4 outward-normalized RT0 mass of one square cell of side h,
/// slots {bottom, right, top, left}.
MatrixXd element_rt0_mass(double h);

/// Dense full-size blocks of the three-field system (no constraints applied).
struct DenseBlocks {
  MatrixXd A;      ///< n_u x n_u
  MatrixXd B;      ///< n_u x n_p, alpha included
  MatrixXd M;      ///< n_q x n_q, eta/k included
  MatrixXd D;      ///< n_p x n_q
  VectorXd volume; ///< n_p
};

DenseBlocks assemble_dense(const biotfs::Mesh& mesh,
                           const biotfs::MaterialParams& params);

/// Robust dense solve (full pivoting plus refinement).
VectorXd dense_solve(const MatrixXd& A, const VectorXd& b);

/// One backward-Euler step of the fully coupled system, free dofs eliminated
/// per the layout, all prescribed values zero.
biotfs::SolutionState dense_monolithic_step(const biotfs::Mesh& mesh,
                                            const biotfs::DofLayout& layout,
                                            const biotfs::MaterialParams& params,
                                            double dt,
                                            const biotfs::LoadVectors& loads,
                                            const biotfs::SolutionState& prev);

/// Flow half-step of the splitting: solve for (p, q) at t^n given the
/// previous time level and the previous iterate.
void dense_flow_substep(const biotfs::Mesh& mesh,
                        const biotfs::DofLayout& layout,
                        const biotfs::MaterialParams& params, double kdr,
                        double dt, const biotfs::LoadVectors& loads,
                        const biotfs::SolutionState& prev_time,
                        const biotfs::SolutionState& prev_iter,
                        biotfs::Vector& p_out, biotfs::Vector& q_out);

/// Mechanics half-step: displacement response to the updated pressure.
biotfs::Vector dense_mechanics_substep(const biotfs::Mesh& mesh,
                                       const biotfs::DofLayout& layout,
                                       const biotfs::MaterialParams& params,
                                       const biotfs::LoadVectors& loads,
                                       const biotfs::Vector& p_new);

} // namespace oracle
