#include "oracles.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

namespace {

// 4-point Gauss-Legendre on [0, 1].
struct G1d {
  double x, w;
};
const std::array<G1d, 4> kG4 = {{{0.5 - 0.8611363115940526 / 2, 0.3478548451374538 / 2},
                                 {0.5 - 0.3399810435848563 / 2, 0.6521451548625461 / 2},
                                 {0.5 + 0.3399810435848563 / 2, 0.6521451548625461 / 2},
                                 {0.5 + 0.8611363115940526 / 2, 0.3478548451374538 / 2}}};

using Fn2 = std::function<double(double, double)>;

// Integral over the unit square.
double integrate(const Fn2& f) {
  double acc = 0.0;
  for (const auto& gx : kG4)
    for (const auto& gy : kG4)
      acc += gx.w * gy.w * f(gx.x, gy.x);
  return acc;
}

// Q1 unit-coordinate gradients, nodes ll, lr, ur, ul.
double dshape(int i, int c, double x, double y) {
  switch (i) {
  case 0:
    return c == 0 ? -(1 - y) : -(1 - x);
  case 1:
    return c == 0 ? (1 - y) : -x;
  case 2:
    return c == 0 ? y : x;
  default:
    return c == 0 ? -y : (1 - x);
  }
}

// Outward-normalized RT0 slot functions on the unit square,
// slots {bottom, right, top, left}; the physical field divides by nothing
// (values are already normal flux densities) and div scales by 1/h.
double rt0(int slot, int c, double x, double y) {
  switch (slot) {
  case 0:
    return c == 1 ? (y - 1) : 0.0; // bottom
  case 1:
    return c == 0 ? x : 0.0; // right
  case 2:
    return c == 1 ? y : 0.0; // top
  default:
    return c == 0 ? (x - 1) : 0.0; // left
  }
}

} // namespace

MatrixXd element_elasticity(double h, double mu, double lambda) {
  MatrixXd ke = MatrixXd::Zero(8, 8);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < 4; ++j)
        for (int d = 0; d < 2; ++d) {
          // 2 mu eps(u):eps(v) + lambda div u div v with u = N_j e_d,
          // v = N_i e_c; physical gradients carry 1/h, the Jacobian h^2.
          auto f = [&](double x, double y) {
            double gi0 = dshape(i, 0, x, y) / h, gi1 = dshape(i, 1, x, y) / h;
            double gj0 = dshape(j, 0, x, y) / h, gj1 = dshape(j, 1, x, y) / h;
            std::array<double, 2> gi{gi0, gi1}, gj{gj0, gj1};
            double eps = 0.0;
            for (int k = 0; k < 2; ++k)
              for (int l = 0; l < 2; ++l) {
                double eu = 0.5 * ((l == d ? gj[k] : 0.0) + (k == d ? gj[l] : 0.0));
                double ev = 0.5 * ((l == c ? gi[k] : 0.0) + (k == c ? gi[l] : 0.0));
                eps += eu * ev;
              }
            return 2.0 * mu * eps + lambda * gj[d] * gi[c];
          };
          ke(2 * i + c, 2 * j + d) = h * h * integrate(f);
        }
  return ke;
}

MatrixXd element_rt0_mass(double h) {
  MatrixXd me = MatrixXd::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      auto f = [&](double x, double y) {
        return rt0(a, 0, x, y) * rt0(b, 0, x, y) +
               rt0(a, 1, x, y) * rt0(b, 1, x, y);
      };
      me(a, b) = h * h * integrate(f);
    }
  return me;
}

DenseBlocks assemble_dense(const biotfs::Mesh& mesh,
                           const biotfs::MaterialParams& params) {
  const int n_u = 2 * mesh.num_vertices();
  const int n_p = mesh.num_cells();
  const int n_q = mesh.num_edges();
  const double h = mesh.h;

  DenseBlocks blocks;
  blocks.A = MatrixXd::Zero(n_u, n_u);
  blocks.B = MatrixXd::Zero(n_u, n_p);
  blocks.M = MatrixXd::Zero(n_q, n_q);
  blocks.D = MatrixXd::Zero(n_p, n_q);
  blocks.volume = VectorXd::Zero(n_p);

  const MatrixXd ke = element_elasticity(h, params.mu, params.lambda);
  const MatrixXd me = element_rt0_mass(h);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells[c];
    const biotfs::CellEdges& ce = mesh.cell_edges[c];

    for (int i = 0; i < 4; ++i)
      for (int ci = 0; ci < 2; ++ci)
        for (int j = 0; j < 4; ++j)
          for (int cj = 0; cj < 2; ++cj)
            blocks.A(2 * v[i] + ci, 2 * v[j] + cj) +=
                ke(2 * i + ci, 2 * j + cj);

    for (int i = 0; i < 4; ++i)
      for (int ci = 0; ci < 2; ++ci) {
        auto f = [&](double x, double y) { return dshape(i, ci, x, y) / h; };
        blocks.B(2 * v[i] + ci, c) += params.alpha * h * h * integrate(f);
      }

    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        blocks.M(ce.edge[a], ce.edge[b]) += params.viscosity /
                                            params.permeability * ce.sign[a] *
                                            ce.sign[b] * me(a, b);

    for (int s = 0; s < 4; ++s) {
      // div of the outward slot function is 1/h on the cell.
      blocks.D(c, ce.edge[s]) += ce.sign[s] * h * h * (1.0 / h);
    }
    blocks.volume[c] = h * h;
  }
  return blocks;
}

VectorXd dense_solve(const MatrixXd& A, const VectorXd& b) {
  Eigen::FullPivLU<MatrixXd> lu(A);
  VectorXd x = lu.solve(b);
  for (int pass = 0; pass < 2; ++pass) {
    VectorXd r = b - A * x;
    x += lu.solve(r);
  }
  return x;
}

namespace {

// Rows/cols of the free dofs.
MatrixXd slice(const MatrixXd& A, const std::vector<int>& rows,
               const std::vector<int>& cols) {
  MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out(i, j) = A(rows[i], cols[j]);
  return out;
}

VectorXd gather(const VectorXd& v, const std::vector<int>& ids) {
  VectorXd out(ids.size());
  for (size_t i = 0; i < ids.size(); ++i)
    out[i] = v[ids[i]];
  return out;
}

VectorXd scatter(const VectorXd& v, const std::vector<int>& ids, int n) {
  VectorXd out = VectorXd::Zero(n);
  for (size_t i = 0; i < ids.size(); ++i)
    out[ids[i]] = v[i];
  return out;
}

} // namespace

biotfs::SolutionState dense_monolithic_step(const biotfs::Mesh& mesh,
                                            const biotfs::DofLayout& layout,
                                            const biotfs::MaterialParams& params,
                                            double dt,
                                            const biotfs::LoadVectors& loads,
                                            const biotfs::SolutionState& prev) {
  const DenseBlocks blocks = assemble_dense(mesh, params);
  const auto& fu = layout.free_u;
  const auto& fq = layout.free_q;
  const int nu = fu.size(), nq = fq.size(), np = layout.n_p;

  MatrixXd A = slice(blocks.A, fu, fu);
  std::vector<int> all_p(np);
  for (int i = 0; i < np; ++i)
    all_p[i] = i;
  MatrixXd B = slice(blocks.B, fu, all_p);
  MatrixXd M = slice(blocks.M, fq, fq);
  MatrixXd D = slice(blocks.D, all_p, fq);

  MatrixXd K = MatrixXd::Zero(nu + nq + np, nu + nq + np);
  VectorXd rhs = VectorXd::Zero(nu + nq + np);

  K.block(0, 0, nu, nu) = A;
  K.block(0, nu + nq, nu, np) = -B;
  K.block(nu, nu, nq, nq) = M;
  K.block(nu, nu + nq, nq, np) = -D.transpose();
  K.block(nu + nq, 0, np, nu) = B.transpose() / dt;
  K.block(nu + nq, nu, np, nq) = D;
  for (int j = 0; j < np; ++j)
    K(nu + nq + j, nu + nq + j) =
        blocks.volume[j] / (params.biot_modulus * dt);

  rhs.head(nu) = gather(loads.f_u, fu);
  rhs.segment(nu, nq) = gather(loads.f_q, fq);
  rhs.tail(np) = blocks.B.transpose() * prev.u / dt +
                 blocks.volume.cwiseProduct(prev.p) /
                     (params.biot_modulus * dt) +
                 loads.f_p;

  VectorXd sol = dense_solve(K, rhs);
  biotfs::SolutionState next;
  next.u = scatter(sol.head(nu), fu, layout.n_u);
  next.q = scatter(sol.segment(nu, nq), fq, layout.n_q);
  next.p = sol.tail(np);
  next.t = prev.t + dt;
  return next;
}

void dense_flow_substep(const biotfs::Mesh& mesh,
                        const biotfs::DofLayout& layout,
                        const biotfs::MaterialParams& params, double kdr,
                        double dt, const biotfs::LoadVectors& loads,
                        const biotfs::SolutionState& prev_time,
                        const biotfs::SolutionState& prev_iter,
                        biotfs::Vector& p_out, biotfs::Vector& q_out) {
  const DenseBlocks blocks = assemble_dense(mesh, params);
  const auto& fq = layout.free_q;
  const int nq = fq.size(), np = layout.n_p;
  std::vector<int> all_p(np);
  for (int i = 0; i < np; ++i)
    all_p[i] = i;
  MatrixXd M = slice(blocks.M, fq, fq);
  MatrixXd D = slice(blocks.D, all_p, fq);

  const double beta = 1.0 / params.biot_modulus +
                      params.alpha * params.alpha / kdr;
  const double stab = params.alpha * params.alpha / kdr;

  MatrixXd K = MatrixXd::Zero(nq + np, nq + np);
  K.block(0, 0, nq, nq) = M;
  K.block(0, nq, nq, np) = -D.transpose();
  K.block(nq, 0, np, nq) = D;
  for (int j = 0; j < np; ++j)
    K(nq + j, nq + j) = beta * blocks.volume[j] / dt;

  VectorXd rhs = VectorXd::Zero(nq + np);
  rhs.head(nq) = gather(loads.f_q, fq);
  rhs.tail(np) =
      beta / dt * blocks.volume.cwiseProduct(prev_time.p) +
      stab / dt * blocks.volume.cwiseProduct(prev_iter.p - prev_time.p) -
      blocks.B.transpose() * (prev_iter.u - prev_time.u) / dt + loads.f_p;

  VectorXd sol = dense_solve(K, rhs);
  q_out = scatter(sol.head(nq), fq, layout.n_q);
  p_out = sol.tail(np);
}

biotfs::Vector dense_mechanics_substep(const biotfs::Mesh& mesh,
                                       const biotfs::DofLayout& layout,
                                       const biotfs::MaterialParams& params,
                                       const biotfs::LoadVectors& loads,
                                       const biotfs::Vector& p_new) {
  const DenseBlocks blocks = assemble_dense(mesh, params);
  const auto& fu = layout.free_u;
  MatrixXd A = slice(blocks.A, fu, fu);
  VectorXd rhs = gather(loads.f_u + blocks.B * p_new, fu);
  return scatter(dense_solve(A, rhs), fu, layout.n_u);
}

} // namespace oracle
