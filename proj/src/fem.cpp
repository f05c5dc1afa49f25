#include "biotfs/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace biotfs {

namespace {

// 2x2 tensor Gauss rule on the unit square; exact for all integrands of the
// Q1/P0/RT0 blocks on axis-aligned squares.
struct QuadPoint {
  double xi, eta, w;
};

constexpr double kGaussA = 0.5 - 0.5 / 1.7320508075688772; // (1 - 1/sqrt(3))/2
constexpr double kGaussB = 0.5 + 0.5 / 1.7320508075688772;

const std::array<QuadPoint, 4> kQuad = {{{kGaussA, kGaussA, 0.25},
                                         {kGaussB, kGaussA, 0.25},
                                         {kGaussA, kGaussB, 0.25},
                                         {kGaussB, kGaussB, 0.25}}};

// Bilinear shape functions, node order lower-left, lower-right, upper-right,
// upper-left (matching the cell vertex order).
std::array<double, 4> q1_values(double xi, double eta) {
  return {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
}

// Gradients w.r.t. the unit coordinates; physical gradients divide by h.
std::array<std::array<double, 2>, 4> q1_grads(double xi, double eta) {
  return {{{-(1 - eta), -(1 - xi)},
           {(1 - eta), -xi},
           {eta, xi},
           {-eta, (1 - xi)}}};
}

std::vector<int> invert_constraints(int total, const std::vector<int>& constrained,
                                    std::vector<int>& to_free) {
  to_free.assign(total, -1);
  for (int c : constrained)
    to_free[c] = -2; // mark
  std::vector<int> free_ids;
  free_ids.reserve(total - constrained.size());
  for (int i = 0; i < total; ++i) {
    if (to_free[i] == -1) {
      to_free[i] = static_cast<int>(free_ids.size());
      free_ids.push_back(i);
    } else {
      to_free[i] = -1;
    }
  }
  return free_ids;
}

// Submatrix of the rows/cols whose map entry is >= 0.
SpMat select(const SpMat& A, const std::vector<int>& row_map, int n_rows,
             const std::vector<int>& col_map, int n_cols) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      int r = row_map[it.row()];
      int c = col_map[it.col()];
      if (r >= 0 && c >= 0)
        trips.emplace_back(r, c, it.value());
    }
  }
  SpMat out(n_rows, n_cols);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i)
    m[i] = i;
  return m;
}

} // namespace

DofLayout build_dof_layout(const Mesh& mesh, const BcTable& bcs) {
  DofLayout layout;
  layout.n_u = 2 * mesh.num_vertices();
  layout.n_p = mesh.num_cells();
  layout.n_q = mesh.num_edges();

  std::vector<int> cu, cq;
  for (const auto& [tag, bc] : bcs) {
    if (bc.clamp_x || bc.clamp_y) {
      for (int v : vertices_on_tag(mesh, tag)) {
        if (bc.clamp_x)
          cu.push_back(2 * v);
        if (bc.clamp_y)
          cu.push_back(2 * v + 1);
      }
    }
    if (bc.no_flow)
      for (int e : boundary_faces_by_tag(mesh, tag))
        cq.push_back(e);
  }
  for (const auto& bf : mesh.boundary_faces)
    if (bcs.find(bf.tag) == bcs.end())
      throw std::invalid_argument(std::string("build_dof_layout: no condition "
                                              "for boundary tag ") +
                                  to_string(bf.tag));

  std::sort(cu.begin(), cu.end());
  cu.erase(std::unique(cu.begin(), cu.end()), cu.end());
  std::sort(cq.begin(), cq.end());
  cq.erase(std::unique(cq.begin(), cq.end()), cq.end());
  layout.constrained_u = std::move(cu);
  layout.constrained_q = std::move(cq);
  layout.free_u =
      invert_constraints(layout.n_u, layout.constrained_u, layout.u_to_free);
  layout.free_q =
      invert_constraints(layout.n_q, layout.constrained_q, layout.q_to_free);
  return layout;
}

SpMat assemble_elasticity(const Mesh& mesh, const DofLayout& layout, double mu,
                          double lambda) {
  if (!(mu > 0.0))
    throw std::invalid_argument("assemble_elasticity: mu must be positive");
  if (lambda < 0.0)
    throw std::invalid_argument("assemble_elasticity: lambda must be >= 0");

  const double h = mesh.h;
  // Element matrix is identical for every cell of a uniform square mesh.
  Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
  for (const auto& qp : kQuad) {
    auto g = q1_grads(qp.xi, qp.eta);
    for (auto& gi : g) {
      gi[0] /= h;
      gi[1] /= h;
    }
    const double w = qp.w * h * h;
    for (int i = 0; i < 4; ++i) {
      for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < 4; ++j) {
          for (int d = 0; d < 2; ++d) {
            double dot = g[i][0] * g[j][0] + g[i][1] * g[j][1];
            double val = mu * ((c == d ? dot : 0.0) + g[i][d] * g[j][c]) +
                         lambda * g[i][c] * g[j][d];
            ke(2 * i + c, 2 * j + d) += w * val;
          }
        }
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_cells()) * 64);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells[c];
    for (int i = 0; i < 4; ++i)
      for (int ci = 0; ci < 2; ++ci)
        for (int j = 0; j < 4; ++j)
          for (int cj = 0; cj < 2; ++cj)
            trips.emplace_back(2 * v[i] + ci, 2 * v[j] + cj,
                               ke(2 * i + ci, 2 * j + cj));
  }
  SpMat A(layout.n_u, layout.n_u);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

SpMat assemble_coupling(const Mesh& mesh, const DofLayout& layout,
                        double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("assemble_coupling: alpha must be in (0, 1]");

  const double h = mesh.h;
  // Per-node integral of the shape gradient over one cell: +-h/2 by symmetry;
  // evaluated by the same quadrature as the stiffness.
  std::array<std::array<double, 2>, 4> be{};
  for (const auto& qp : kQuad) {
    auto g = q1_grads(qp.xi, qp.eta);
    for (int i = 0; i < 4; ++i) {
      be[i][0] += qp.w * h * g[i][0]; // h^2 * grad/h
      be[i][1] += qp.w * h * g[i][1];
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_cells()) * 8);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells[c];
    for (int i = 0; i < 4; ++i)
      for (int ci = 0; ci < 2; ++ci)
        trips.emplace_back(2 * v[i] + ci, c, alpha * be[i][ci]);
  }
  SpMat B(layout.n_u, layout.n_p);
  B.setFromTriplets(trips.begin(), trips.end());
  B.makeCompressed();
  return B;
}

SpMat assemble_rt0_mass(const Mesh& mesh, const DofLayout& layout,
                        double eta_over_k) {
  if (!(eta_over_k > 0.0))
    throw std::invalid_argument("assemble_rt0_mass: eta/k must be positive");

  const double h = mesh.h;
  // Outward-normalized local RT0 mass on a square: h^2/3 on the diagonal,
  // -h^2/6 within each direction pair, zero across directions.
  // Local slots {bottom, right, top, left}: y-pair (0,2), x-pair (1,3).
  Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
  const double d = h * h / 3.0, o = -h * h / 6.0;
  me(0, 0) = me(1, 1) = me(2, 2) = me(3, 3) = d;
  me(0, 2) = me(2, 0) = o;
  me(1, 3) = me(3, 1) = o;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_cells()) * 16);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellEdges& ce = mesh.cell_edges[c];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (me(a, b) != 0.0)
          trips.emplace_back(ce.edge[a], ce.edge[b],
                             eta_over_k * ce.sign[a] * ce.sign[b] * me(a, b));
  }
  SpMat M(layout.n_q, layout.n_q);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

SpMat assemble_divergence(const Mesh& mesh, const DofLayout& layout) {
  // int_cell div(psi_e) = sign * |edge|, exact for RT0 on squares.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_cells()) * 4);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellEdges& ce = mesh.cell_edges[c];
    for (int s = 0; s < 4; ++s)
      trips.emplace_back(c, ce.edge[s], ce.sign[s] * mesh.h);
  }
  SpMat D(layout.n_p, layout.n_q);
  D.setFromTriplets(trips.begin(), trips.end());
  D.makeCompressed();
  return D;
}

Vector cell_volumes(const Mesh& mesh) {
  return Vector::Constant(mesh.num_cells(), mesh.h * mesh.h);
}

SystemBlocks assemble_flow_blocks(const Mesh& mesh, const DofLayout& layout,
                                  const MaterialParams& params, double kdr,
                                  double dt) {
  params.validate();
  if (!(kdr > 0.0))
    throw std::invalid_argument("assemble_flow_blocks: K_dr must be positive");
  if (!(dt > 0.0))
    throw std::invalid_argument("assemble_flow_blocks: dt must be positive");

  SystemBlocks blocks;
  blocks.M_qq =
      assemble_rt0_mass(mesh, layout, params.viscosity / params.permeability);
  blocks.D_qp = assemble_divergence(mesh, layout);
  Vector vol = cell_volumes(mesh);
  const double storage = 1.0 / params.biot_modulus;
  const double stab = params.alpha * params.alpha / kdr;
  blocks.M_pp = (storage + stab) / dt * vol;
  blocks.storage_pp = storage / dt * vol;
  blocks.loads = zero_loads(layout);
  return blocks;
}

SystemBlocks assemble_all_blocks(const Mesh& mesh, const DofLayout& layout,
                                 const MaterialParams& params, double kdr,
                                 double dt) {
  SystemBlocks blocks = assemble_flow_blocks(mesh, layout, params, kdr, dt);
  blocks.A_uu = assemble_elasticity(mesh, layout, params.mu, params.lambda);
  blocks.B_up = assemble_coupling(mesh, layout, params.alpha);
  return blocks;
}

LoadVectors zero_loads(const DofLayout& layout) {
  LoadVectors l;
  l.f_u = Vector::Zero(layout.n_u);
  l.f_q = Vector::Zero(layout.n_q);
  l.f_p = Vector::Zero(layout.n_p);
  return l;
}

void add_traction(const Mesh& mesh, BoundaryTag tag, double tx, double ty,
                  LoadVectors& out) {
  const double half_edge = 0.5 * mesh.h;
  for (int e : boundary_faces_by_tag(mesh, tag)) {
    const Edge& ed = mesh.edges[e];
    out.f_u[2 * ed.v0] += tx * half_edge;
    out.f_u[2 * ed.v0 + 1] += ty * half_edge;
    out.f_u[2 * ed.v1] += tx * half_edge;
    out.f_u[2 * ed.v1 + 1] += ty * half_edge;
  }
}

void add_pressure_dirichlet_term(const Mesh& mesh, BoundaryTag tag,
                                 double p_value, LoadVectors& out) {
  // On a boundary edge the global normal coincides with the outward normal
  // for top/right faces; the stored cell-edge sign carries that orientation.
  if (p_value == 0.0)
    return;
  for (int e : boundary_faces_by_tag(mesh, tag)) {
    double sign = 0.0;
    for (int c = 0; c < mesh.num_cells() && sign == 0.0; ++c) {
      const CellEdges& ce = mesh.cell_edges[c];
      for (int s = 0; s < 4; ++s)
        if (ce.edge[s] == e)
          sign = ce.sign[s];
    }
    out.f_q[e] += -p_value * sign * mesh.h;
  }
}

void add_gravity(const Mesh& mesh, const MaterialParams& params,
                 LoadVectors& out) {
  if (params.gravity_x == 0.0 && params.gravity_y == 0.0)
    return;
  add_volume_load_u(
      mesh,
      [&](double, double) {
        return Vec2{params.rho_bulk * params.gravity_x,
                    params.rho_bulk * params.gravity_y};
      },
      out);
  // rho_f g against RT0 test functions.
  const double h = mesh.h;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellEdges& ce = mesh.cell_edges[c];
    // int_cell psi_slot = (+-h^2/2) along the slot direction.
    const double gx = params.rho_fluid * params.gravity_x;
    const double gy = params.rho_fluid * params.gravity_y;
    const double half = 0.5 * h * h;
    out.f_q[ce.edge[0]] += ce.sign[0] * (-half) * gy; // bottom: psi_y mean -1/2
    out.f_q[ce.edge[2]] += ce.sign[2] * (+half) * gy; // top: psi_y mean +1/2
    out.f_q[ce.edge[3]] += ce.sign[3] * (-half) * gx; // left
    out.f_q[ce.edge[1]] += ce.sign[1] * (+half) * gx; // right
  }
}

void add_volume_load_u(const Mesh& mesh,
                       const std::function<Vec2(double, double)>& f,
                       LoadVectors& out) {
  const double h = mesh.h;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec2 origin = mesh.vertices[mesh.cells[c][0]];
    for (const auto& qp : kQuad) {
      const double x = origin.x + qp.xi * h;
      const double y = origin.y + qp.eta * h;
      const Vec2 val = f(x, y);
      auto N = q1_values(qp.xi, qp.eta);
      const double w = qp.w * h * h;
      for (int i = 0; i < 4; ++i) {
        out.f_u[2 * mesh.cells[c][i]] += w * N[i] * val.x;
        out.f_u[2 * mesh.cells[c][i] + 1] += w * N[i] * val.y;
      }
    }
  }
}

void add_volume_source_p(const Mesh& mesh,
                         const std::function<double(double, double)>& f,
                         LoadVectors& out) {
  const double h = mesh.h;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec2 origin = mesh.vertices[mesh.cells[c][0]];
    double acc = 0.0;
    for (const auto& qp : kQuad)
      acc += qp.w * f(origin.x + qp.xi * h, origin.y + qp.eta * h);
    out.f_p[c] += acc * h * h;
  }
}

ReducedSystem apply_constraints(const SystemBlocks& blocks,
                                const DofLayout& layout) {
  ReducedSystem rs;
  rs.n_uf = static_cast<int>(layout.free_u.size());
  rs.n_qf = static_cast<int>(layout.free_q.size());
  rs.n_p = layout.n_p;

  auto p_map = identity_map(layout.n_p);
  rs.A_ff = select(blocks.A_uu, layout.u_to_free, rs.n_uf, layout.u_to_free,
                   rs.n_uf);
  rs.B_f = select(blocks.B_up, layout.u_to_free, rs.n_uf, p_map, rs.n_p);
  rs.M_ff = select(blocks.M_qq, layout.q_to_free, rs.n_qf, layout.q_to_free,
                   rs.n_qf);
  rs.D_f = select(blocks.D_qp, p_map, rs.n_p, layout.q_to_free, rs.n_qf);

  // Symmetric indefinite saddle system over (free q, all p).
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(rs.M_ff.nonZeros() + 2 * rs.D_f.nonZeros() + rs.n_p);
  for (int k = 0; k < rs.M_ff.outerSize(); ++k)
    for (SpMat::InnerIterator it(rs.M_ff, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < rs.D_f.outerSize(); ++k)
    for (SpMat::InnerIterator it(rs.D_f, k); it; ++it) {
      trips.emplace_back(it.col(), rs.n_qf + it.row(), -it.value());
      trips.emplace_back(rs.n_qf + it.row(), it.col(), -it.value());
    }
  for (int j = 0; j < rs.n_p; ++j)
    trips.emplace_back(rs.n_qf + j, rs.n_qf + j, -blocks.M_pp[j]);
  rs.flow = SpMat(rs.n_qf + rs.n_p, rs.n_qf + rs.n_p);
  rs.flow.setFromTriplets(trips.begin(), trips.end());
  rs.flow.makeCompressed();
  return rs;
}

Vector restrict_u(const DofLayout& layout, const Vector& full) {
  Vector out(layout.free_u.size());
  for (size_t i = 0; i < layout.free_u.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = full[layout.free_u[i]];
  return out;
}

Vector expand_u(const DofLayout& layout, const Vector& reduced) {
  Vector out = Vector::Zero(layout.n_u);
  for (size_t i = 0; i < layout.free_u.size(); ++i)
    out[layout.free_u[i]] = reduced[static_cast<Eigen::Index>(i)];
  return out;
}

Vector restrict_q(const DofLayout& layout, const Vector& full) {
  Vector out(layout.free_q.size());
  for (size_t i = 0; i < layout.free_q.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = full[layout.free_q[i]];
  return out;
}

Vector expand_q(const DofLayout& layout, const Vector& reduced) {
  Vector out = Vector::Zero(layout.n_q);
  for (size_t i = 0; i < layout.free_q.size(); ++i)
    out[layout.free_q[i]] = reduced[static_cast<Eigen::Index>(i)];
  return out;
}

void dump_matrix_coords(const SpMat& A, std::ostream& out) {
  char buf[96];
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value());
      out << buf;
    }
  }
}

} // namespace biotfs
