#pragma once

#include <functional>
#include <iosfwd>
#include <map>

#include "biotfs/linear_solver.hpp"
#include "biotfs/materials.hpp"
#include "biotfs/mesh.hpp"

namespace biotfs {

// Discrete spaces: vector Q1 for displacement (2 dofs per vertex, x then y),
// P0 for pressure (1 dof per cell), RT0 for flux (1 normal-flux-density dof
// per edge, signed along the global edge normal).

/// Boundary conditions attached to one boundary tag. Mechanics: clamp_x /
/// clamp_y pin that displacement component to zero at every vertex of the
/// tagged faces (normal-displacement rollers). Flow: no_flow pins the RT0
/// normal flux to zero; otherwise the pressure value p_dirichlet acts
/// naturally through the mixed form.
struct TagBc {
  bool clamp_x = false;
  bool clamp_y = false;
  bool no_flow = true;
  double p_dirichlet = 0.0;
};

using BcTable = std::map<BoundaryTag, TagBc>;

/// Dof counts and the constrained/free split for the three fields.
/// A displacement dof id is 2*vertex + component. All prescribed values
/// are zero for every supported condition set.
struct DofLayout {
  int n_u = 0;
  int n_p = 0;
  int n_q = 0;
  std::vector<int> constrained_u; ///< ascending dof ids
  std::vector<int> constrained_q; ///< ascending edge ids
  std::vector<int> free_u;
  std::vector<int> free_q;
  std::vector<int> u_to_free; ///< full -> reduced index, -1 if constrained
  std::vector<int> q_to_free;
};

DofLayout build_dof_layout(const Mesh& mesh, const BcTable& bcs);

struct LoadVectors {
  Vector f_u; ///< n_u
  Vector f_q; ///< n_q
  Vector f_p; ///< n_p, cell-integrated mass source
};

/// Assembled bilinear-form blocks. Matrices are full-size (constraints are
/// applied separately); M_pp and storage_pp are diagonal P0 matrices stored
/// as vectors, with the backward-Euler 1/dt folded in.
struct SystemBlocks {
  SpMat A_uu;        ///< elasticity stiffness, 2 mu eps:eps + lambda div div
  SpMat B_up;        ///< alpha * (div u, p) pairing, n_u x n_p
  SpMat M_qq;        ///< RT0 mass scaled by eta/k
  SpMat D_qp;        ///< (div q, p) pairing, entries +-|edge|, n_p x n_q
  Vector M_pp;       ///< (1/M + alpha^2/K_dr) |cell| / dt
  Vector storage_pp; ///< (1/M) |cell| / dt
  LoadVectors loads; ///< most recent loads stored by the caller
};

SpMat assemble_elasticity(const Mesh& mesh, const DofLayout& layout, double mu,
                          double lambda);
SpMat assemble_coupling(const Mesh& mesh, const DofLayout& layout, double alpha);
SpMat assemble_rt0_mass(const Mesh& mesh, const DofLayout& layout,
                        double eta_over_k);
SpMat assemble_divergence(const Mesh& mesh, const DofLayout& layout);
Vector cell_volumes(const Mesh& mesh);

/// M_qq, D_qp, M_pp and storage_pp for the given tuning parameter and step.
SystemBlocks assemble_flow_blocks(const Mesh& mesh, const DofLayout& layout,
                                  const MaterialParams& params, double kdr,
                                  double dt);

/// All blocks of the three-field system.
SystemBlocks assemble_all_blocks(const Mesh& mesh, const DofLayout& layout,
                                 const MaterialParams& params, double kdr,
                                 double dt);

// ---- load assembly primitives ------------------------------------------

LoadVectors zero_loads(const DofLayout& layout);

/// Constant traction (tx, ty) integrated against Q1 traces on the tagged
/// faces; each face endpoint receives t * h/2.
void add_traction(const Mesh& mesh, BoundaryTag tag, double tx, double ty,
                  LoadVectors& out);

/// Mixed-form pressure Dirichlet boundary term -int p_D (w . n) on the
/// tagged faces.
void add_pressure_dirichlet_term(const Mesh& mesh, BoundaryTag tag,
                                 double p_value, LoadVectors& out);

/// Volume loads rho_b g . v into f_u and rho_f g . w into f_q.
void add_gravity(const Mesh& mesh, const MaterialParams& params,
                 LoadVectors& out);

void add_volume_load_u(const Mesh& mesh,
                       const std::function<Vec2(double, double)>& f,
                       LoadVectors& out);
void add_volume_source_p(const Mesh& mesh,
                         const std::function<double(double, double)>& f,
                         LoadVectors& out);

// ---- constraint application ---------------------------------------------

/// Systems on free dofs after symmetric elimination of the homogeneous
/// constraints. flow is the symmetric indefinite saddle system
/// [[M_qq_ff, -D_f^T], [-D_f, -diag(M_pp)]] over (free q, all p).
struct ReducedSystem {
  SpMat A_ff;
  SpMat B_f;  ///< free-u rows of B_up
  SpMat M_ff; ///< free q block of M_qq
  SpMat D_f;  ///< free q columns of D_qp
  SpMat flow;
  int n_uf = 0;
  int n_qf = 0;
  int n_p = 0;
};

ReducedSystem apply_constraints(const SystemBlocks& blocks,
                                const DofLayout& layout);

Vector restrict_u(const DofLayout& layout, const Vector& full);
Vector expand_u(const DofLayout& layout, const Vector& reduced);
Vector restrict_q(const DofLayout& layout, const Vector& full);
Vector expand_q(const DofLayout& layout, const Vector& reduced);

/// Debug dump as "row col value" coordinate triples.
void dump_matrix_coords(const SpMat& A, std::ostream& out);

} // namespace biotfs
