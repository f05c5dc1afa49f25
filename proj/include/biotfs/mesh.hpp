#pragma once

#include <array>
#include <iosfwd>
#include <vector>

namespace biotfs {

/// Physical role of a boundary face of the L-shaped domain
/// Omega = (-0.5,0.5)^2 \ [0,0.5]^2 (lengths in meters). The six tags
/// partition the boundary; a corner vertex belongs to the first matching
/// tag in enum order.
enum class BoundaryTag {
  Top,           ///< y = 0.5, -0.5 <= x <= 0
  Left,          ///< x = -0.5
  Bottom,        ///< y = -0.5
  LowerRight,    ///< x = 0.5, -0.5 <= y <= 0
  CutVertical,   ///< x = 0,  0 <= y <= 0.5
  CutHorizontal, ///< y = 0,  0 <= x <= 0.5
};

const char* to_string(BoundaryTag tag);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Undirected edge with v0 < v1. The fixed global normal is +x for
/// vertical edges and +y for horizontal ones.
struct Edge {
  int v0 = -1;
  int v1 = -1;
};

/// Edge indices of one cell in local order {bottom, right, top, left},
/// with the sign of the global edge normal against the cell outward normal.
struct CellEdges {
  std::array<int, 4> edge{};
  std::array<double, 4> sign{};
};

struct BoundaryFace {
  int edge = -1;
  BoundaryTag tag = BoundaryTag::Top;
};

/// Structured axis-aligned quadrilateral mesh with square cells of side h.
/// Vertices and cells are numbered lexicographically by (y, x); the mesh is
/// immutable after construction and safe to share between concurrent runs.
struct Mesh {
  double h = 0.0;
  int n = 0; ///< cells per unit length for the L-shape builder, 0 otherwise
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 4>> cells; ///< ccw: lower-left, lower-right, upper-right, upper-left
  std::vector<Edge> edges;
  std::vector<CellEdges> cell_edges;
  std::vector<BoundaryFace> boundary_faces;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  bool edge_is_vertical(int e) const;
  Vec2 edge_midpoint(int e) const;
  Vec2 cell_center(int c) const;
};

/// Build the structured quadrilateral mesh of the L-shaped domain with n
/// cells per unit length. n must be even and >= 2 so the re-entrant corner
/// lies on grid lines; the cell count is 3*(n/2)^2.
Mesh build_lshape_mesh(int n);

/// Rectangular companion mesh: nx x ny square cells of side h, lower-left
/// corner at (x0, y0). Used by column benchmarks and convergence studies.
/// The full top edge is tagged Top and the full right edge LowerRight;
/// there are no cut faces.
Mesh build_rect_mesh(int nx, int ny, double h, double x0 = 0.0, double y0 = 0.0);

/// Edge indices of all boundary faces carrying the tag.
std::vector<int> boundary_faces_by_tag(const Mesh& mesh, BoundaryTag tag);

/// Vertices incident to at least one boundary face carrying the tag,
/// sorted ascending.
std::vector<int> vertices_on_tag(const Mesh& mesh, BoundaryTag tag);

/// Plain-text debug dump: one vertex per line "id x y", then one cell per
/// line "id v0 v1 v2 v3".
void dump_mesh(const Mesh& mesh, std::ostream& out);

} // namespace biotfs
