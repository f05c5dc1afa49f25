#include "biotfs/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace biotfs {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
  case BoundaryTag::Top:
    return "Top";
  case BoundaryTag::Left:
    return "Left";
  case BoundaryTag::Bottom:
    return "Bottom";
  case BoundaryTag::LowerRight:
    return "LowerRight";
  case BoundaryTag::CutVertical:
    return "CutVertical";
  case BoundaryTag::CutHorizontal:
    return "CutHorizontal";
  }
  return "?";
}

bool Mesh::edge_is_vertical(int e) const {
  const Edge& ed = edges[e];
  return vertices[ed.v0].x == vertices[ed.v1].x;
}

Vec2 Mesh::edge_midpoint(int e) const {
  const Edge& ed = edges[e];
  return {0.5 * (vertices[ed.v0].x + vertices[ed.v1].x),
          0.5 * (vertices[ed.v0].y + vertices[ed.v1].y)};
}

Vec2 Mesh::cell_center(int c) const {
  const auto& cv = cells[c];
  return {0.5 * (vertices[cv[0]].x + vertices[cv[2]].x),
          0.5 * (vertices[cv[0]].y + vertices[cv[2]].y)};
}

namespace {

// Edges and boundary tags are derived from the cell list. Local edge order
// is {bottom, right, top, left}; the sign is the global edge normal (+x for
// vertical, +y for horizontal) against the cell outward normal.
// tag_of receives the face midpoint in doubled lattice coordinates
// (exact integers) and must identify every boundary face.
template <typename TagOf>
void finish_mesh(Mesh& mesh, double x_origin, double y_origin, TagOf tag_of) {
  std::map<std::pair<int, int>, int> edge_ids;
  std::vector<int> adjacency;

  auto edge_of = [&](int a, int b) {
    std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = edge_ids.find(key);
    if (it != edge_ids.end())
      return it->second;
    int id = mesh.num_edges();
    edge_ids.emplace(key, id);
    mesh.edges.push_back({key.first, key.second});
    adjacency.push_back(0);
    return id;
  };

  mesh.cell_edges.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells[c];
    CellEdges ce;
    ce.edge = {edge_of(v[0], v[1]), edge_of(v[1], v[2]), edge_of(v[3], v[2]),
               edge_of(v[0], v[3])};
    ce.sign = {-1.0, +1.0, +1.0, -1.0};
    for (int s = 0; s < 4; ++s)
      ++adjacency[ce.edge[s]];
    mesh.cell_edges[c] = ce;
  }

  const double inv_h2 = 2.0 / mesh.h;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (adjacency[e] != 1)
      continue;
    Vec2 m = mesh.edge_midpoint(e);
    int i2 = static_cast<int>(std::llround((m.x - x_origin) * inv_h2));
    int j2 = static_cast<int>(std::llround((m.y - y_origin) * inv_h2));
    mesh.boundary_faces.push_back({e, tag_of(i2, j2)});
  }
}

} // namespace

Mesh build_lshape_mesh(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument(
        "build_lshape_mesh: n must be even and >= 2, got " + std::to_string(n));

  Mesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / n;
  const int half = n / 2;

  // Vertex lattice (i, j) in [0, n]^2 minus the interior of the removed
  // quadrant (x > 0 and y > 0); numbering lexicographic by (y, x).
  std::vector<int> vid((n + 1) * (n + 1), -1);
  auto lat = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      if (i > half && j > half)
        continue;
      vid[lat(i, j)] = mesh.num_vertices();
      mesh.vertices.push_back({-0.5 + i * mesh.h, -0.5 + j * mesh.h});
    }
  }

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i >= half && j >= half)
        continue;
      mesh.cells.push_back({vid[lat(i, j)], vid[lat(i + 1, j)],
                            vid[lat(i + 1, j + 1)], vid[lat(i, j + 1)]});
    }
  }

  finish_mesh(mesh, -0.5, -0.5, [n, half](int i2, int j2) {
    if (j2 == 2 * n && i2 <= n)
      return BoundaryTag::Top;
    if (i2 == 0)
      return BoundaryTag::Left;
    if (j2 == 0)
      return BoundaryTag::Bottom;
    if (i2 == 2 * n && j2 <= n)
      return BoundaryTag::LowerRight;
    if (i2 == n && j2 >= n)
      return BoundaryTag::CutVertical;
    if (j2 == n && i2 >= n)
      return BoundaryTag::CutHorizontal;
    (void)half;
    throw std::logic_error("build_lshape_mesh: untaggable boundary face");
  });
  return mesh;
}

Mesh build_rect_mesh(int nx, int ny, double h, double x0, double y0) {
  if (nx < 1 || ny < 1 || h <= 0.0)
    throw std::invalid_argument("build_rect_mesh: need nx, ny >= 1 and h > 0");

  Mesh mesh;
  mesh.h = h;
  auto lat = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.push_back({x0 + i * h, y0 + j * h});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.cells.push_back(
          {lat(i, j), lat(i + 1, j), lat(i + 1, j + 1), lat(i, j + 1)});

  finish_mesh(mesh, x0, y0, [nx, ny](int i2, int j2) {
    if (j2 == 2 * ny)
      return BoundaryTag::Top;
    if (i2 == 0)
      return BoundaryTag::Left;
    if (j2 == 0)
      return BoundaryTag::Bottom;
    if (i2 == 2 * nx)
      return BoundaryTag::LowerRight;
    throw std::logic_error("build_rect_mesh: untaggable boundary face");
  });
  return mesh;
}

std::vector<int> boundary_faces_by_tag(const Mesh& mesh, BoundaryTag tag) {
  std::vector<int> out;
  for (const auto& bf : mesh.boundary_faces)
    if (bf.tag == tag)
      out.push_back(bf.edge);
  return out;
}

std::vector<int> vertices_on_tag(const Mesh& mesh, BoundaryTag tag) {
  std::vector<int> out;
  for (const auto& bf : mesh.boundary_faces) {
    if (bf.tag != tag)
      continue;
    out.push_back(mesh.edges[bf.edge].v0);
    out.push_back(mesh.edges[bf.edge].v1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void dump_mesh(const Mesh& mesh, std::ostream& out) {
  char buf[128];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::snprintf(buf, sizeof(buf), "%d %.17g %.17g\n", v, mesh.vertices[v].x,
                  mesh.vertices[v].y);
    out << buf;
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells[c];
    std::snprintf(buf, sizeof(buf), "%d %d %d %d %d\n", c, v[0], v[1], v[2],
                  v[3]);
    out << buf;
  }
}

} // namespace biotfs
