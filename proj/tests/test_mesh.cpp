#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "biotfs/mesh.hpp"

using namespace biotfs;

TEST_CASE("L-shape mesh counts") {
  // n=16: uniform grid minus the removed 8x8 block.
  Mesh m16 = build_lshape_mesh(16);
  CHECK(m16.num_cells() == 192);
  CHECK(m16.n == 16);
  CHECK(m16.h == doctest::Approx(1.0 / 16).epsilon(1e-15));

  // n=2: the 3-cell L enumerated by hand.
  Mesh m2 = build_lshape_mesh(2);
  CHECK(m2.num_cells() == 3);
  CHECK(m2.num_vertices() == 8);
  CHECK(m2.num_edges() == 10);
}

TEST_CASE("L-shape mesh rejects bad n") {
  CHECK_THROWS_AS(build_lshape_mesh(3), std::invalid_argument);
  CHECK_THROWS_AS(build_lshape_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(build_lshape_mesh(-4), std::invalid_argument);
}

TEST_CASE("boundary tag counts") {
  Mesh m16 = build_lshape_mesh(16);
  CHECK(boundary_faces_by_tag(m16, BoundaryTag::Top).size() == 8);

  Mesh m2 = build_lshape_mesh(2);
  CHECK(boundary_faces_by_tag(m2, BoundaryTag::Left).size() == 2);
  CHECK(boundary_faces_by_tag(m2, BoundaryTag::Top).size() == 1);
  CHECK(boundary_faces_by_tag(m2, BoundaryTag::CutVertical).size() == 1);
  CHECK(m2.boundary_faces.size() == 8);
}

TEST_CASE("per-tag face count equals segment length times n") {
  const std::map<BoundaryTag, double> lengths = {
      {BoundaryTag::Top, 0.5},        {BoundaryTag::Left, 1.0},
      {BoundaryTag::Bottom, 1.0},     {BoundaryTag::LowerRight, 0.5},
      {BoundaryTag::CutVertical, 0.5}, {BoundaryTag::CutHorizontal, 0.5}};
  for (int n : {2, 4, 8, 16}) {
    Mesh m = build_lshape_mesh(n);
    for (const auto& [tag, len] : lengths)
      CHECK(boundary_faces_by_tag(m, tag).size() ==
            static_cast<size_t>(std::lround(len * n)));
  }
}

TEST_CASE("Euler characteristic and perimeter") {
  for (int n : {2, 4, 6, 10, 16, 22}) {
    Mesh m = build_lshape_mesh(n);
    CHECK(m.num_vertices() - m.num_edges() + m.num_cells() == 1);
    double perimeter = 0.0;
    for (const auto& bf : m.boundary_faces) {
      const Edge& e = m.edges[bf.edge];
      perimeter += std::abs(m.vertices[e.v1].x - m.vertices[e.v0].x) +
                   std::abs(m.vertices[e.v1].y - m.vertices[e.v0].y);
    }
    CHECK(perimeter == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("edges shared by at most two cells, boundary by exactly one") {
  Mesh m = build_lshape_mesh(6);
  std::vector<int> adjacency(m.num_edges(), 0);
  for (const auto& ce : m.cell_edges)
    for (int e : ce.edge)
      ++adjacency[e];
  std::vector<bool> is_boundary(m.num_edges(), false);
  for (const auto& bf : m.boundary_faces)
    is_boundary[bf.edge] = true;
  for (int e = 0; e < m.num_edges(); ++e) {
    CHECK(adjacency[e] >= 1);
    CHECK(adjacency[e] <= 2);
    CHECK(is_boundary[e] == (adjacency[e] == 1));
  }
}

TEST_CASE("cells are axis-aligned ccw squares of side 1/n") {
  Mesh m = build_lshape_mesh(4);
  for (const auto& cell : m.cells) {
    Vec2 ll = m.vertices[cell[0]], lr = m.vertices[cell[1]];
    Vec2 ur = m.vertices[cell[2]], ul = m.vertices[cell[3]];
    CHECK(lr.x - ll.x == doctest::Approx(m.h).epsilon(1e-14));
    CHECK(lr.y == doctest::Approx(ll.y));
    CHECK(ur.x == doctest::Approx(lr.x));
    CHECK(ur.y - lr.y == doctest::Approx(m.h).epsilon(1e-14));
    CHECK(ul.x == doctest::Approx(ll.x));
    CHECK(ul.y == doctest::Approx(ur.y));
  }
}

TEST_CASE("every boundary face carries exactly one tag") {
  Mesh m = build_lshape_mesh(8);
  size_t total = 0;
  for (BoundaryTag tag :
       {BoundaryTag::Top, BoundaryTag::Left, BoundaryTag::Bottom,
        BoundaryTag::LowerRight, BoundaryTag::CutVertical,
        BoundaryTag::CutHorizontal})
    total += boundary_faces_by_tag(m, tag).size();
  CHECK(total == m.boundary_faces.size());
}

TEST_CASE("boundary_faces_by_tag matches midpoint predicates") {
  Mesh m = build_lshape_mesh(8);
  auto on = [&](int e, BoundaryTag tag) {
    Vec2 mid = m.edge_midpoint(e);
    const double eps = 1e-12;
    switch (tag) {
    case BoundaryTag::Top:
      return std::abs(mid.y - 0.5) < eps && mid.x <= eps;
    case BoundaryTag::Left:
      return std::abs(mid.x + 0.5) < eps;
    case BoundaryTag::Bottom:
      return std::abs(mid.y + 0.5) < eps;
    case BoundaryTag::LowerRight:
      return std::abs(mid.x - 0.5) < eps && mid.y <= eps;
    case BoundaryTag::CutVertical:
      return std::abs(mid.x) < eps && mid.y >= -eps;
    case BoundaryTag::CutHorizontal:
      return std::abs(mid.y) < eps && mid.x >= -eps;
    }
    return false;
  };
  for (const auto& bf : m.boundary_faces)
    CHECK(on(bf.edge, bf.tag));
}

TEST_CASE("rectangle mesh for the companion studies") {
  Mesh m = build_rect_mesh(3, 5, 0.25, 1.0, -2.0);
  CHECK(m.num_cells() == 15);
  CHECK(m.num_vertices() == 24);
  CHECK(m.num_vertices() - m.num_edges() + m.num_cells() == 1);
  CHECK(boundary_faces_by_tag(m, BoundaryTag::Top).size() == 3);
  CHECK(boundary_faces_by_tag(m, BoundaryTag::LowerRight).size() == 5);
  CHECK(boundary_faces_by_tag(m, BoundaryTag::CutVertical).empty());
}

TEST_CASE("mesh dump format") {
  Mesh m = build_lshape_mesh(2);
  std::ostringstream out;
  dump_mesh(m, out);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    ++lines;
  CHECK(lines == m.num_vertices() + m.num_cells());
  CHECK(out.str().rfind("0 -0.5 -0.5\n", 0) == 0);
}
