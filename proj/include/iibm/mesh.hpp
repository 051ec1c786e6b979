#pragma once

#include <array>
#include <vector>

#include "iibm/geometry.hpp"

namespace iibm {

/// Uniform triangulation of a rectangle: squares of side H*sqrt(2), each split
/// along the (lower-left -> upper-right) diagonal into two congruent right
/// triangles of area H^2. Triangles are stored implicitly; cell (i,j) owns
/// triangles 2*(j*nx+i) (lower) and 2*(j*nx+i)+1 (upper), both CCW.
struct BackgroundMesh {
  Vec2 origin{0, 0};
  double cell = 0;  // square side
  int nx = 0, ny = 0;

  int num_triangles() const { return 2 * nx * ny; }
  double triangle_area() const { return 0.5 * cell * cell; }
  double nominal_size() const;  // h = sqrt(triangle area)
  std::array<Vec2, 3> triangle(int t) const;
  /// Each triangle replaced by 4 similar ones (grid doubled, same bounds).
  BackgroundMesh refined() const;
};

BackgroundMesh build_background(const Rect& bounds, double H);

/// Active subset of a background mesh: triangles interior to or cut by the
/// immersed boundary, plus its face lists.
struct ActiveMesh {
  BackgroundMesh background;
  std::vector<int> elements;       // background triangle ids, ascending
  std::vector<int> active_of_bg;   // background id -> active index or -1
  struct BoundaryEdge {
    int elem;  // active element index
    int edge;  // local edge 0..2 (vertex k -> k+1 mod 3)
  };
  struct InteriorFace {
    int plus, minus;            // active element indices, plus < minus
    int edge_plus, edge_minus;  // local edges on each side
  };
  std::vector<BoundaryEdge> boundary_edges;   // the mesh boundary
  std::vector<InteriorFace> interior_faces;
  double h = 0;

  int size() const { return int(elements.size()); }
  std::array<Vec2, 3> triangle(int k) const;
  std::array<Vec2, 2> edge_endpoints(int k, int e) const;
  double edge_length(int k, int e) const;
  Vec2 outward_normal(int k, int e) const;
  double active_area() const { return size() * background.triangle_area(); }
  double boundary_perimeter() const;
  std::vector<Segment> boundary_polyline() const;

  /// Active index of a triangle containing x; points on shared edges resolve
  /// to the lowest active index. Throws std::runtime_error if x lies outside
  /// the active region.
  int locate(const Vec2& x) const;
};

/// Collects {K : K intersects the closed domain} via the vertex sign test
/// (|level| < 1e-12 counts as inside) plus an edge-curve intersection test.
ActiveMesh extract_active(const BackgroundMesh& bg, const ImmersedGeometry& geom);

}  // namespace iibm
