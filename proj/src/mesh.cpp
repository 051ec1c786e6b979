#include "iibm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iibm {

namespace {
constexpr double kInsideTol = 1e-12;
constexpr double kSqrt2 = 1.41421356237309504880;
}  // namespace

double BackgroundMesh::nominal_size() const { return cell / kSqrt2; }

std::array<Vec2, 3> BackgroundMesh::triangle(int t) const {
  const int c = t / 2;
  const int i = c % nx, j = c / nx;
  const Vec2 v00 = origin + cell * Vec2(i, j);
  const Vec2 v10 = v00 + Vec2(cell, 0);
  const Vec2 v11 = v00 + Vec2(cell, cell);
  const Vec2 v01 = v00 + Vec2(0, cell);
  if (t % 2 == 0) return {v00, v10, v11};  // lower
  return {v00, v11, v01};                  // upper
}

BackgroundMesh BackgroundMesh::refined() const {
  return {origin, cell / 2.0, nx * 2, ny * 2};
}

BackgroundMesh build_background(const Rect& bounds, double H) {
  if (H <= 0.0) throw std::invalid_argument("build_background: H must be positive");
  BackgroundMesh m;
  m.cell = H * kSqrt2;
  m.origin = bounds.lo;
  m.nx = std::max(1, int(std::ceil(bounds.width() / m.cell - 1e-12)));
  m.ny = std::max(1, int(std::ceil(bounds.height() / m.cell - 1e-12)));
  return m;
}

std::array<Vec2, 3> ActiveMesh::triangle(int k) const {
  return background.triangle(elements[k]);
}

std::array<Vec2, 2> ActiveMesh::edge_endpoints(int k, int e) const {
  const auto v = triangle(k);
  return {v[e], v[(e + 1) % 3]};
}

double ActiveMesh::edge_length(int k, int e) const {
  const auto ep = edge_endpoints(k, e);
  return (ep[1] - ep[0]).norm();
}

Vec2 ActiveMesh::outward_normal(int k, int e) const {
  const auto ep = edge_endpoints(k, e);
  const Vec2 d = ep[1] - ep[0];
  return Vec2(d.y(), -d.x()).normalized();
}

double ActiveMesh::boundary_perimeter() const {
  double s = 0.0;
  for (const auto& be : boundary_edges) s += edge_length(be.elem, be.edge);
  return s;
}

std::vector<Segment> ActiveMesh::boundary_polyline() const {
  std::vector<Segment> out;
  out.reserve(boundary_edges.size());
  for (const auto& be : boundary_edges) {
    const auto ep = edge_endpoints(be.elem, be.edge);
    out.push_back({ep[0], ep[1]});
  }
  return out;
}

namespace {
// Neighbor background-triangle id across local edge e, or -1 outside the grid.
int neighbor_of(const BackgroundMesh& bg, int t, int e) {
  const int c = t / 2;
  const int i = c % bg.nx, j = c / bg.nx;
  int ni = i, nj = j;
  bool upper;
  if (t % 2 == 0) {  // lower triangle (v00,v10,v11)
    switch (e) {
      case 0: nj = j - 1; upper = true; break;   // bottom
      case 1: ni = i + 1; upper = true; break;   // right
      default: upper = true; break;              // diagonal, same cell
    }
  } else {  // upper triangle (v00,v11,v01)
    switch (e) {
      case 0: upper = false; break;              // diagonal, same cell
      case 1: nj = j + 1; upper = false; break;  // top
      default: ni = i - 1; upper = false; break; // left
    }
  }
  if (ni < 0 || ni >= bg.nx || nj < 0 || nj >= bg.ny) return -1;
  return 2 * (nj * bg.nx + ni) + (upper ? 1 : 0);
}

bool barycentric_inside(const std::array<Vec2, 3>& v, const Vec2& x, double tol) {
  const double area2 = (v[1] - v[0]).x() * (v[2] - v[0]).y() -
                       (v[1] - v[0]).y() * (v[2] - v[0]).x();
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = v[e], b = v[(e + 1) % 3];
    const double cross = (b - a).x() * (x - a).y() - (b - a).y() * (x - a).x();
    if (cross / area2 < -tol) return false;
  }
  return true;
}
}  // namespace

int ActiveMesh::locate(const Vec2& x) const {
  const auto& bg = background;
  const int ci = int(std::floor((x.x() - bg.origin.x()) / bg.cell));
  const int cj = int(std::floor((x.y() - bg.origin.y()) / bg.cell));
  int found = -1;
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int i = ci + di, j = cj + dj;
      if (i < 0 || i >= bg.nx || j < 0 || j >= bg.ny) continue;
      for (int half = 0; half < 2; ++half) {
        const int t = 2 * (j * bg.nx + i) + half;
        const int k = active_of_bg[t];
        if (k < 0) continue;
        if (barycentric_inside(bg.triangle(t), x, 1e-12) &&
            (found < 0 || k < found))
          found = k;
      }
    }
  }
  if (found < 0)
    throw std::runtime_error("locate: point outside the active mesh");
  return found;
}

ActiveMesh extract_active(const BackgroundMesh& bg, const ImmersedGeometry& geom) {
  ActiveMesh m;
  m.background = bg;
  m.active_of_bg.assign(bg.num_triangles(), -1);
  m.h = std::sqrt(bg.triangle_area());

  for (int t = 0; t < bg.num_triangles(); ++t) {
    const auto v = bg.triangle(t);
    bool active = false;
    for (int k = 0; k < 3 && !active; ++k)
      active = geom.level(v[k]) < kInsideTol;
    for (int e = 0; e < 3 && !active; ++e)
      active = geom.min_level_on_segment(v[e], v[(e + 1) % 3]) < -kInsideTol;
    if (active) {
      m.active_of_bg[t] = int(m.elements.size());
      m.elements.push_back(t);
    }
  }
  if (m.elements.empty())
    throw std::runtime_error("extract_active: no triangle intersects the domain");

  for (int k = 0; k < m.size(); ++k) {
    const int t = m.elements[k];
    for (int e = 0; e < 3; ++e) {
      const int nt = neighbor_of(bg, t, e);
      const int nk = nt >= 0 ? m.active_of_bg[nt] : -1;
      if (nk < 0) {
        m.boundary_edges.push_back({k, e});
      } else if (t < nt) {
        // locate the matching local edge on the neighbor
        int ne = -1;
        for (int f = 0; f < 3; ++f)
          if (neighbor_of(bg, nt, f) == t) ne = f;
        m.interior_faces.push_back({k, nk, e, ne});
      }
    }
  }
  return m;
}

}  // namespace iibm
