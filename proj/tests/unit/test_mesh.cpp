#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "iibm/mesh.hpp"

using namespace iibm;

namespace {
constexpr double kPi = 3.14159265358979323846;

double tri_area(const std::array<Vec2, 3>& v) {
  return 0.5 * ((v[1] - v[0]).x() * (v[2] - v[0]).y() -
                (v[1] - v[0]).y() * (v[2] - v[0]).x());
}

// Dense-sampling overlap oracle: fraction of a barycentric grid inside geom.
bool overlaps_domain(const std::array<Vec2, 3>& v, const ImmersedGeometry& g,
                     int levels = 40) {
  for (int i = 0; i <= levels; ++i)
    for (int j = 0; j <= levels - i; ++j) {
      const double l1 = double(i) / levels, l2 = double(j) / levels;
      const Vec2 x = v[0] + l1 * (v[1] - v[0]) + l2 * (v[2] - v[0]);
      if (g.inside(x)) return true;
    }
  return false;
}

ActiveMesh disk_mesh(double H, int refinements = 0) {
  const auto g = ImmersedGeometry::circle(1.0);
  Rect box = g.bounding_box();
  box.lo -= Vec2(2 * H, 2 * H);
  box.hi += Vec2(2 * H, 2 * H);
  BackgroundMesh bg = build_background(box, H);
  for (int i = 0; i < refinements; ++i) bg = bg.refined();
  return extract_active(bg, g);
}
}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("background mesh on the unit square") {
  const double H = 0.5 / std::sqrt(2.0);  // cell side 0.5 -> 2x2 cells
  const BackgroundMesh bg = build_background({{0, 0}, {1, 1}}, H);
  CHECK(bg.nx == 2);
  CHECK(bg.ny == 2);
  CHECK(bg.num_triangles() == 8);
  const BackgroundMesh fine = bg.refined();
  CHECK(fine.num_triangles() == 32);
  CHECK(fine.triangle_area() == doctest::Approx(bg.triangle_area() / 4));
  CHECK(bg.triangle_area() == doctest::Approx(H * H));
  for (int t = 0; t < bg.num_triangles(); ++t)
    CHECK(tri_area(bg.triangle(t)) > 0.0);  // CCW
  CHECK_THROWS(build_background({{0, 0}, {1, 1}}, 0.0));
}

TEST_CASE("active extraction covers the disk and nothing inactive overlaps") {
  const auto g = ImmersedGeometry::circle(1.0);
  const ActiveMesh m = disk_mesh(0.18);  // the shipped coarsest disk mesh
  CHECK(m.size() >= 100);
  CHECK(m.size() <= 300);
  CHECK(m.active_area() >= kPi);

  for (int t = 0; t < m.background.num_triangles(); ++t) {
    const bool overlap = overlaps_domain(m.background.triangle(t), g);
    if (m.active_of_bg[t] >= 0) continue;  // active may have zero overlap
    CHECK_FALSE(overlap);                  // inactive must not overlap
  }
  // every overlapping triangle is active
  for (int t = 0; t < m.background.num_triangles(); ++t)
    if (overlaps_domain(m.background.triangle(t), g))
      CHECK(m.active_of_bg[t] >= 0);
}

TEST_CASE("geometry covering the whole grid keeps every triangle active") {
  const auto g = ImmersedGeometry::circle(10.0);
  const BackgroundMesh bg = build_background({{-1, -1}, {1, 1}}, 0.25);
  const ActiveMesh m = extract_active(bg, g);
  CHECK(m.size() == bg.num_triangles());
  // boundary edges form the grid rectangle: total length = perimeter
  const double per = 2.0 * (bg.nx + bg.ny) * bg.cell;
  CHECK(m.boundary_perimeter() == doctest::Approx(per).epsilon(1e-12));
}

TEST_CASE("boundary passing exactly through grid vertices stays deterministic") {
  // grid vertices at multiples of 0.5 from -1.5: (+-1, 0), (0, +-1) lie on
  // the circle
  const auto g = ImmersedGeometry::circle(1.0);
  const BackgroundMesh bg{{-1.5, -1.5}, 0.5, 6, 6};
  const ActiveMesh m1 = extract_active(bg, g);
  const ActiveMesh m2 = extract_active(bg, g);
  CHECK(m1.elements == m2.elements);
  for (int t = 0; t < bg.num_triangles(); ++t)
    if (overlaps_domain(bg.triangle(t), g)) CHECK(m1.active_of_bg[t] >= 0);
}

TEST_CASE("coarsest study meshes are connected and simply connected") {
  auto topology = [](const ImmersedGeometry& g, double H) {
    Rect box = g.bounding_box();
    box.lo -= Vec2(2 * H, 2 * H);
    box.hi += Vec2(2 * H, 2 * H);
    const ActiveMesh m = extract_active(build_background(box, H), g);
    // connectivity via the interior-face graph
    std::vector<int> comp(m.size(), -1);
    std::vector<std::vector<int>> adj(m.size());
    for (const auto& fc : m.interior_faces) {
      adj[fc.plus].push_back(fc.minus);
      adj[fc.minus].push_back(fc.plus);
    }
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      for (int nb : adj[k])
        if (comp[nb] < 0) {
          comp[nb] = 0;
          stack.push_back(nb);
        }
    }
    const bool connected =
        std::count(comp.begin(), comp.end(), 0) == m.size();
    // Euler characteristic V - E + F = 1 for a triangulated disk
    auto key = [&](const Vec2& v) {
      const auto& bg = m.background;
      const long i = std::lround((v.x() - bg.origin.x()) / bg.cell * 2);
      const long j = std::lround((v.y() - bg.origin.y()) / bg.cell * 2);
      return i * 100000 + j;
    };
    std::set<long> verts;
    std::set<std::pair<long, long>> edges;
    for (int k = 0; k < m.size(); ++k) {
      const auto v = m.triangle(k);
      for (int e = 0; e < 3; ++e) {
        verts.insert(key(v[e]));
        long a = key(v[e]), b = key(v[(e + 1) % 3]);
        edges.insert({std::min(a, b), std::max(a, b)});
      }
    }
    const long euler = long(verts.size()) - long(edges.size()) + m.size();
    return std::make_pair(connected, euler);
  };
  const auto [conn_disk, euler_disk] =
      topology(ImmersedGeometry::circle(1.0), 0.18);
  CHECK(conn_disk);
  CHECK(euler_disk == 1);
  const auto [conn_star, euler_star] = topology(ImmersedGeometry::star(), 0.1);
  CHECK(conn_star);
  CHECK(euler_star == 1);
}

TEST_CASE("face lists partition each element's edges") {
  const ActiveMesh m = disk_mesh(0.2);
  std::map<std::pair<int, int>, int> count;
  for (const auto& be : m.boundary_edges) count[{be.elem, be.edge}]++;
  for (const auto& fc : m.interior_faces) {
    count[{fc.plus, fc.edge_plus}]++;
    count[{fc.minus, fc.edge_minus}]++;
    CHECK(fc.plus < fc.minus);
  }
  REQUIRE(int(count.size()) == 3 * m.size());
  for (const auto& [key, c] : count) CHECK(c == 1);
}

TEST_CASE("excess active area halves per refinement") {
  std::vector<double> excess;
  for (int r = 0; r < 4; ++r) {
    const ActiveMesh m = disk_mesh(0.2, r);
    excess.push_back(m.active_area() - kPi);
    CHECK(excess.back() > 0.0);
  }
  for (size_t i = 0; i + 1 < excess.size(); ++i) {
    const double ratio = excess[i] / excess[i + 1];
    CHECK(ratio > 1.5);
    CHECK(ratio < 3.0);
  }
}

TEST_CASE("hausdorff distance to the active boundary scales with h") {
  const auto g = ImmersedGeometry::circle(1.0);
  for (int r = 0; r < 4; ++r) {
    const ActiveMesh m = disk_mesh(0.2, r);
    const double dH = hausdorff_distance(g, m.boundary_polyline(), 2048);
    CHECK(dH <= 2.5 * m.h);
    CHECK(dH >= 0.05 * m.h);
  }
}

TEST_CASE("locate: centroids, edge tie rule, boundary quadrature points") {
  const auto g = ImmersedGeometry::circle(1.0);
  const ActiveMesh m = disk_mesh(0.2, 2);  // h = H/4

  for (int k = 0; k < m.size(); k += 7) {
    const auto v = m.triangle(k);
    CHECK(m.locate((v[0] + v[1] + v[2]) / 3.0) == k);
  }

  // midpoint of a shared edge resolves to the lower active index
  const auto& fc = m.interior_faces.front();
  const auto ep = m.edge_endpoints(fc.plus, fc.edge_plus);
  CHECK(m.locate(0.5 * (ep[0] + ep[1])) == std::min(fc.plus, fc.minus));

  // all boundary-segmentation quadrature points locate, and agree with a
  // brute-force scan over all active triangles
  const auto seg = segment_boundary(g, 160, 2);
  for (const auto& q : seg.points) {
    const int k = m.locate(q.x);
    int brute = -1;
    for (int j = 0; j < m.size() && brute < 0; ++j) {
      const auto v = m.triangle(j);
      const double A = 2.0 * tri_area(v);
      bool in = true;
      for (int e = 0; e < 3 && in; ++e) {
        const Vec2 a = v[e], b = v[(e + 1) % 3];
        const double cr = (b - a).x() * (q.x - a).y() - (b - a).y() * (q.x - a).x();
        in = cr / A >= -1e-12;
      }
      if (in) brute = j;
    }
    CHECK(k == brute);
  }

  CHECK_THROWS(m.locate(Vec2(5, 5)));
}

TEST_CASE("empty active set is rejected") {
  const auto g = ImmersedGeometry::circle(0.01, Vec2(50, 50));
  const BackgroundMesh bg = build_background({{-1, -1}, {1, 1}}, 0.25);
  CHECK_THROWS(extract_active(bg, g));
}

TEST_SUITE_END();
