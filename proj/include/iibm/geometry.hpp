#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace iibm {

using Vec2 = Eigen::Vector2d;

struct Rect {
  Vec2 lo, hi;
  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
};

enum class ShapeKind { Circle, Ellipse, Star, LShape };

/// Analytic immersed boundary: a simple closed curve traversed
/// counterclockwise by boundary_point(t), t in [0,1).
class ImmersedGeometry {
 public:
  static ImmersedGeometry circle(double radius, const Vec2& center = {0, 0});
  static ImmersedGeometry ellipse(double a, double b, const Vec2& center = {0, 0});
  /// Polar curve r(theta) = r0 + r1*cos(lobes*theta), requires r0 > r1 > 0.
  static ImmersedGeometry star(double r0 = 0.65, double r1 = 0.25, int lobes = 5,
                               const Vec2& center = {0, 0});
  /// (-1,1)^2 minus the closed quadrant {x >= 0, y <= 0}; concave corner at
  /// the center.
  static ImmersedGeometry lshape(const Vec2& center = {0, 0});

  ShapeKind kind() const { return kind_; }
  const Vec2& center() const { return center_; }

  /// Level function: negative strictly inside, zero on the boundary. Exact
  /// signed distance for the circle; a smooth sign-equivalent for the others.
  double level(const Vec2& x) const;
  bool inside(const Vec2& x) const { return level(x) < 0.0; }

  Vec2 boundary_point(double t) const;
  Vec2 boundary_velocity(double t) const;  // d/dt boundary_point
  Vec2 outward_normal(double t) const;

  double perimeter() const { return perimeter_; }
  /// Inverse of the cumulative arc length: s in [0, perimeter] -> t.
  double param_at_arclength(double s) const;

  Rect bounding_box() const;
  /// Number of boundary corners (0 for the smooth shapes, 6 for the L-shape).
  int corner_count() const;
  /// Corner parameters in [0,1), ascending (empty for smooth shapes).
  std::span<const double> corner_params() const { return corner_t_; }

  /// Minimum of level() along the segment [p,q]. Exact for circle/ellipse,
  /// sampled with local refinement for star/L-shape.
  double min_level_on_segment(const Vec2& p, const Vec2& q) const;

  // Shape parameters (meaningful fields depend on kind).
  double radius() const { return radius_; }
  double semi_major() const { return a_; }
  double semi_minor() const { return b_; }

 private:
  ImmersedGeometry() = default;
  void build_arclength_table();

  ShapeKind kind_ = ShapeKind::Circle;
  Vec2 center_{0, 0};
  double radius_ = 0, a_ = 0, b_ = 0, r0_ = 0, r1_ = 0;
  int lobes_ = 0;
  double perimeter_ = 0;
  std::vector<double> arc_;        // cumulative arc length at uniform t
  std::vector<double> corner_t_;   // lshape corner parameters
  std::vector<Vec2> verts_;        // lshape boundary vertices (CCW)
  std::vector<double> vert_s_;     // cumulative arc length at verts_
};

/// Uniform-in-arc-length subdivision of the boundary with per-segment Gauss
/// points placed on the true curve; weights carry the true arc measure.
struct BoundarySegmentation {
  int n_segments = 0;
  double h_gamma = 0;  // perimeter / n_segments
  std::vector<Vec2> endpoints;
  struct QuadraturePoint {
    Vec2 x;
    double w;
    Vec2 normal;  // outward normal of the curve at x
  };
  std::vector<QuadraturePoint> points;

  double total_weight() const;
  double total_chord_length() const;
};

/// n_segments >= 3 endpoints equally spaced in arc length; the per-segment
/// Gauss rule uses ceil((p+1)/2) points (exact for degree p). For the
/// L-shape, n_segments must be a multiple of 8 so that every corner is a
/// segment endpoint.
BoundarySegmentation segment_boundary(const ImmersedGeometry& geom,
                                      int n_segments, int p);

struct Segment {
  Vec2 a, b;
};

/// Symmetric Hausdorff distance between the analytic boundary and a polygonal
/// curve, by dense sampling (>= `samples` per curve) with exact
/// point-to-segment distances.
double hausdorff_distance(const ImmersedGeometry& geom,
                          std::span<const Segment> curve, int samples = 4096);

/// Hausdorff distance between two analytic boundaries. Concentric circles are
/// handled exactly; other pairs fall back to dense sampling.
double hausdorff_distance(const ImmersedGeometry& g1,
                          const ImmersedGeometry& g2, int samples = 4096);

/// Densely sampled polyline of the boundary (uniform in arc length).
std::vector<Segment> sample_boundary(const ImmersedGeometry& geom, int samples);

}  // namespace iibm
