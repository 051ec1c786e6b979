#include "iibm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "iibm/quadrature.hpp"

namespace iibm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kArcTableSize = 2048;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double s = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + s * d)).norm();
}
}  // namespace

ImmersedGeometry ImmersedGeometry::circle(double radius, const Vec2& center) {
  if (radius <= 0.0) throw std::invalid_argument("circle: radius must be positive");
  ImmersedGeometry g;
  g.kind_ = ShapeKind::Circle;
  g.center_ = center;
  g.radius_ = radius;
  g.perimeter_ = 2.0 * kPi * radius;
  return g;
}

ImmersedGeometry ImmersedGeometry::ellipse(double a, double b, const Vec2& center) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("ellipse: axes must be positive");
  ImmersedGeometry g;
  g.kind_ = ShapeKind::Ellipse;
  g.center_ = center;
  g.a_ = a;
  g.b_ = b;
  g.build_arclength_table();
  return g;
}

ImmersedGeometry ImmersedGeometry::star(double r0, double r1, int lobes,
                                        const Vec2& center) {
  if (!(r0 > r1 && r1 > 0.0))
    throw std::invalid_argument("star: requires r0 > r1 > 0");
  if (lobes < 2) throw std::invalid_argument("star: lobes must be >= 2");
  ImmersedGeometry g;
  g.kind_ = ShapeKind::Star;
  g.center_ = center;
  g.r0_ = r0;
  g.r1_ = r1;
  g.lobes_ = lobes;
  g.build_arclength_table();
  return g;
}

ImmersedGeometry ImmersedGeometry::lshape(const Vec2& center) {
  ImmersedGeometry g;
  g.kind_ = ShapeKind::LShape;
  g.center_ = center;
  // CCW from the concave corner; edge lengths 1,1,2,2,1,1 (perimeter 8).
  g.verts_ = {center + Vec2(0, 0),  center + Vec2(1, 0),  center + Vec2(1, 1),
              center + Vec2(-1, 1), center + Vec2(-1, -1), center + Vec2(0, -1)};
  g.vert_s_.resize(7);
  g.vert_s_[0] = 0.0;
  for (int i = 0; i < 6; ++i) {
    const Vec2& a = g.verts_[i];
    const Vec2& b = g.verts_[(i + 1) % 6];
    g.vert_s_[i + 1] = g.vert_s_[i] + (b - a).norm();
  }
  g.perimeter_ = g.vert_s_[6];
  g.corner_t_.resize(6);
  for (int i = 0; i < 6; ++i) g.corner_t_[i] = g.vert_s_[i] / g.perimeter_;
  return g;
}

double ImmersedGeometry::level(const Vec2& x) const {
  const Vec2 d = x - center_;
  switch (kind_) {
    case ShapeKind::Circle:
      return d.norm() - radius_;
    case ShapeKind::Ellipse:
      return (d.x() / a_) * (d.x() / a_) + (d.y() / b_) * (d.y() / b_) - 1.0;
    case ShapeKind::Star: {
      const double rho = d.norm();
      const double theta = std::atan2(d.y(), d.x());
      return rho - (r0_ + r1_ * std::cos(lobes_ * theta));
    }
    case ShapeKind::LShape:
      // Box (-1,1)^2 intersected with the complement of the closed fourth
      // quadrant; max/min keep the sign semantics.
      return std::max({std::abs(d.x()) - 1.0, std::abs(d.y()) - 1.0,
                       std::min(d.x(), -d.y())});
  }
  return 0.0;
}

Vec2 ImmersedGeometry::boundary_point(double t) const {
  t -= std::floor(t);
  switch (kind_) {
    case ShapeKind::Circle: {
      const double th = 2.0 * kPi * t;
      return center_ + radius_ * Vec2(std::cos(th), std::sin(th));
    }
    case ShapeKind::Ellipse: {
      const double th = 2.0 * kPi * t;
      return center_ + Vec2(a_ * std::cos(th), b_ * std::sin(th));
    }
    case ShapeKind::Star: {
      const double th = 2.0 * kPi * t;
      const double r = r0_ + r1_ * std::cos(lobes_ * th);
      return center_ + r * Vec2(std::cos(th), std::sin(th));
    }
    case ShapeKind::LShape: {
      const double s = t * perimeter_;
      int e = int(std::upper_bound(vert_s_.begin(), vert_s_.end(), s) -
                  vert_s_.begin()) - 1;
      e = std::clamp(e, 0, 5);
      const Vec2& a = verts_[e];
      const Vec2& b = verts_[(e + 1) % 6];
      const double len = vert_s_[e + 1] - vert_s_[e];
      return a + ((s - vert_s_[e]) / len) * (b - a);
    }
  }
  return center_;
}

Vec2 ImmersedGeometry::boundary_velocity(double t) const {
  t -= std::floor(t);
  switch (kind_) {
    case ShapeKind::Circle: {
      const double th = 2.0 * kPi * t;
      return 2.0 * kPi * radius_ * Vec2(-std::sin(th), std::cos(th));
    }
    case ShapeKind::Ellipse: {
      const double th = 2.0 * kPi * t;
      return 2.0 * kPi * Vec2(-a_ * std::sin(th), b_ * std::cos(th));
    }
    case ShapeKind::Star: {
      const double th = 2.0 * kPi * t;
      const double r = r0_ + r1_ * std::cos(lobes_ * th);
      const double dr = -lobes_ * r1_ * std::sin(lobes_ * th);
      return 2.0 * kPi * Vec2(dr * std::cos(th) - r * std::sin(th),
                              dr * std::sin(th) + r * std::cos(th));
    }
    case ShapeKind::LShape: {
      const double s = t * perimeter_;
      int e = int(std::upper_bound(vert_s_.begin(), vert_s_.end(), s) -
                  vert_s_.begin()) - 1;
      e = std::clamp(e, 0, 5);
      const Vec2& a = verts_[e];
      const Vec2& b = verts_[(e + 1) % 6];
      const double len = vert_s_[e + 1] - vert_s_[e];
      return (perimeter_ / len) * (b - a);
    }
  }
  return {0, 0};
}

Vec2 ImmersedGeometry::outward_normal(double t) const {
  const Vec2 v = boundary_velocity(t);
  return Vec2(v.y(), -v.x()).normalized();  // CCW traversal
}

void ImmersedGeometry::build_arclength_table() {
  arc_.assign(kArcTableSize + 1, 0.0);
  const auto gauss = gauss_rule(5);
  const double dt = 1.0 / kArcTableSize;
  for (int i = 0; i < kArcTableSize; ++i) {
    double len = 0.0;
    for (const auto& q : gauss)
      len += q.w * boundary_velocity((i + q.x) * dt).norm();
    arc_[i + 1] = arc_[i] + len * dt;
  }
  perimeter_ = arc_.back();
}

double ImmersedGeometry::param_at_arclength(double s) const {
  s = std::fmod(s, perimeter_);
  if (s < 0.0) s += perimeter_;
  if (kind_ == ShapeKind::Circle || kind_ == ShapeKind::LShape)
    return s / perimeter_;  // arc-length parameterization already

  // Bracket in the table, then Newton on arc(t) - s.
  const int k = int(std::upper_bound(arc_.begin(), arc_.end(), s) -
                    arc_.begin()) - 1;
  const double dt = 1.0 / kArcTableSize;
  const auto gauss = gauss_rule(5);
  double t = std::clamp(k, 0, kArcTableSize - 1) * dt;
  double base = arc_[std::clamp(k, 0, kArcTableSize - 1)];
  for (int it = 0; it < 50; ++it) {
    const double t0 = std::clamp(k, 0, kArcTableSize - 1) * dt;
    double seg = 0.0;
    for (const auto& q : gauss)
      seg += q.w * boundary_velocity(t0 + q.x * (t - t0)).norm();
    const double F = base + seg * (t - t0) - s;
    const double speed = boundary_velocity(t).norm();
    const double step = F / speed;
    t -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return t - std::floor(t);
}

Rect ImmersedGeometry::bounding_box() const {
  switch (kind_) {
    case ShapeKind::Circle:
      return {center_ - Vec2(radius_, radius_), center_ + Vec2(radius_, radius_)};
    case ShapeKind::Ellipse:
      return {center_ - Vec2(a_, b_), center_ + Vec2(a_, b_)};
    case ShapeKind::Star: {
      const double r = r0_ + r1_;
      return {center_ - Vec2(r, r), center_ + Vec2(r, r)};
    }
    case ShapeKind::LShape:
      return {center_ - Vec2(1, 1), center_ + Vec2(1, 1)};
  }
  return {center_, center_};
}

int ImmersedGeometry::corner_count() const {
  return kind_ == ShapeKind::LShape ? 6 : 0;
}

double ImmersedGeometry::min_level_on_segment(const Vec2& p, const Vec2& q) const {
  switch (kind_) {
    case ShapeKind::Circle: {
      const Vec2 d = q - p;
      const double len2 = d.squaredNorm();
      double s = len2 > 0.0 ? (center_ - p).dot(d) / len2 : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      return ((p + s * d) - center_).norm() - radius_;
    }
    case ShapeKind::Ellipse: {
      // level(s) is an exact quadratic in the segment parameter.
      const Vec2 u0((p.x() - center_.x()) / a_, (p.y() - center_.y()) / b_);
      const Vec2 du((q.x() - p.x()) / a_, (q.y() - p.y()) / b_);
      const double A = du.squaredNorm();
      const double B = 2.0 * u0.dot(du);
      const double C = u0.squaredNorm() - 1.0;
      double s = A > 0.0 ? std::clamp(-B / (2.0 * A), 0.0, 1.0) : 0.0;
      const double interior = A * s * s + B * s + C;
      return std::min({interior, C, A + B + C});
    }
    case ShapeKind::Star:
    case ShapeKind::LShape: {
      // Sample, then refine around each local minimum by ternary search.
      constexpr int kSamples = 64;
      auto f = [&](double s) { return level(p + s * (q - p)); };
      double best = std::numeric_limits<double>::max();
      std::vector<double> vals(kSamples + 1);
      for (int i = 0; i <= kSamples; ++i) {
        vals[i] = f(double(i) / kSamples);
        best = std::min(best, vals[i]);
      }
      for (int i = 1; i < kSamples; ++i) {
        if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
          double lo = double(i - 1) / kSamples, hi = double(i + 1) / kSamples;
          for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (f(m1) < f(m2)) hi = m2; else lo = m1;
          }
          best = std::min(best, f(0.5 * (lo + hi)));
        }
      }
      return best;
    }
  }
  return 0.0;
}

double BoundarySegmentation::total_weight() const {
  double s = 0.0;
  for (const auto& q : points) s += q.w;
  return s;
}

double BoundarySegmentation::total_chord_length() const {
  double s = 0.0;
  const int n = int(endpoints.size());
  for (int i = 0; i < n; ++i) s += (endpoints[(i + 1) % n] - endpoints[i]).norm();
  return s;
}

BoundarySegmentation segment_boundary(const ImmersedGeometry& geom,
                                      int n_segments, int p) {
  if (n_segments < 3)
    throw std::invalid_argument("segment_boundary: need n_segments >= 3");
  if (p < 1 || p > 4)
    throw std::invalid_argument("segment_boundary: p must be in [1,4]");
  if (geom.kind() == ShapeKind::LShape && n_segments % 8 != 0)
    throw std::invalid_argument(
        "segment_boundary: L-shape needs n_segments divisible by 8 so corner "
        "points are segment endpoints");

  BoundarySegmentation seg;
  seg.n_segments = n_segments;
  const double L = geom.perimeter();
  seg.h_gamma = L / n_segments;
  const int gpts = (p + 2) / 2;  // ceil((p+1)/2)
  const auto gauss = gauss_rule(gpts);

  seg.endpoints.resize(n_segments);
  seg.points.reserve(size_t(n_segments) * gpts);
  for (int i = 0; i < n_segments; ++i) {
    const double s0 = i * seg.h_gamma;
    seg.endpoints[i] = geom.boundary_point(geom.param_at_arclength(s0));
    for (const auto& g : gauss) {
      const double t = geom.param_at_arclength(s0 + g.x * seg.h_gamma);
      seg.points.push_back({geom.boundary_point(t), g.w * seg.h_gamma,
                            geom.outward_normal(t)});
    }
  }
  return seg;
}

std::vector<Segment> sample_boundary(const ImmersedGeometry& geom, int samples) {
  std::vector<Segment> out(samples);
  const double L = geom.perimeter();
  Vec2 prev = geom.boundary_point(0.0);
  for (int i = 1; i <= samples; ++i) {
    const Vec2 next =
        geom.boundary_point(geom.param_at_arclength(L * i / samples));
    out[i - 1] = {prev, next};
    prev = next;
  }
  return out;
}

namespace {
double directed_hausdorff(std::span<const Vec2> pts,
                          std::span<const Segment> segs) {
  double worst = 0.0;
  for (const auto& p : pts) {
    double best = std::numeric_limits<double>::max();
    for (const auto& s : segs)
      best = std::min(best, point_segment_distance(p, s.a, s.b));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Vec2> sample_polyline(std::span<const Segment> curve, int samples) {
  double total = 0.0;
  for (const auto& s : curve) total += (s.b - s.a).norm();
  std::vector<Vec2> pts;
  pts.reserve(size_t(samples) + 2 * curve.size());
  for (const auto& s : curve) {
    const double len = (s.b - s.a).norm();
    const int k = std::max(1, int(std::ceil(samples * len / total)));
    for (int i = 0; i <= k; ++i) pts.push_back(s.a + (double(i) / k) * (s.b - s.a));
  }
  return pts;
}
}  // namespace

double hausdorff_distance(const ImmersedGeometry& geom,
                          std::span<const Segment> curve, int samples) {
  samples = std::max(samples, 2048);
  std::vector<Vec2> gpts(samples);
  const double L = geom.perimeter();
  for (int i = 0; i < samples; ++i)
    gpts[i] = geom.boundary_point(geom.param_at_arclength(L * i / samples));
  const double d1 = directed_hausdorff(gpts, curve);

  const auto cpts = sample_polyline(curve, samples);
  const auto gsegs = sample_boundary(geom, samples);
  const double d2 = directed_hausdorff(cpts, gsegs);
  return std::max(d1, d2);
}

double hausdorff_distance(const ImmersedGeometry& g1,
                          const ImmersedGeometry& g2, int samples) {
  if (g1.kind() == ShapeKind::Circle && g2.kind() == ShapeKind::Circle &&
      (g1.center() - g2.center()).norm() < 1e-14)
    return std::abs(g1.radius() - g2.radius());
  return hausdorff_distance(g1, sample_boundary(g2, std::max(samples, 2048)),
                            samples);
}

}  // namespace iibm
