#include "iibm/manufactured.hpp"

#include <cmath>
#include <limits>

namespace iibm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ManufacturedValue manufactured_solution(SolutionKind kind, const Vec2& x,
                                        const Vec2& lambda, double mu) {
  ManufacturedValue v;
  if (kind == SolutionKind::Smooth) {
    const double E = std::exp(x.x() + x.y());
    const double sx = std::sin(kPi * x.x()), cx = std::cos(kPi * x.x());
    const double sy = std::sin(kPi * x.y()), cy = std::cos(kPi * x.y());
    v.u = E * sx * sy;
    v.grad = Vec2(E * sy * (sx + kPi * cx), E * sx * (sy + kPi * cy));
    const double lap = E * (2.0 * sx * sy * (1.0 - kPi * kPi) +
                            2.0 * kPi * (cx * sy + sx * cy));
    v.f = lambda.dot(v.grad) - mu * lap;
    return v;
  }

  // L-shape: r^{2/3} sin(2 theta / 3 + pi / 3). The branch cut sits on the
  // bisector of the removed quadrant (theta = -pi/4), strictly away from the
  // boundary arms, so traces on both arms take their interior limits.
  const double r = x.norm();
  if (r == 0.0) {
    v.u = 0.0;
    v.grad = Vec2(std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN());
    v.grad_unbounded = true;
    v.f = 0.0;
    return v;
  }
  double theta = std::atan2(x.y(), x.x());
  if (theta < -0.25 * kPi) theta += 2.0 * kPi;
  const double psi = 2.0 * theta / 3.0 + kPi / 3.0;
  const double r13 = std::cbrt(r);
  v.u = r13 * r13 * std::sin(psi);
  const double c = (2.0 / 3.0) / r13;
  v.grad = Vec2(c * std::sin(psi - theta), c * std::cos(psi - theta));
  v.f = lambda.dot(v.grad);  // harmonic: Lap(u) = 0
  return v;
}

}  // namespace iibm
