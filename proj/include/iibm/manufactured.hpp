#pragma once

#include "iibm/geometry.hpp"

namespace iibm {

enum class SolutionKind { Smooth, LShapeSingular };

struct ManufacturedValue {
  double u = 0;
  Vec2 grad{0, 0};
  double f = 0;  // source for the given (lambda, mu)
  bool grad_unbounded = false;
};

/// Smooth: u = e^{x+y} sin(pi x) sin(pi y), f = lambda.grad(u) - mu*Lap(u).
/// LShapeSingular: u = r^{2/3} sin(2 theta/3 + pi/3) with the theta branch cut
/// on the bisector of the removed quadrant (outside the L-shaped domain);
/// harmonic, so f = lambda.grad(u). At the corner u = 0 and the gradient is
/// flagged unbounded.
ManufacturedValue manufactured_solution(SolutionKind kind, const Vec2& x,
                                        const Vec2& lambda, double mu);

}  // namespace iibm
