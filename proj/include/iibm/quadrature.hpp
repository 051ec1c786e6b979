#pragma once

#include <span>
#include <vector>

namespace iibm {

/// Quadrature point on the reference triangle (0,0)-(1,0)-(0,1).
/// Weights of a rule sum to the reference area 1/2.
struct TriQuadPoint {
  double x, y, w;
};

/// Smallest shipped symmetric rule that integrates polynomials of total
/// degree >= `degree` exactly. Available exactness degrees: 2, 4, 6, 8.
std::span<const TriQuadPoint> triangle_rule(int degree);

/// Gauss-Legendre point on [0,1]; weights of a rule sum to 1.
struct GaussPoint {
  double x, w;
};

/// npts-point Gauss-Legendre rule on [0,1], exact for degree 2*npts-1.
std::span<const GaussPoint> gauss_rule(int npts);

}  // namespace iibm
