#include "iibm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace iibm {

namespace {

// Symmetric triangle rules on (0,0)-(1,0)-(0,1), weights summing to 1/2.
// Orbit parameters refined by Newton iteration on the moment equations to
// ~40 digits, so exactness holds to machine precision in double.

const TriQuadPoint kDeg2[] = {
    {0.1666666666666666667, 0.6666666666666666667, 0.1666666666666666667},
    {0.6666666666666666667, 0.1666666666666666667, 0.1666666666666666667},
    {0.1666666666666666667, 0.1666666666666666667, 0.1666666666666666667},
};

const TriQuadPoint kDeg4[] = {
    {0.4459484909159648863, 0.1081030181680702274, 0.1116907948390057328},
    {0.1081030181680702274, 0.4459484909159648863, 0.1116907948390057328},
    {0.4459484909159648863, 0.4459484909159648863, 0.1116907948390057328},
    {0.09157621350977074346, 0.8168475729804585131, 0.05497587182766093382},
    {0.8168475729804585131, 0.09157621350977074346, 0.05497587182766093382},
    {0.09157621350977074346, 0.09157621350977074346, 0.05497587182766093382},
};

const TriQuadPoint kDeg6[] = {
    {0.06308901449150222834, 0.8738219710169955433, 0.02542245318510340846},
    {0.8738219710169955433, 0.06308901449150222834, 0.02542245318510340846},
    {0.06308901449150222834, 0.06308901449150222834, 0.02542245318510340846},
    {0.2492867451709104213, 0.5014265096581791574, 0.05839313786318968301},
    {0.5014265096581791574, 0.2492867451709104213, 0.05839313786318968301},
    {0.2492867451709104213, 0.2492867451709104213, 0.05839313786318968301},
    {0.3103524510337844054, 0.6365024991213986472, 0.0414255378091867876},
    {0.6365024991213986472, 0.3103524510337844054, 0.0414255378091867876},
    {0.05314504984481694735, 0.6365024991213986472, 0.0414255378091867876},
    {0.6365024991213986472, 0.05314504984481694735, 0.0414255378091867876},
    {0.05314504984481694735, 0.3103524510337844054, 0.0414255378091867876},
    {0.3103524510337844054, 0.05314504984481694735, 0.0414255378091867876},
};

const TriQuadPoint kDeg8[] = {
    {0.3333333333333333333, 0.3333333333333333333, 0.07215780383889358413},
    {0.459292588292723156, 0.08141482341455368794, 0.0475458171336423124},
    {0.08141482341455368794, 0.459292588292723156, 0.0475458171336423124},
    {0.459292588292723156, 0.459292588292723156, 0.0475458171336423124},
    {0.1705693077517602066, 0.6588613844964795868, 0.05160868526735912514},
    {0.6588613844964795868, 0.1705693077517602066, 0.05160868526735912514},
    {0.1705693077517602066, 0.1705693077517602066, 0.05160868526735912514},
    {0.05054722831703097546, 0.8989055433659380491, 0.01622924881159904016},
    {0.8989055433659380491, 0.05054722831703097546, 0.01622924881159904016},
    {0.05054722831703097546, 0.05054722831703097546, 0.01622924881159904016},
    {0.2631128296346381134, 0.7284923929554042812, 0.01361515708721749713},
    {0.7284923929554042812, 0.2631128296346381134, 0.01361515708721749713},
    {0.008394777409957605337, 0.7284923929554042812, 0.01361515708721749713},
    {0.7284923929554042812, 0.008394777409957605337, 0.01361515708721749713},
    {0.008394777409957605337, 0.2631128296346381134, 0.01361515708721749713},
    {0.2631128296346381134, 0.008394777409957605337, 0.01361515708721749713},
};

std::vector<GaussPoint> make_gauss(int n) {
  // Roots of the Legendre polynomial P_n by Newton iteration, then mapped
  // from [-1,1] to [0,1].
  std::vector<GaussPoint> rule(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[n - 1 - i] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return rule;
}

}  // namespace

std::span<const TriQuadPoint> triangle_rule(int degree) {
  if (degree <= 2) return kDeg2;
  if (degree <= 4) return kDeg4;
  if (degree <= 6) return kDeg6;
  if (degree <= 8) return kDeg8;
  throw std::invalid_argument("triangle_rule: degree > 8 not available");
}

std::span<const GaussPoint> gauss_rule(int npts) {
  if (npts < 1 || npts > 64)
    throw std::invalid_argument("gauss_rule: npts out of range");
  static std::map<int, std::vector<GaussPoint>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(npts);
  if (it == cache.end()) it = cache.emplace(npts, make_gauss(npts)).first;
  return it->second;
}

}  // namespace iibm
