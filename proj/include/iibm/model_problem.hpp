#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace iibm {

/// Harmonic state on the unit disk from boundary data c on the unit circle:
/// the Poisson integral, evaluated by the trapezoid rule with n intervals.
/// Requires 0 <= r < 1.
double poisson_kernel_state(const std::function<double(double)>& c, double r,
                            double theta, int n = 300);

/// Dirac-control Hessian on the unit disk with an elliptical immersed
/// boundary (semi-axes a, b), K uniformly spaced control angles, trapezoid
/// rule with n intervals along the ellipse.
struct ModelHessian {
  int K = 0;
  double a = 0, b = 0;
  int n = 300;
  Eigen::MatrixXd entries;  // K x K, symmetric
  double lambda_min = 0, lambda_max = 0;
  double cond = 0;
  bool singular = false;
};

ModelHessian model_hessian(int K, double a, double b, int n = 300);

/// Same, but n is doubled until two successive condition numbers agree to 1%
/// (n capped at 9600).
ModelHessian model_hessian_auto(int K, double a, double b, int n0 = 300);

/// L2-norm amplification ||c_n|| / ||ubc_n|| for the sinusoidal family on
/// circles of radius R and 1; equals R^n sqrt(R).
double illposedness_amplification(int n, double R);

struct ModelSweepRow {
  int K;
  double a, b;
  double h, d_H, h_over_dH;
  double cond;
  bool singular;
};

/// Conditioning sweep over (a,b) shapes and control counts K; h = 2*pi/K and
/// d_H = 1 - min(a,b).
std::vector<ModelSweepRow> conditioning_sweep(
    std::span<const std::pair<double, double>> shapes, std::span<const int> Ks,
    int n0 = 300);

}  // namespace iibm
