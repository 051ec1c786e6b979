#include "iibm/model_problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iibm {

namespace {
constexpr double kPi = 3.14159265358979323846;

double poisson_kernel(double dtheta, double r) {
  return (1.0 - r * r) / (1.0 + r * r - 2.0 * r * std::cos(dtheta));
}

void eigen_extremes(ModelHessian& mh) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mh.entries,
                                                     Eigen::EigenvaluesOnly);
  mh.lambda_min = eig.eigenvalues().minCoeff();
  mh.lambda_max = eig.eigenvalues().maxCoeff();
  const double eps = std::numeric_limits<double>::epsilon();
  mh.singular = !(mh.lambda_min > 0.0) ||
                mh.lambda_min / mh.lambda_max < 1e-14;
  mh.cond = mh.lambda_max / std::max(mh.lambda_min, eps * mh.lambda_max);
}
}  // namespace

double poisson_kernel_state(const std::function<double(double)>& c, double r,
                            double theta, int n) {
  if (r < 0.0 || r >= 1.0)
    throw std::invalid_argument("poisson_kernel_state: requires 0 <= r < 1");
  const double dt = 2.0 * kPi / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = k * dt;  // periodic trapezoid = uniform weights
    sum += poisson_kernel(th - theta, r) * c(th);
  }
  return sum * dt / (2.0 * kPi);
}

ModelHessian model_hessian(int K, double a, double b, int n) {
  if (!(b > 0.0 && b <= a && a < 1.0))
    throw std::invalid_argument("model_hessian: requires 0 < b <= a < 1");
  if (K < 4) throw std::invalid_argument("model_hessian: requires K >= 4");
  ModelHessian mh;
  mh.K = K;
  mh.a = a;
  mh.b = b;
  mh.n = n;
  mh.entries = Eigen::MatrixXd::Zero(K, K);

  const double dphi = 2.0 * kPi / n;
  std::vector<double> P(K);
  for (int k = 0; k < n; ++k) {
    const double phi = k * dphi;
    const double x = a * std::cos(phi), y = b * std::sin(phi);
    const double r = std::hypot(x, y);
    const double theta = std::atan2(y, x);
    const double darc =
        std::hypot(a * std::sin(phi), b * std::cos(phi)) * dphi;
    for (int i = 0; i < K; ++i)
      P[i] = poisson_kernel(2.0 * kPi * (i + 1) / K - theta, r);
    const double w = darc / (4.0 * kPi * kPi);
    for (int i = 0; i < K; ++i)
      for (int j = i; j < K; ++j) mh.entries(i, j) += w * P[i] * P[j];
  }
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < i; ++j) mh.entries(i, j) = mh.entries(j, i);

  eigen_extremes(mh);
  return mh;
}

ModelHessian model_hessian_auto(int K, double a, double b, int n0) {
  ModelHessian mh = model_hessian(K, a, b, n0);
  for (int n = 2 * n0; n <= 9600; n *= 2) {
    ModelHessian next = model_hessian(K, a, b, n);
    const bool converged =
        std::abs(next.cond - mh.cond) <= 0.01 * std::abs(next.cond);
    mh = next;
    if (converged) break;
  }
  return mh;
}

double illposedness_amplification(int n, double R) {
  if (n < 1) throw std::invalid_argument("illposedness_amplification: n >= 1");
  if (R < 1.0)
    throw std::invalid_argument("illposedness_amplification: R >= 1");
  // ||c_n||^2 on the radius-R circle and ||ubc_n||^2 on the unit circle,
  // by an alias-free trapezoid rule.
  const int mq = 8 * n + 64;
  const double dt = 2.0 * kPi / mq;
  const double amp = std::pow(R, n) / n;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < mq; ++k) {
    const double s = std::sin(n * k * dt);
    num += (amp * s) * (amp * s) * R * dt;
    den += (s / n) * (s / n) * dt;
  }
  return std::sqrt(num / den);
}

std::vector<ModelSweepRow> conditioning_sweep(
    std::span<const std::pair<double, double>> shapes, std::span<const int> Ks,
    int n0) {
  std::vector<ModelSweepRow> rows;
  rows.reserve(shapes.size() * Ks.size());
  for (const auto& [a, b] : shapes) {
    for (int K : Ks) {
      const ModelHessian mh = model_hessian_auto(K, a, b, n0);
      ModelSweepRow row;
      row.K = K;
      row.a = a;
      row.b = b;
      row.h = 2.0 * kPi / K;
      row.d_H = 1.0 - std::min(a, b);
      row.h_over_dH = row.h / row.d_H;
      row.cond = mh.cond;
      row.singular = mh.singular;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace iibm
