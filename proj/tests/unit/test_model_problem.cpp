#include <cmath>
#include <complex>

#include "doctest.h"
#include "iibm/model_problem.hpp"

using namespace iibm;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Independent oracle: same integral with n = 3000 and Kahan summation.
Eigen::MatrixXd oracle_hessian(int K, double a, double b, int n = 3000) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(K, K);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(K, K);
  const double dphi = 2.0 * kPi / n;
  auto kernel = [](double dth, double r) {
    return (1.0 - r * r) / (1.0 + r * r - 2.0 * r * std::cos(dth));
  };
  std::vector<double> P(K);
  for (int k = 0; k < n; ++k) {
    const double phi = k * dphi;
    const double x = a * std::cos(phi), y = b * std::sin(phi);
    const double r = std::hypot(x, y), th = std::atan2(y, x);
    const double darc = std::hypot(a * std::sin(phi), b * std::cos(phi)) * dphi;
    for (int i = 0; i < K; ++i) P[i] = kernel(2.0 * kPi * (i + 1) / K - th, r);
    const double w = darc / (4.0 * kPi * kPi);
    for (int i = 0; i < K; ++i)
      for (int j = i; j < K; ++j) {
        // Kahan compensated accumulation
        const double y1 = w * P[i] * P[j] - comp(i, j);
        const double t = H(i, j) + y1;
        comp(i, j) = (t - H(i, j)) - y1;
        H(i, j) = t;
      }
  }
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < i; ++j) H(i, j) = H(j, i);
  return H;
}

double cond_of(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
}
}  // namespace

TEST_SUITE_BEGIN("model_problem");

TEST_CASE("poisson kernel: normalization, harmonics, mean value") {
  // c = 1 -> u = 1
  for (double r : {0.0, 0.3, 0.7}) {
    CHECK(poisson_kernel_state([](double) { return 1.0; }, r, 0.8) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  // c = sin(n t) -> u = r^n sin(n theta)
  const int n = 3;
  const double r = 0.5;
  for (double theta : {0.25, 1.4, 3.9}) {
    const double expected = std::pow(r, n) * std::sin(n * theta);
    CHECK(poisson_kernel_state([&](double t) { return std::sin(n * t); }, r,
                               theta) == doctest::Approx(expected).epsilon(1e-8));
  }
  // r = 0 -> mean of c
  CHECK(poisson_kernel_state([](double t) { return 2.0 + std::cos(t); }, 0.0,
                             1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS(poisson_kernel_state([](double) { return 1.0; }, 1.0, 0.0));
}

TEST_CASE("model hessian: positivity, symmetry, circulant structure") {
  const ModelHessian mh = model_hessian(32, 0.8, 0.8);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      CHECK(mh.entries(i, j) > 0.0);
      CHECK(mh.entries(i, j) == doctest::Approx(mh.entries(j, i)).epsilon(1e-14));
    }
  // circulant: row i is row 0 shifted by i
  for (int i = 1; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      CHECK(mh.entries(i, j) ==
            doctest::Approx(mh.entries(0, (j - i + 32) % 32)).epsilon(1e-10));
}

TEST_CASE("circulant eigenvalues match the DFT of the first row") {
  const int K = 32;
  const ModelHessian mh = model_hessian(K, 0.8, 0.8);
  std::vector<double> dft_eigs(K);
  for (int q = 0; q < K; ++q) {
    std::complex<double> sum = 0.0;
    for (int j = 0; j < K; ++j)
      sum += mh.entries(0, j) *
             std::exp(std::complex<double>(0, -2.0 * kPi * q * j / K));
    dft_eigs[q] = sum.real();
  }
  std::sort(dft_eigs.begin(), dft_eigs.end());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mh.entries,
                                                     Eigen::EigenvaluesOnly);
  for (int q = 0; q < K; ++q)
    CHECK(eig.eigenvalues()(q) == doctest::Approx(dft_eigs[q]).epsilon(1e-8));
}

TEST_CASE("condition number agrees with the high-resolution Kahan oracle") {
  const ModelHessian mh = model_hessian_auto(32, 0.8, 0.8);
  const double kappa_oracle = cond_of(oracle_hessian(32, 0.8, 0.8));
  CHECK(mh.cond == doctest::Approx(kappa_oracle).epsilon(0.01));
}

TEST_CASE("trapezoid refinement is converged at n = 300") {
  // kernel Fourier decay gives ~r^(2n) aliasing error; at a = b = 0.95 the
  // measured relative change under doubling is 7e-6, so that extreme case
  // carries its own bound
  auto max_rel_change = [](double a, double b) {
    const ModelHessian h300 = model_hessian(24, a, b, 300);
    const ModelHessian h600 = model_hessian(24, a, b, 600);
    double worst = 0.0;
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 24; ++j)
        worst = std::max(worst,
                         std::abs(h600.entries(i, j) - h300.entries(i, j)) /
                             std::abs(h600.entries(i, j)));
    return worst;
  };
  CHECK(max_rel_change(0.85, 0.6) < 1e-6);
  CHECK(max_rel_change(0.9, 0.9) < 1e-6);
  CHECK(max_rel_change(0.95, 0.95) < 1e-5);
}

TEST_CASE("repeated evaluation is bit-identical") {
  const ModelHessian m1 = model_hessian(20, 0.9, 0.5);
  const ModelHessian m2 = model_hessian(20, 0.9, 0.5);
  CHECK((m1.entries - m2.entries).norm() == 0.0);
  CHECK(m1.cond == m2.cond);
}

TEST_CASE("flattening rows: smaller b lowers the peak at theta_i = pi/2") {
  const int K = 64;  // theta = 2 pi i / K, i = 1..K
  const int i_half = K / 4 - 1;  // theta_{i+1} = pi/2
  const int i_pi = K / 2 - 1;    // theta_{i+1} = pi
  const ModelHessian h1 = model_hessian(K, 0.9, 0.8);
  const ModelHessian h2 = model_hessian(K, 0.9, 0.6);
  const ModelHessian h3 = model_hessian(K, 0.9, 0.4);
  // peak of the pi/2 row drops substantially with b
  CHECK(h2.entries(i_half, i_half) < 0.7 * h1.entries(i_half, i_half));
  CHECK(h3.entries(i_half, i_half) < 0.7 * h2.entries(i_half, i_half));
  // while the pi row (against the fixed semi-major axis) changes little
  CHECK(std::abs(h2.entries(i_pi, i_pi) - h1.entries(i_pi, i_pi)) <
        0.15 * h1.entries(i_pi, i_pi));
  CHECK(std::abs(h3.entries(i_pi, i_pi) - h2.entries(i_pi, i_pi)) <
        0.15 * h2.entries(i_pi, i_pi));
}

TEST_CASE("illposedness amplification") {
  CHECK(illposedness_amplification(1, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(illposedness_amplification(10, 1.25) ==
        doctest::Approx(std::pow(1.25, 10) * std::sqrt(1.25)).epsilon(1e-12));
  double prev = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const double amp = illposedness_amplification(n, 1.25);
    CHECK(amp > prev);
    prev = amp;
  }
}

TEST_CASE("conditioning sweep emits the expected grid") {
  const std::vector<std::pair<double, double>> shapes{{0.9, 0.9}, {0.8, 0.8}};
  const std::vector<int> Ks{16, 24};
  const auto rows = conditioning_sweep(shapes, Ks);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].d_H == doctest::Approx(0.1));
  CHECK(rows[0].h == doctest::Approx(2.0 * kPi / 16));
  CHECK(rows[0].h_over_dH == doctest::Approx(rows[0].h / rows[0].d_H));
  for (const auto& r : rows) CHECK(r.cond >= 1.0);
}

TEST_SUITE_END();
