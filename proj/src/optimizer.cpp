#include "iibm/optimizer.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace iibm {

namespace {
constexpr double kSingularRatio = 1e-14;

using SparseLU = Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>>;

void append_block(std::vector<Eigen::Triplet<double>>& t, const SparseMat& M,
                  int row0, int col0, double scale = 1.0,
                  bool transpose = false) {
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMat::InnerIterator it(M, k); it; ++it) {
      if (transpose)
        t.emplace_back(row0 + it.col(), col0 + it.row(), scale * it.value());
      else
        t.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
    }
}
}  // namespace

double SaddleSolution::relative_residual() const {
  const double r = std::max(
      {res_stationarity_u, res_stationarity_c, res_feasibility});
  return r / std::max(rhs_norm, std::numeric_limits<double>::min());
}

SaddleSolution solve_saddle(const DGSystem& sys, const ObjectiveBlocks& obj) {
  const int n = int(sys.A_u.rows());
  const int m = int(sys.A_c.cols());
  const int dim = 2 * n + m;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(size_t(2 * sys.A_u.nonZeros() + 2 * sys.A_c.nonZeros() +
                   obj.H_uu.nonZeros() + 2 * obj.H_cu.nonZeros() +
                   obj.H_cc.nonZeros()));
  append_block(t, obj.H_uu, 0, 0);
  append_block(t, obj.H_cu, 0, n, -1.0, /*transpose=*/true);
  append_block(t, sys.A_u, 0, n + m, 1.0, /*transpose=*/true);
  append_block(t, obj.H_cu, n, 0, -1.0);
  append_block(t, obj.H_cc, n, n);
  append_block(t, sys.A_c, n, n + m, 1.0, /*transpose=*/true);
  append_block(t, sys.A_u, n + m, 0);
  append_block(t, sys.A_c, n + m, n);

  SparseMat K(dim, dim);
  K.setFromTriplets(t.begin(), t.end());

  Eigen::VectorXd rhs(dim);
  rhs.segment(0, n) = obj.b_u;
  rhs.segment(n, m) = obj.b_c;
  rhs.segment(n + m, n) = sys.f;

  SaddleSolution sol;
  sol.rhs_norm = rhs.lpNorm<Eigen::Infinity>();

  SparseLU lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) {
    sol.singular = true;
    sol.note = "KKT matrix singular to working precision";
    sol.u = Eigen::VectorXd::Zero(n);
    sol.c = Eigen::VectorXd::Zero(m);
    sol.psi = Eigen::VectorXd::Zero(n);
    return sol;
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  sol.u = x.segment(0, n);
  sol.c = x.segment(n, m);
  sol.psi = x.segment(n + m, n);
  sol.objective = obj.value(sol.u, sol.c);

  const Eigen::VectorXd r1 = obj.H_uu * sol.u -
                             obj.H_cu.transpose() * sol.c +
                             sys.A_u.transpose() * sol.psi - obj.b_u;
  const Eigen::VectorXd r2 = -obj.H_cu * sol.u + obj.H_cc * sol.c +
                             sys.A_c.transpose() * sol.psi - obj.b_c;
  const Eigen::VectorXd r3 = sys.A_u * sol.u + sys.A_c * sol.c - sys.f;
  sol.res_stationarity_u = r1.lpNorm<Eigen::Infinity>();
  sol.res_stationarity_c = r2.lpNorm<Eigen::Infinity>();
  sol.res_feasibility = r3.lpNorm<Eigen::Infinity>();
  return sol;
}

struct ReducedSpace::Impl {
  const DGSystem& sys;
  const ObjectiveBlocks& obj;
  SparseLU lu;
  SparseMat H_cuT;  // n x m, fast column access to rows of H_cu
};

ReducedSpace::ReducedSpace(const DGSystem& sys, const ObjectiveBlocks& obj)
    : impl_(new Impl{sys, obj, {}, obj.H_cu.transpose()}) {
  impl_->lu.compute(sys.A_u);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("ReducedSpace: A_u is singular");
}

ReducedSpace::~ReducedSpace() = default;
ReducedSpace::ReducedSpace(ReducedSpace&&) noexcept = default;

Eigen::VectorXd ReducedSpace::state(const Eigen::VectorXd& c) const {
  return impl_->lu.solve((impl_->sys.f - impl_->sys.A_c * c).eval());
}

double ReducedSpace::objective(const Eigen::VectorXd& c) const {
  return impl_->obj.value(state(c), c);
}

Eigen::VectorXd ReducedSpace::gradient(const Eigen::VectorXd& c) const {
  const Eigen::VectorXd u = state(c);
  // adjoint solve: A_u' psi = -(dJ/du)
  const Eigen::VectorXd psi =
      impl_->lu.transpose().solve((-impl_->obj.grad_u(u, c)).eval());
  return impl_->obj.grad_c(u, c) + impl_->sys.A_c.transpose() * psi;
}

ReducedHessian ReducedSpace::hessian() const {
  const auto& sys = impl_->sys;
  const auto& obj = impl_->obj;
  const int m = int(sys.A_c.cols());
  Eigen::MatrixXd H(m, m);
  // column j: z = A_u^{-1} A_c e_j, then
  //   H e_j = A_c' A_u^{-T} (H_uu z + H_cu' e_j) + H_cu z + H_cc e_j
  for (int j = 0; j < m; ++j) {
    const Eigen::VectorXd z = impl_->lu.solve(Eigen::VectorXd(sys.A_c.col(j)));
    const Eigen::VectorXd y = impl_->lu.transpose().solve(
        (obj.H_uu * z + Eigen::VectorXd(impl_->H_cuT.col(j))).eval());
    Eigen::VectorXd col = sys.A_c.transpose() * y + obj.H_cu * z;
    col += obj.H_cc.col(j);
    H.col(j) = col;
  }

  ReducedHessian rh;
  const double scale = H.cwiseAbs().maxCoeff();
  rh.asymmetry = scale > 0.0
                     ? (H - H.transpose()).cwiseAbs().maxCoeff() / scale
                     : 0.0;
  rh.matrix = 0.5 * (H + H.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rh.matrix,
                                                     Eigen::EigenvaluesOnly);
  rh.lambda_min = eig.eigenvalues().minCoeff();
  rh.lambda_max = eig.eigenvalues().maxCoeff();
  const double eps = std::numeric_limits<double>::epsilon();
  rh.singular = !(rh.lambda_min > 0.0) ||
                rh.lambda_min / rh.lambda_max < kSingularRatio;
  rh.cond = rh.lambda_max / std::max(rh.lambda_min, eps * rh.lambda_max);
  return rh;
}

Eigen::VectorXd ReducedSpace::minimize() const {
  const int m = int(impl_->sys.A_c.cols());
  const ReducedHessian rh = hessian();
  const Eigen::VectorXd g0 = gradient(Eigen::VectorXd::Zero(m));
  return rh.matrix.ldlt().solve(-g0);
}

ReducedHessian reduced_hessian(const DGSystem& sys, const ObjectiveBlocks& obj) {
  return ReducedSpace(sys, obj).hessian();
}

Eigen::VectorXd reduced_gradient(const DGSystem& sys, const ObjectiveBlocks& obj,
                                 const Eigen::VectorXd& c) {
  return ReducedSpace(sys, obj).gradient(c);
}

}  // namespace iibm
