#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "iibm/objective.hpp"

namespace iibm {

/// Solution of the first-order optimality (saddle-point) system
///   [ H_uu  -H_cu'  A_u' ] [u]   [b_u]
///   [-H_cu   H_cc   A_c' ] [c] = [b_c]
///   [ A_u    A_c    0    ] [p]   [f  ]
/// The multipliers are the nodal coefficients of the adjoint.
struct SaddleSolution {
  Eigen::VectorXd u, c, psi;
  double objective = 0;
  // infinity norms of the three block residuals
  double res_stationarity_u = 0, res_stationarity_c = 0, res_feasibility = 0;
  double rhs_norm = 0;
  bool singular = false;
  std::string note;

  double relative_residual() const;
};

/// Direct sparse-LU solve of the full saddle system. A singular KKT matrix is
/// reported in the result, not thrown.
SaddleSolution solve_saddle(const DGSystem& sys, const ObjectiveBlocks& obj);

struct ReducedHessian {
  Eigen::MatrixXd matrix;  // m x m, symmetrized
  double asymmetry = 0;    // max|H - H'| / max|H| before symmetrization
  double lambda_min = 0, lambda_max = 0;
  double cond = 0;  // lambda_max / max(lambda_min, eps*lambda_max)
  bool singular = false;  // lambda_min/lambda_max < 1e-14 (or nonpositive)
};

/// Reduced-space view of the quadratic program: eliminates the state through
/// one factorization of A_u. Throws std::runtime_error if A_u is singular.
class ReducedSpace {
 public:
  ReducedSpace(const DGSystem& sys, const ObjectiveBlocks& obj);
  ~ReducedSpace();
  ReducedSpace(ReducedSpace&&) noexcept;

  /// State u(c) = A_u^{-1} (f - A_c c).
  Eigen::VectorXd state(const Eigen::VectorXd& c) const;
  double objective(const Eigen::VectorXd& c) const;
  /// Reduced gradient via one forward and one adjoint solve.
  Eigen::VectorXd gradient(const Eigen::VectorXd& c) const;
  /// Reduced Hessian formed column by column and symmetrized; eigenvalues by
  /// a symmetric eigensolver.
  ReducedHessian hessian() const;
  /// Minimizer of the reduced QP (dense solve of H_z c = -g_c).
  Eigen::VectorXd minimize() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrappers matching the operation-level interface.
ReducedHessian reduced_hessian(const DGSystem& sys, const ObjectiveBlocks& obj);
Eigen::VectorXd reduced_gradient(const DGSystem& sys, const ObjectiveBlocks& obj,
                                 const Eigen::VectorXd& c);

}  // namespace iibm
