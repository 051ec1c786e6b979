#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

#include "iibm/dg.hpp"
#include "iibm/geometry.hpp"

namespace iibm {

enum class Regularization { None, Penalty, Tikhonov };

/// Blocks of the discrete quadratic objective
///   J(u,c) = 1/2 c'H_cc c - c'H_cu u + 1/2 u'H_uu u - b_u'u - b_c'c + J0.
/// b_c is zero except for Tikhonov regularization with c0 != 0.
struct ObjectiveBlocks {
  SparseMat H_uu;  // n x n
  SparseMat H_cu;  // m x n
  SparseMat H_cc;  // m x m
  Eigen::VectorXd b_u, b_c;
  double J0 = 0;

  double value(const Eigen::VectorXd& u, const Eigen::VectorXd& c) const;
  Eigen::VectorXd grad_u(const Eigen::VectorXd& u, const Eigen::VectorXd& c) const;
  Eigen::VectorXd grad_c(const Eigen::VectorXd& u, const Eigen::VectorXd& c) const;
};

/// Accumulates contributions before building the sparse blocks.
struct ObjectiveBuilder {
  ObjectiveBuilder(int n_state, int m_control);
  int n, m;
  std::vector<Eigen::Triplet<double>> uu, cu, cc;
  Eigen::VectorXd b_u, b_c;
  double J0 = 0;
  ObjectiveBlocks build() const;
};

/// Boundary-mismatch term 1/2 int_Gamma (u - ubc)^2: rank-one updates from
/// each quadrature point of the segmentation. For pure advection (mu = 0)
/// only inflow points (lambda . n < 0) contribute.
void assemble_mismatch(const BoundarySegmentation& seg, const ActiveMesh& mesh,
                       const StateSpace& state, const ScalarField& ubc,
                       const Vec2& lambda, double mu, ObjectiveBuilder& out);

/// Control-trace penalty alpha * 1/2 int_Gammat (u - c)^2 over the boundary
/// edges, using the trace of u.
void assemble_penalty_regularization(const ActiveMesh& mesh,
                                     const StateSpace& state,
                                     const ControlSpace& control, double alpha,
                                     ObjectiveBuilder& out);

/// Tikhonov term alpha * 1/2 int_Gammat (c - c0)^2.
void assemble_tikhonov(const ActiveMesh& mesh, const ControlSpace& control,
                       double alpha, double c0, ObjectiveBuilder& out);

}  // namespace iibm
