#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <span>
#include <vector>

#include "iibm/mesh.hpp"

namespace iibm {

using SparseMat = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Vec2&)>;

/// Nodal Lagrange basis of total degree p on the reference triangle
/// (0,0)-(1,0)-(0,1), with equispaced nodes. basis_i(node_j) = delta_ij.
class NodalBasis {
 public:
  static const NodalBasis& get(int p);  // p in [1,4], cached

  int degree() const { return p_; }
  int size() const { return int(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  /// Lattice indices of the p+1 nodes on local edge e, ordered along the edge.
  const std::vector<int>& edge_nodes(int e) const { return edge_nodes_[e]; }

  void eval(const Vec2& xi, std::span<double> phi) const;
  void eval_grad(const Vec2& xi, std::span<double> dphi_dx,
                 std::span<double> dphi_dy) const;

 private:
  explicit NodalBasis(int p);
  int p_;
  std::vector<Vec2> nodes_;
  std::vector<std::pair<int, int>> powers_;  // monomial exponents
  Eigen::MatrixXd coeff_;                    // phi_i = sum_k coeff(k,i) x^a y^b
  std::array<std::vector<int>, 3> edge_nodes_;
};

/// Nodal Lagrange basis of degree p on [0,1] with p+1 equispaced nodes;
/// matches the trace nodes of NodalBasis along an element edge.
class EdgeBasis {
 public:
  static const EdgeBasis& get(int p);
  int size() const { return p_ + 1; }
  void eval(double t, std::span<double> psi) const;

 private:
  explicit EdgeBasis(int p);
  int p_;
  Eigen::MatrixXd coeff_;
};

/// Elementwise-discontinuous state space on the active mesh: dofs are blocked
/// per element, (p+1)(p+2)/2 each.
struct StateSpace {
  int p = 1;
  int ndof_elem = 3;
  int n = 0;
  StateSpace(const ActiveMesh& mesh, int degree);
  int global(int elem, int i) const { return elem * ndof_elem + i; }
};

/// Discontinuous control space on the boundary edges: p+1 dofs per edge.
struct ControlSpace {
  int p = 1;
  int ndof_edge = 2;
  int m = 0;
  ControlSpace(const ActiveMesh& mesh, int degree);
  int global(int edge, int j) const { return edge * ndof_edge + j; }
};

/// Assembled PDE blocks: the DG residual is r(u,c) = A_u*u + A_c*c - f.
struct DGSystem {
  SparseMat A_u;  // n x n
  SparseMat A_c;  // n x m
  Eigen::VectorXd f;
  Vec2 lambda{0, 0};
  double mu = 0;
};

/// Standard upwind flux: lambda_n * (upstream trace), with the normal taken
/// outward from the plus side.
double upwind_flux(double u_plus, double u_minus, double lambda_n);

/// SIPG penalty factor based on the Shahbazi bound: (p+1)(p+2)/2 * |face|/A,
/// doubled on boundary faces (single adjacent element).
double sipg_penalty(int p, double face_length, double min_elem_area,
                    bool boundary_face);

/// Per-element volume contribution: integral of grad(v) . (lambda u - mu grad u).
Eigen::MatrixXd element_volume_matrix(const std::array<Vec2, 3>& tri, int p,
                                      const Vec2& lambda, double mu);

/// Elementwise L2 projection of `source` onto the state space (same volume
/// quadrature as assembly).
Eigen::VectorXd project_source(const ActiveMesh& mesh, const StateSpace& state,
                               const ScalarField& source);

/// Assembles the full advection-diffusion DG operator: volume terms,
/// interior/boundary upwind fluxes, interior/boundary SIPG terms. The control
/// acts as the exterior state on boundary faces. Rejects lambda = 0 with
/// mu = 0.
DGSystem assemble_system(const ActiveMesh& mesh, const StateSpace& state,
                         const ControlSpace& control, const Vec2& lambda,
                         double mu, const ScalarField& source);

/// u_h(x), evaluated in the triangle returned by ActiveMesh::locate.
double interpolate_state(const ActiveMesh& mesh, const StateSpace& state,
                         const Eigen::VectorXd& u, const Vec2& x);

/// Global interpolation row at x: element index plus the basis values tied to
/// that element's dofs.
struct InterpRow {
  int elem;
  std::vector<double> phi;
};
InterpRow interpolation_row(const ActiveMesh& mesh, const StateSpace& state,
                            const Vec2& x);

/// Nodal interpolant of f in the state space.
Eigen::VectorXd interpolate(const ActiveMesh& mesh, const StateSpace& state,
                            const ScalarField& f);
/// Nodal interpolant of f in the control space (on boundary-edge nodes).
Eigen::VectorXd interpolate_trace(const ActiveMesh& mesh,
                                  const ControlSpace& control,
                                  const ScalarField& f);
/// Control coefficients equal to the trace of u on each boundary edge.
Eigen::VectorXd trace_of(const ActiveMesh& mesh, const StateSpace& state,
                         const ControlSpace& control, const Eigen::VectorXd& u);

}  // namespace iibm
