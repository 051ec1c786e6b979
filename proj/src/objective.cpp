#include "iibm/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "iibm/quadrature.hpp"

namespace iibm {

double ObjectiveBlocks::value(const Eigen::VectorXd& u,
                              const Eigen::VectorXd& c) const {
  return 0.5 * c.dot(H_cc * c) - c.dot(H_cu * u) + 0.5 * u.dot(H_uu * u) -
         b_u.dot(u) - b_c.dot(c) + J0;
}

Eigen::VectorXd ObjectiveBlocks::grad_u(const Eigen::VectorXd& u,
                                        const Eigen::VectorXd& c) const {
  return H_uu * u - H_cu.transpose() * c - b_u;
}

Eigen::VectorXd ObjectiveBlocks::grad_c(const Eigen::VectorXd& u,
                                        const Eigen::VectorXd& c) const {
  return H_cc * c - H_cu * u - b_c;
}

ObjectiveBuilder::ObjectiveBuilder(int n_state, int m_control)
    : n(n_state), m(m_control) {
  b_u = Eigen::VectorXd::Zero(n);
  b_c = Eigen::VectorXd::Zero(m);
}

ObjectiveBlocks ObjectiveBuilder::build() const {
  ObjectiveBlocks blocks;
  blocks.H_uu.resize(n, n);
  blocks.H_uu.setFromTriplets(uu.begin(), uu.end());
  blocks.H_cu.resize(m, n);
  blocks.H_cu.setFromTriplets(cu.begin(), cu.end());
  blocks.H_cc.resize(m, m);
  blocks.H_cc.setFromTriplets(cc.begin(), cc.end());
  blocks.b_u = b_u;
  blocks.b_c = b_c;
  blocks.J0 = J0;
  return blocks;
}

void assemble_mismatch(const BoundarySegmentation& seg, const ActiveMesh& mesh,
                       const StateSpace& state, const ScalarField& ubc,
                       const Vec2& lambda, double mu, ObjectiveBuilder& out) {
  const bool pure_advection = (mu == 0.0);
  const int N = state.ndof_elem;
  for (const auto& q : seg.points) {
    if (pure_advection && lambda.dot(q.normal) >= -1e-14)
      continue;  // mismatch acts on the inflow part only
    const auto row = interpolation_row(mesh, state, q.x);
    const double g = ubc(q.x);
    const int base = state.global(row.elem, 0);
    for (int i = 0; i < N; ++i) {
      out.b_u(base + i) += q.w * g * row.phi[i];
      for (int j = 0; j < N; ++j)
        out.uu.emplace_back(base + i, base + j, q.w * row.phi[i] * row.phi[j]);
    }
    out.J0 += 0.5 * q.w * g * g;
  }
}

void assemble_penalty_regularization(const ActiveMesh& mesh,
                                     const StateSpace& state,
                                     const ControlSpace& control, double alpha,
                                     ObjectiveBuilder& out) {
  if (alpha <= 0.0)
    throw std::invalid_argument("assemble_penalty_regularization: alpha must be > 0");
  const auto& basis = NodalBasis::get(state.p);
  const auto& ebasis = EdgeBasis::get(control.p);
  const auto rule = gauss_rule(state.p + 1);
  const int Ne = state.p + 1;  // trace dofs per edge
  const int Nc = control.ndof_edge;
  double tr[5], psi[5];

  for (int be = 0; be < int(mesh.boundary_edges.size()); ++be) {
    const auto& bedge = mesh.boundary_edges[be];
    const auto& enodes = basis.edge_nodes(bedge.edge);
    const double len = mesh.edge_length(bedge.elem, bedge.edge);
    for (const auto& g : rule) {
      const double w = alpha * g.w * len;
      // the trace of the element basis along its own edge is the edge basis
      ebasis.eval(g.x, {tr, size_t(Ne)});
      ebasis.eval(g.x, {psi, size_t(Nc)});
      for (int i = 0; i < Ne; ++i) {
        const int gi = state.global(bedge.elem, enodes[i]);
        for (int j = 0; j < Ne; ++j)
          out.uu.emplace_back(gi, state.global(bedge.elem, enodes[j]),
                              w * tr[i] * tr[j]);
      }
      for (int i = 0; i < Nc; ++i) {
        const int ci = control.global(be, i);
        for (int j = 0; j < Ne; ++j)
          out.cu.emplace_back(ci, state.global(bedge.elem, enodes[j]),
                              w * psi[i] * tr[j]);
        for (int j = 0; j < Nc; ++j)
          out.cc.emplace_back(ci, control.global(be, j), w * psi[i] * psi[j]);
      }
    }
  }
}

void assemble_tikhonov(const ActiveMesh& mesh, const ControlSpace& control,
                       double alpha, double c0, ObjectiveBuilder& out) {
  if (alpha <= 0.0)
    throw std::invalid_argument("assemble_tikhonov: alpha must be > 0");
  const auto& ebasis = EdgeBasis::get(control.p);
  const auto rule = gauss_rule(control.p + 1);
  const int Nc = control.ndof_edge;
  double psi[5];

  for (int be = 0; be < int(mesh.boundary_edges.size()); ++be) {
    const auto& bedge = mesh.boundary_edges[be];
    const double len = mesh.edge_length(bedge.elem, bedge.edge);
    for (const auto& g : rule) {
      const double w = alpha * g.w * len;
      ebasis.eval(g.x, {psi, size_t(Nc)});
      for (int i = 0; i < Nc; ++i) {
        const int ci = control.global(be, i);
        out.b_c(ci) += w * c0 * psi[i];
        for (int j = 0; j < Nc; ++j)
          out.cc.emplace_back(ci, control.global(be, j), w * psi[i] * psi[j]);
      }
      out.J0 += 0.5 * w * c0 * c0;
    }
  }
}

}  // namespace iibm
