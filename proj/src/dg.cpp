#include "iibm/dg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "iibm/quadrature.hpp"

namespace iibm {

// ---------------------------------------------------------------------------
// Bases

namespace {
// x^a with small non-negative integer a
inline double ipow(double x, int a) {
  double r = 1.0;
  for (int k = 0; k < a; ++k) r *= x;
  return r;
}
}  // namespace

NodalBasis::NodalBasis(int p) : p_(p) {
  if (p < 1 || p > 4) throw std::invalid_argument("NodalBasis: p must be in [1,4]");
  for (int j = 0; j <= p; ++j)
    for (int i = 0; i <= p - j; ++i) {
      nodes_.push_back(Vec2(double(i) / p, double(j) / p));
      powers_.push_back({i, j});
    }
  const int N = size();
  Eigen::MatrixXd V(N, N);
  for (int r = 0; r < N; ++r)
    for (int k = 0; k < N; ++k)
      V(r, k) = ipow(nodes_[r].x(), powers_[k].first) *
                ipow(nodes_[r].y(), powers_[k].second);
  coeff_ = V.fullPivLu().inverse();

  // Edge node lists in CCW order: e0 along y=0, e1 along x+y=1, e2 along x=0.
  auto index_of = [&](int i, int j) {
    int idx = 0;
    for (int jj = 0; jj < j; ++jj) idx += p + 1 - jj;
    return idx + i;
  };
  for (int k = 0; k <= p; ++k) {
    edge_nodes_[0].push_back(index_of(k, 0));
    edge_nodes_[1].push_back(index_of(p - k, k));
    edge_nodes_[2].push_back(index_of(0, p - k));
  }
}

void NodalBasis::eval(const Vec2& xi, std::span<double> phi) const {
  const int N = size();
  double xp[5], yp[5];
  xp[0] = yp[0] = 1.0;
  for (int k = 1; k <= p_; ++k) {
    xp[k] = xp[k - 1] * xi.x();
    yp[k] = yp[k - 1] * xi.y();
  }
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int k = 0; k < N; ++k)
      s += coeff_(k, i) * xp[powers_[k].first] * yp[powers_[k].second];
    phi[i] = s;
  }
}

void NodalBasis::eval_grad(const Vec2& xi, std::span<double> dphi_dx,
                           std::span<double> dphi_dy) const {
  const int N = size();
  double xp[5], yp[5];
  xp[0] = yp[0] = 1.0;
  for (int k = 1; k <= p_; ++k) {
    xp[k] = xp[k - 1] * xi.x();
    yp[k] = yp[k - 1] * xi.y();
  }
  for (int i = 0; i < N; ++i) {
    double sx = 0.0, sy = 0.0;
    for (int k = 0; k < N; ++k) {
      const auto [a, b] = powers_[k];
      if (a > 0) sx += coeff_(k, i) * a * xp[a - 1] * yp[b];
      if (b > 0) sy += coeff_(k, i) * b * xp[a] * yp[b - 1];
    }
    dphi_dx[i] = sx;
    dphi_dy[i] = sy;
  }
}

const NodalBasis& NodalBasis::get(int p) {
  static std::map<int, NodalBasis> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, NodalBasis(p)).first;
  return it->second;
}

EdgeBasis::EdgeBasis(int p) : p_(p) {
  if (p < 1 || p > 4) throw std::invalid_argument("EdgeBasis: p must be in [1,4]");
  const int N = p + 1;
  Eigen::MatrixXd V(N, N);
  for (int r = 0; r < N; ++r)
    for (int k = 0; k < N; ++k) V(r, k) = ipow(double(r) / p, k);
  coeff_ = V.fullPivLu().inverse();
}

void EdgeBasis::eval(double t, std::span<double> psi) const {
  const int N = p_ + 1;
  double tp[5];
  tp[0] = 1.0;
  for (int k = 1; k < N; ++k) tp[k] = tp[k - 1] * t;
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += coeff_(k, i) * tp[k];
    psi[i] = s;
  }
}

const EdgeBasis& EdgeBasis::get(int p) {
  static std::map<int, EdgeBasis> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, EdgeBasis(p)).first;
  return it->second;
}

StateSpace::StateSpace(const ActiveMesh& mesh, int degree)
    : p(degree),
      ndof_elem((degree + 1) * (degree + 2) / 2),
      n(ndof_elem * mesh.size()) {}

ControlSpace::ControlSpace(const ActiveMesh& mesh, int degree)
    : p(degree),
      ndof_edge(degree + 1),
      m(ndof_edge * int(mesh.boundary_edges.size())) {}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

struct ElemFrame {
  Vec2 v0;
  Eigen::Matrix2d J, invJ;
  double detJ;
};

ElemFrame frame_of(const std::array<Vec2, 3>& v) {
  ElemFrame fr;
  fr.v0 = v[0];
  fr.J.col(0) = v[1] - v[0];
  fr.J.col(1) = v[2] - v[0];
  fr.detJ = fr.J.determinant();
  fr.invJ = fr.J.inverse();
  return fr;
}

// Basis values and physical gradients at a physical point.
void eval_basis_at(const NodalBasis& basis, const ElemFrame& fr, const Vec2& x,
                   std::span<double> phi, std::span<double> gx,
                   std::span<double> gy) {
  const Vec2 xi = fr.invJ * (x - fr.v0);
  const int N = basis.size();
  double rx[15], ry[15];
  basis.eval(xi, phi);
  basis.eval_grad(xi, {rx, size_t(N)}, {ry, size_t(N)});
  for (int i = 0; i < N; ++i) {
    gx[i] = fr.invJ(0, 0) * rx[i] + fr.invJ(1, 0) * ry[i];
    gy[i] = fr.invJ(0, 1) * rx[i] + fr.invJ(1, 1) * ry[i];
  }
}

void emit_block(std::vector<Eigen::Triplet<double>>& out, int row0, int col0,
                const Eigen::MatrixXd& block) {
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j)
      if (block(i, j) != 0.0) out.emplace_back(row0 + i, col0 + j, block(i, j));
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations

double upwind_flux(double u_plus, double u_minus, double lambda_n) {
  return lambda_n >= 0.0 ? lambda_n * u_plus : lambda_n * u_minus;
}

double sipg_penalty(int p, double face_length, double min_elem_area,
                    bool boundary_face) {
  const double np = (p + 1) * (p + 2) / 2.0;
  const double eps = np * face_length / min_elem_area;
  return boundary_face ? 2.0 * eps : eps;
}

Eigen::MatrixXd element_volume_matrix(const std::array<Vec2, 3>& tri, int p,
                                      const Vec2& lambda, double mu) {
  const auto& basis = NodalBasis::get(p);
  const auto rule = triangle_rule(2 * p);
  const auto fr = frame_of(tri);
  const int N = basis.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  double phi[15], gx[15], gy[15];
  for (const auto& q : rule) {
    const Vec2 x = fr.v0 + fr.J * Vec2(q.x, q.y);
    eval_basis_at(basis, fr, x, {phi, size_t(N)}, {gx, size_t(N)}, {gy, size_t(N)});
    const double w = q.w * fr.detJ;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        A(i, j) += w * (gx[i] * (lambda.x() * phi[j] - mu * gx[j]) +
                        gy[i] * (lambda.y() * phi[j] - mu * gy[j]));
  }
  return A;
}

Eigen::VectorXd project_source(const ActiveMesh& mesh, const StateSpace& state,
                               const ScalarField& source) {
  const auto& basis = NodalBasis::get(state.p);
  const auto rule = triangle_rule(2 * state.p);
  const int N = state.ndof_elem;
  Eigen::VectorXd coeffs(state.n);
  double phi[15];
  for (int k = 0; k < mesh.size(); ++k) {
    const auto fr = frame_of(mesh.triangle(k));
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    for (const auto& q : rule) {
      const Vec2 x = fr.v0 + fr.J * Vec2(q.x, q.y);
      basis.eval(Vec2(q.x, q.y), {phi, size_t(N)});
      const double w = q.w * fr.detJ;
      const double fx = source(x);
      for (int i = 0; i < N; ++i) {
        rhs(i) += w * phi[i] * fx;
        for (int j = 0; j < N; ++j) M(i, j) += w * phi[i] * phi[j];
      }
    }
    coeffs.segment(k * N, N) = M.llt().solve(rhs);
  }
  return coeffs;
}

DGSystem assemble_system(const ActiveMesh& mesh, const StateSpace& state,
                         const ControlSpace& control, const Vec2& lambda,
                         double mu, const ScalarField& source) {
  if (mu < 0.0) throw std::invalid_argument("assemble_system: mu must be >= 0");
  if (mu == 0.0 && lambda.norm() == 0.0)
    throw std::invalid_argument("assemble_system: degenerate PDE (lambda = 0, mu = 0)");

  const auto& basis = NodalBasis::get(state.p);
  const auto& ebasis = EdgeBasis::get(control.p);
  const int N = state.ndof_elem;
  const int Nc = control.ndof_edge;
  const auto vrule = triangle_rule(2 * state.p);
  const auto erule = gauss_rule(state.p + 1);
  const double area = mesh.background.triangle_area();

  DGSystem sys;
  sys.lambda = lambda;
  sys.mu = mu;
  sys.f = Eigen::VectorXd::Zero(state.n);

  std::vector<Eigen::Triplet<double>> tu, tc;
  tu.reserve(size_t(mesh.size()) * N * N +
             size_t(mesh.interior_faces.size()) * 4 * N * N);
  tc.reserve(mesh.boundary_edges.size() * N * Nc);

  const Eigen::VectorXd fproj = project_source(mesh, state, source);

  // Volume terms: grad(v).(lambda u - mu grad u) + v f_h
  double phi[15];
  for (int k = 0; k < mesh.size(); ++k) {
    const auto tri = mesh.triangle(k);
    emit_block(tu, state.global(k, 0), state.global(k, 0),
               element_volume_matrix(tri, state.p, lambda, mu));

    const auto fr = frame_of(tri);
    for (const auto& q : vrule) {
      basis.eval(Vec2(q.x, q.y), {phi, size_t(N)});
      double fh = 0.0;
      for (int j = 0; j < N; ++j) fh += fproj(state.global(k, j)) * phi[j];
      const double w = q.w * fr.detJ;
      // b_h carries +v f_h; with residual = A_u u + A_c c - f this lands in -f.
      for (int i = 0; i < N; ++i) sys.f(state.global(k, i)) -= w * phi[i] * fh;
    }
  }

  // Interior faces: upwind advective flux plus SIPG diffusion terms.
  double php[15], gxp[15], gyp[15], phm[15], gxm[15], gym[15];
  double gnp[15], gnm[15];
  Eigen::MatrixXd App(N, N), Apm(N, N), Amp(N, N), Amm(N, N);
  for (const auto& face : mesh.interior_faces) {
    const auto frp = frame_of(mesh.triangle(face.plus));
    const auto frm = frame_of(mesh.triangle(face.minus));
    const auto ep = mesh.edge_endpoints(face.plus, face.edge_plus);
    const Vec2 n = mesh.outward_normal(face.plus, face.edge_plus);
    const double len = (ep[1] - ep[0]).norm();
    const double lam_n = lambda.dot(n);
    const double eps = sipg_penalty(state.p, len, area, false);
    App.setZero(); Apm.setZero(); Amp.setZero(); Amm.setZero();

    for (const auto& g : erule) {
      const Vec2 x = ep[0] + g.x * (ep[1] - ep[0]);
      const double w = g.w * len;
      eval_basis_at(basis, frp, x, {php, size_t(N)}, {gxp, size_t(N)}, {gyp, size_t(N)});
      eval_basis_at(basis, frm, x, {phm, size_t(N)}, {gxm, size_t(N)}, {gym, size_t(N)});

      // -[v].F(u+,u-) with [v].lambda = (v+ - v-) lam_n
      const bool take_plus = lam_n >= 0.0;
      const double* phu = take_plus ? php : phm;
      Eigen::MatrixXd& up_p = take_plus ? App : Apm;
      Eigen::MatrixXd& up_m = take_plus ? Amp : Amm;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          up_p(i, j) -= w * php[i] * lam_n * phu[j];
          up_m(i, j) += w * phm[i] * lam_n * phu[j];
        }

      if (mu > 0.0) {
        // +[v].{mu grad u} + {mu grad v}.[u] - eps {mu} [u].[v]
        for (int i = 0; i < N; ++i) {
          gnp[i] = n.x() * gxp[i] + n.y() * gyp[i];
          gnm[i] = n.x() * gxm[i] + n.y() * gym[i];
        }
        const double hmu = 0.5 * mu;
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) {
            App(i, j) += w * (php[i] * hmu * gnp[j] + hmu * gnp[i] * php[j] -
                              eps * mu * php[i] * php[j]);
            Apm(i, j) += w * (php[i] * hmu * gnm[j] - hmu * gnp[i] * phm[j] +
                              eps * mu * php[i] * phm[j]);
            Amp(i, j) += w * (-phm[i] * hmu * gnp[j] + hmu * gnm[i] * php[j] +
                              eps * mu * phm[i] * php[j]);
            Amm(i, j) += w * (-phm[i] * hmu * gnm[j] - hmu * gnm[i] * phm[j] -
                              eps * mu * phm[i] * phm[j]);
          }
      }
    }
    emit_block(tu, state.global(face.plus, 0), state.global(face.plus, 0), App);
    emit_block(tu, state.global(face.plus, 0), state.global(face.minus, 0), Apm);
    emit_block(tu, state.global(face.minus, 0), state.global(face.plus, 0), Amp);
    emit_block(tu, state.global(face.minus, 0), state.global(face.minus, 0), Amm);
  }

  // Boundary faces: upwind flux with the control as exterior state, SIPG
  // boundary terms with (u - c).
  double psi[5], gn[15];
  Eigen::MatrixXd Buu(N, N), Buc(N, Nc);
  for (int be = 0; be < int(mesh.boundary_edges.size()); ++be) {
    const auto& bedge = mesh.boundary_edges[be];
    const auto fr = frame_of(mesh.triangle(bedge.elem));
    const auto ep = mesh.edge_endpoints(bedge.elem, bedge.edge);
    const Vec2 n = mesh.outward_normal(bedge.elem, bedge.edge);
    const double len = (ep[1] - ep[0]).norm();
    const double lam_n = lambda.dot(n);
    const double eps = sipg_penalty(state.p, len, area, true);
    Buu.setZero(); Buc.setZero();

    for (const auto& g : erule) {
      const Vec2 x = ep[0] + g.x * (ep[1] - ep[0]);
      const double w = g.w * len;
      eval_basis_at(basis, fr, x, {php, size_t(N)}, {gxp, size_t(N)}, {gyp, size_t(N)});
      ebasis.eval(g.x, {psi, size_t(Nc)});

      // -v F(u,c).n
      if (lam_n >= 0.0) {
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) Buu(i, j) -= w * php[i] * lam_n * php[j];
      } else {
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < Nc; ++j) Buc(i, j) -= w * php[i] * lam_n * psi[j];
      }

      if (mu > 0.0) {
        // +v mu grad(u).n + mu grad(v).n (u - c) - eps mu v (u - c)
        for (int i = 0; i < N; ++i) gn[i] = n.x() * gxp[i] + n.y() * gyp[i];
        for (int i = 0; i < N; ++i) {
          for (int j = 0; j < N; ++j)
            Buu(i, j) += w * (php[i] * mu * gn[j] + mu * gn[i] * php[j] -
                              eps * mu * php[i] * php[j]);
          for (int j = 0; j < Nc; ++j)
            Buc(i, j) += w * (-mu * gn[i] * psi[j] + eps * mu * php[i] * psi[j]);
        }
      }
    }
    emit_block(tu, state.global(bedge.elem, 0), state.global(bedge.elem, 0), Buu);
    emit_block(tc, state.global(bedge.elem, 0), control.global(be, 0), Buc);
  }

  sys.A_u.resize(state.n, state.n);
  sys.A_u.setFromTriplets(tu.begin(), tu.end());
  sys.A_c.resize(state.n, control.m);
  sys.A_c.setFromTriplets(tc.begin(), tc.end());
  return sys;
}

InterpRow interpolation_row(const ActiveMesh& mesh, const StateSpace& state,
                            const Vec2& x) {
  const int k = mesh.locate(x);
  const auto& basis = NodalBasis::get(state.p);
  const auto fr = frame_of(mesh.triangle(k));
  InterpRow row{k, std::vector<double>(state.ndof_elem)};
  basis.eval(fr.invJ * (x - fr.v0), row.phi);
  return row;
}

double interpolate_state(const ActiveMesh& mesh, const StateSpace& state,
                         const Eigen::VectorXd& u, const Vec2& x) {
  const auto row = interpolation_row(mesh, state, x);
  double val = 0.0;
  for (int i = 0; i < state.ndof_elem; ++i)
    val += u(state.global(row.elem, i)) * row.phi[i];
  return val;
}

Eigen::VectorXd interpolate(const ActiveMesh& mesh, const StateSpace& state,
                            const ScalarField& f) {
  const auto& basis = NodalBasis::get(state.p);
  Eigen::VectorXd u(state.n);
  for (int k = 0; k < mesh.size(); ++k) {
    const auto fr = frame_of(mesh.triangle(k));
    for (int i = 0; i < state.ndof_elem; ++i)
      u(state.global(k, i)) = f(fr.v0 + fr.J * basis.nodes()[i]);
  }
  return u;
}

Eigen::VectorXd interpolate_trace(const ActiveMesh& mesh,
                                  const ControlSpace& control,
                                  const ScalarField& f) {
  Eigen::VectorXd c(control.m);
  for (int be = 0; be < int(mesh.boundary_edges.size()); ++be) {
    const auto& bedge = mesh.boundary_edges[be];
    const auto ep = mesh.edge_endpoints(bedge.elem, bedge.edge);
    for (int j = 0; j <= control.p; ++j) {
      const double t = double(j) / control.p;
      c(control.global(be, j)) = f(ep[0] + t * (ep[1] - ep[0]));
    }
  }
  return c;
}

Eigen::VectorXd trace_of(const ActiveMesh& mesh, const StateSpace& state,
                         const ControlSpace& control, const Eigen::VectorXd& u) {
  const auto& basis = NodalBasis::get(state.p);
  Eigen::VectorXd c(control.m);
  for (int be = 0; be < int(mesh.boundary_edges.size()); ++be) {
    const auto& bedge = mesh.boundary_edges[be];
    const auto& enodes = basis.edge_nodes(bedge.edge);
    for (int j = 0; j <= control.p; ++j)
      c(control.global(be, j)) = u(state.global(bedge.elem, enodes[j]));
  }
  return c;
}

}  // namespace iibm
