#include "iibm/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include "iibm/quadrature.hpp"

namespace iibm {

namespace {
double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

Rect study_bounds(const ImmersedGeometry& geom, double H) {
  Rect box = geom.bounding_box();
  const Vec2 margin(2.0 * H, 2.0 * H);
  return {box.lo - margin, box.hi + margin};
}

int segment_count_for_ratio(const ImmersedGeometry& geom, double ratio,
                            double h) {
  int n = std::max(3, int(std::lround(geom.perimeter() / (ratio * h))));
  if (geom.kind() == ShapeKind::LShape) n = std::max(8, ((n + 4) / 8) * 8);
  return n;
}

LevelSetup assemble_level(const StudyConfig& cfg, const ImmersedGeometry& geom,
                          int level, std::optional<double> ratio_override) {
  BackgroundMesh bg = build_background(study_bounds(geom, cfg.H), cfg.H);
  for (int l = 0; l < level; ++l) bg = bg.refined();

  ActiveMesh mesh = extract_active(bg, geom);
  StateSpace state(mesh, cfg.p);
  ControlSpace control(mesh, cfg.p);

  const double ratio = ratio_override.value_or(cfg.h_gamma_ratio);
  BoundarySegmentation seg = segment_boundary(
      geom, segment_count_for_ratio(geom, ratio, mesh.h), cfg.p);

  const Vec2 lambda = cfg.lambda;
  const double mu = cfg.mu;
  const SolutionKind sol = cfg.solution;
  ScalarField source = [sol, lambda, mu](const Vec2& x) {
    return manufactured_solution(sol, x, lambda, mu).f;
  };
  ScalarField ubc = [sol, lambda, mu](const Vec2& x) {
    return manufactured_solution(sol, x, lambda, mu).u;
  };

  DGSystem system = assemble_system(mesh, state, control, lambda, mu, source);

  ObjectiveBuilder builder(state.n, control.m);
  assemble_mismatch(seg, mesh, state, ubc, lambda, mu, builder);
  switch (cfg.regularization.kind) {
    case Regularization::None:
      break;
    case Regularization::Penalty:
      assemble_penalty_regularization(mesh, state, control,
                                      cfg.regularization.alpha, builder);
      break;
    case Regularization::Tikhonov:
      assemble_tikhonov(mesh, control, cfg.regularization.alpha,
                        cfg.regularization.c0, builder);
      break;
  }

  return LevelSetup{std::move(mesh), state, control, std::move(seg),
                    std::move(system), builder.build()};
}

double l2_error(const ActiveMesh& mesh, const StateSpace& state,
                const Eigen::VectorXd& u, const ScalarField& exact,
                const ImmersedGeometry& geom) {
  const auto& basis = NodalBasis::get(state.p);
  const auto rule = triangle_rule(std::min(2 * state.p + 2, 8));
  const int N = state.ndof_elem;
  std::vector<double> phi(N);
  double err2 = 0.0;
  for (int k = 0; k < mesh.size(); ++k) {
    const auto tri = mesh.triangle(k);
    const Vec2 d1 = tri[1] - tri[0], d2 = tri[2] - tri[0];
    const double detJ = d1.x() * d2.y() - d1.y() * d2.x();
    for (const auto& q : rule) {
      const Vec2 x = tri[0] + q.x * d1 + q.y * d2;
      if (!geom.inside(x)) continue;  // error zeroed outside the domain
      basis.eval(Vec2(q.x, q.y), phi);
      double uh = 0.0;
      for (int i = 0; i < N; ++i) uh += u(state.global(k, i)) * phi[i];
      const double diff = uh - exact(x);
      err2 += q.w * detJ * diff * diff;
    }
  }
  return std::sqrt(err2);
}

std::vector<ConvergenceRow> run_convergence(const StudyConfig& cfg) {
  cfg.validate();
  const ImmersedGeometry geom = cfg.geometry.make();
  const Vec2 lambda = cfg.lambda;
  const double mu = cfg.mu;
  const SolutionKind sol = cfg.solution;
  ScalarField exact = [sol, lambda, mu](const Vec2& x) {
    return manufactured_solution(sol, x, lambda, mu).u;
  };

  std::vector<ConvergenceRow> rows;
  double prev_err = 0.0;
  for (int level = 0; level < cfg.levels; ++level) {
    const double t0 = now_ms();
    LevelSetup ls = assemble_level(cfg, geom, level);
    ConvergenceRow row;
    row.level = level;
    row.h = ls.mesh.h;
    row.n = ls.state.n;
    row.m = ls.control.m;
    row.h_gamma = ls.segmentation.h_gamma;
    row.d_H = hausdorff_distance(geom, ls.mesh.boundary_polyline(), 2048);

    SaddleSolution sad = solve_saddle(ls.system, ls.objective);
    row.singular = sad.singular;
    if (sad.singular) {
      row.error = std::numeric_limits<double>::quiet_NaN();
      row.rate = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.error = l2_error(ls.mesh, ls.state, sad.u, exact, geom);
      row.rate = (level > 0 && prev_err > 0.0 && row.error > 0.0)
                     ? std::log2(prev_err / row.error)
                     : std::numeric_limits<double>::quiet_NaN();
      prev_err = row.error;
    }
    row.wall_ms = now_ms() - t0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConditioningRow> run_conditioning(const StudyConfig& cfg) {
  cfg.validate();
  const ImmersedGeometry geom = cfg.geometry.make();

  struct Task {
    int level;
    double ratio;
  };
  std::vector<Task> tasks;
  for (int level : cfg.sweep_levels)
    for (double ratio : cfg.h_gamma_ratios) tasks.push_back({level, ratio});

  std::vector<ConditioningRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) break;
      const Task& task = tasks[idx];
      const double t0 = now_ms();
      LevelSetup ls = assemble_level(cfg, geom, task.level, task.ratio);
      ConditioningRow row;
      row.level = task.level;
      row.h = ls.mesh.h;
      row.n = ls.state.n;
      row.m = ls.control.m;
      row.ratio = task.ratio;
      row.h_gamma = ls.segmentation.h_gamma;
      row.d_H = hausdorff_distance(geom, ls.mesh.boundary_polyline(), 2048);
      if (ls.control.m > cfg.dense_eigen_cap)
        throw std::runtime_error("run_conditioning: m exceeds dense_eigen_cap");
      const ReducedHessian rh = reduced_hessian(ls.system, ls.objective);
      row.kappa = rh.cond;
      row.lambda_min = rh.lambda_min;
      row.lambda_max = rh.lambda_max;
      row.singular = rh.singular;
      row.wall_ms = now_ms() - t0;
      rows[idx] = row;
    }
  };
  const int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

nlohmann::json run_single_solve(const StudyConfig& cfg) {
  cfg.validate();
  const ImmersedGeometry geom = cfg.geometry.make();
  const double t0 = now_ms();
  LevelSetup ls = assemble_level(cfg, geom, 0);
  SaddleSolution sad = solve_saddle(ls.system, ls.objective);

  nlohmann::json j;
  j["geometry"] = cfg.geometry.name();
  j["pde"] = cfg.pde_name();
  j["p"] = cfg.p;
  j["h"] = ls.mesh.h;
  j["n"] = ls.state.n;
  j["m"] = ls.control.m;
  j["n_gamma"] = ls.segmentation.n_segments;
  j["h_gamma"] = ls.segmentation.h_gamma;
  j["regularization"] = cfg.regularization.name();
  j["singular"] = sad.singular;
  if (!sad.singular) {
    j["objective"] = sad.objective;
    j["kkt_residuals"] = {sad.res_stationarity_u, sad.res_stationarity_c,
                          sad.res_feasibility};
    j["kkt_relative_residual"] = sad.relative_residual();
    const Vec2 lambda = cfg.lambda;
    const double mu = cfg.mu;
    const SolutionKind sol = cfg.solution;
    j["l2_error"] = l2_error(
        ls.mesh, ls.state, sad.u,
        [sol, lambda, mu](const Vec2& x) {
          return manufactured_solution(sol, x, lambda, mu).u;
        },
        geom);
  } else {
    j["note"] = sad.note;
  }
  j["wall_time_ms"] = now_ms() - t0;
  return j;
}

std::string csv_header() {
  return "study,geometry,pde,p,level,h,n,m,h_gamma,dH,kappa,l2_error,rate,"
         "singular_flag,wall_time_ms";
}

namespace {
std::string csv_prefix(const std::string& study, const StudyConfig& cfg,
                       int level, double h, int n, int m, double h_gamma,
                       double dH) {
  std::string s;
  s += study + "," + cfg.geometry.name() + "," + cfg.pde_name() + "," +
       std::to_string(cfg.p) + "," + std::to_string(level) + "," + fmt(h) +
       "," + std::to_string(n) + "," + std::to_string(m) + "," +
       fmt(h_gamma) + "," + fmt(dH);
  return s;
}
}  // namespace

std::string csv_line(const std::string& study, const StudyConfig& cfg,
                     const ConvergenceRow& row) {
  return csv_prefix(study, cfg, row.level, row.h, row.n, row.m, row.h_gamma,
                    row.d_H) +
         ",," + fmt(row.error) + "," + fmt(row.rate) + "," +
         (row.singular ? "1" : "0") + "," + fmt(row.wall_ms);
}

std::string csv_line(const std::string& study, const StudyConfig& cfg,
                     const ConditioningRow& row) {
  return csv_prefix(study, cfg, row.level, row.h, row.n, row.m, row.h_gamma,
                    row.d_H) +
         "," + fmt(row.kappa) + ",,," + (row.singular ? "1" : "0") + "," +
         fmt(row.wall_ms);
}

void write_csv(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << csv_header() << "\n";
  for (const auto& line : lines) out << line << "\n";
}

nlohmann::json mesh_to_json(const ActiveMesh& mesh) {
  nlohmann::json j;
  j["h"] = mesh.h;
  j["cell"] = mesh.background.cell;
  j["origin"] = {mesh.background.origin.x(), mesh.background.origin.y()};
  j["nx"] = mesh.background.nx;
  j["ny"] = mesh.background.ny;
  auto tris = nlohmann::json::array();
  for (int k = 0; k < mesh.size(); ++k) {
    const auto v = mesh.triangle(k);
    tris.push_back({{v[0].x(), v[0].y()},
                    {v[1].x(), v[1].y()},
                    {v[2].x(), v[2].y()}});
  }
  j["triangles"] = tris;
  auto bnd = nlohmann::json::array();
  for (const auto& be : mesh.boundary_edges) {
    const auto ep = mesh.edge_endpoints(be.elem, be.edge);
    bnd.push_back({{ep[0].x(), ep[0].y()}, {ep[1].x(), ep[1].y()}});
  }
  j["boundary_edges"] = bnd;
  return j;
}

}  // namespace iibm
