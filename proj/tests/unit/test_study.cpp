#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "doctest.h"
#include "iibm/study.hpp"

using namespace iibm;

namespace {
constexpr double kPi = 3.14159265358979323846;

StudyConfig disk_diffusion(int p, int levels) {
  StudyConfig cfg;
  cfg.geometry.kind = ShapeKind::Circle;
  cfg.geometry.radius = 1.0;
  cfg.pde = PDEKind::Diffusion;
  cfg.lambda = Vec2(0, 0);
  cfg.mu = 1.0;
  cfg.p = p;
  cfg.H = 0.2;
  cfg.levels = levels;
  return cfg;
}

// strip the wall_time_ms column (the one nondeterministic field)
std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out += line.substr(0, pos) + "\n";
  }
  return out;
}
}  // namespace

TEST_SUITE_BEGIN("study");

TEST_CASE("config parsing and validation") {
  const auto j = nlohmann::json::parse(R"({
    "geometry": {"kind": "star", "r0": 0.65, "r1": 0.25},
    "pde": "advdiff",
    "p": 2,
    "H": 0.1,
    "levels": 3,
    "h_gamma_ratio": 0.5,
    "regularization": {"kind": "penalty", "alpha": 1.0},
    "solution": "smooth"
  })");
  const StudyConfig cfg = parse_study_config(j);
  CHECK(cfg.geometry.kind == ShapeKind::Star);
  CHECK(cfg.pde == PDEKind::AdvDiff);
  CHECK(cfg.lambda.x() == 1.0);
  CHECK(cfg.mu == doctest::Approx(1e-2));
  CHECK(cfg.p == 2);

  auto bad = j;
  bad["pde"] = "advection";
  bad["mu"] = 0.5;  // advection requires mu = 0
  CHECK_THROWS(parse_study_config(bad));
  bad = j;
  bad["levels"] = 9;
  CHECK_THROWS(parse_study_config(bad));
}

TEST_CASE("l2_error basics") {
  const StudyConfig cfg = disk_diffusion(2, 1);
  const ImmersedGeometry geom = cfg.geometry.make();
  LevelSetup ls = assemble_level(cfg, geom, 0);

  const ScalarField poly = [](const Vec2& x) {
    return 1.0 + x.x() - 0.5 * x.y() + x.x() * x.y();
  };
  const Eigen::VectorXd u = interpolate(ls.mesh, ls.state, poly);
  CHECK(l2_error(ls.mesh, ls.state, u, poly, geom) < 1e-12);

  // constant offset: error^2 = quadrature measure of the interior ~ |Omega|
  const Eigen::VectorXd shifted = u + Eigen::VectorXd::Ones(ls.state.n);
  const double err = l2_error(ls.mesh, ls.state, shifted, poly, geom);
  CHECK(err * err == doctest::Approx(kPi).epsilon(0.05));
}

TEST_CASE("h_gamma tracks the requested ratio") {
  const StudyConfig cfg = disk_diffusion(1, 1);
  const ImmersedGeometry geom = cfg.geometry.make();
  for (int level : {0, 1}) {
    LevelSetup ls = assemble_level(cfg, geom, level);
    CHECK(ls.segmentation.h_gamma / ls.mesh.h ==
          doctest::Approx(0.5).epsilon(0.02));
  }
  // L-shape counts stay multiples of 8
  StudyConfig lcfg = disk_diffusion(1, 1);
  lcfg.geometry.kind = ShapeKind::LShape;
  lcfg.H = 0.25;
  lcfg.solution = SolutionKind::LShapeSingular;
  const ImmersedGeometry lgeom = lcfg.geometry.make();
  LevelSetup lls = assemble_level(lcfg, lgeom, 0);
  CHECK(lls.segmentation.n_segments % 8 == 0);
}

TEST_CASE("convergence study on the disk shrinks the error monotonically") {
  StudyConfig cfg = disk_diffusion(1, 3);
  const auto rows = run_convergence(cfg);
  REQUIRE(rows.size() == 3);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i].singular);
    if (i > 0) {
      CHECK(rows[i].error < rows[i - 1].error);
      CHECK(rows[i].h == doctest::Approx(rows[i - 1].h / 2));
    }
  }
  // rate already near p+1 = 2 by the third level
  CHECK(rows[2].rate > 1.4);
}

TEST_CASE("tikhonov regularization stalls convergence where penalty does not") {
  StudyConfig cfg = disk_diffusion(1, 4);
  cfg.regularization.kind = Regularization::Tikhonov;
  cfg.regularization.alpha = 1.0;
  cfg.regularization.c0 = 0.0;
  const auto rows = run_convergence(cfg);
  REQUIRE(rows.size() == 4);
  // observed rate < p + 0.5 at the finest two levels
  CHECK(rows[3].rate < 1.5);
}

TEST_CASE("kappa grows as dof spacing shrinks relative to d_H") {
  // vary p at fixed h: x = h/(p d_H) decreases with p and kappa blows up
  // toward small x
  std::vector<std::pair<double, double>> pts;  // (x, kappa)
  for (int p : {1, 2, 3}) {
    StudyConfig cfg = disk_diffusion(p, 1);
    cfg.H = 0.18;
    cfg.h_gamma_ratios = {0.25};
    cfg.sweep_levels = {0};
    const auto rows = run_conditioning(cfg);
    REQUIRE(rows.size() == 1);
    REQUIRE_FALSE(rows[0].singular);
    pts.push_back({rows[0].h / (p * rows[0].d_H), rows[0].kappa});
  }
  std::sort(pts.begin(), pts.end());
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    CHECK(pts[i].second >= 0.8 * pts[i + 1].second);  // decreasing in x
}

TEST_CASE("singular levels are reported without aborting the sequence") {
  StudyConfig cfg;
  cfg.geometry.kind = ShapeKind::Circle;
  cfg.pde = PDEKind::Advection;
  cfg.lambda = Vec2(1, 1);
  cfg.mu = 0.0;
  cfg.p = 1;
  cfg.H = 0.2;
  cfg.levels = 2;
  cfg.regularization.kind = Regularization::None;
  const auto rows = run_convergence(cfg);
  REQUIRE(rows.size() == 2);  // every level present despite singularity
  for (const auto& r : rows) {
    CHECK(r.singular);
    CHECK(std::isnan(r.error));
  }
}

TEST_CASE("conditioning sweep flags the unregularized threshold") {
  StudyConfig cfg = disk_diffusion(1, 1);
  cfg.regularization.kind = Regularization::None;
  cfg.h_gamma_ratios = {0.25, 2.0};
  cfg.sweep_levels = {0};
  const auto rows = run_conditioning(cfg);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].singular);
  CHECK(rows[1].singular);
  CHECK(rows[0].kappa >= 1.0);
}

TEST_CASE("conditioning sweep is deterministic and thread-invariant") {
  StudyConfig cfg = disk_diffusion(1, 1);
  cfg.h_gamma_ratios = {0.25, 0.5, 1.0};
  cfg.sweep_levels = {0};
  cfg.threads = 1;
  const auto rows1 = run_conditioning(cfg);
  cfg.threads = 2;
  const auto rows2 = run_conditioning(cfg);
  REQUIRE(rows1.size() == rows2.size());
  for (size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].kappa == rows2[i].kappa);
    CHECK(rows1[i].ratio == rows2[i].ratio);
  }
}

TEST_CASE("study CSV is byte-identical across reruns (wall time aside)") {
  StudyConfig cfg = disk_diffusion(1, 2);
  auto render = [&]() {
    const auto rows = run_convergence(cfg);
    std::string csv = csv_header() + "\n";
    for (const auto& row : rows) csv += csv_line("convergence", cfg, row) + "\n";
    return strip_wall_time(csv);
  };
  CHECK(render() == render());
}

TEST_CASE("single solve emits the JSON summary") {
  StudyConfig cfg = disk_diffusion(1, 1);
  const auto j = run_single_solve(cfg);
  CHECK(j["geometry"] == "circle");
  CHECK(j["pde"] == "diffusion");
  CHECK_FALSE(j["singular"].get<bool>());
  CHECK(j["kkt_relative_residual"].get<double>() < 1e-10);
  CHECK(j.contains("l2_error"));
}

TEST_CASE("mesh dump JSON shape") {
  StudyConfig cfg = disk_diffusion(1, 1);
  const ImmersedGeometry geom = cfg.geometry.make();
  LevelSetup ls = assemble_level(cfg, geom, 0);
  const auto j = mesh_to_json(ls.mesh);
  CHECK(j["triangles"].size() == size_t(ls.mesh.size()));
  CHECK(j["boundary_edges"].size() == ls.mesh.boundary_edges.size());
}

TEST_SUITE_END();
