#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iibm/config.hpp"
#include "iibm/optimizer.hpp"

namespace iibm {

/// Everything assembled for one mesh level of a study.
struct LevelSetup {
  ActiveMesh mesh;
  StateSpace state;
  ControlSpace control;
  BoundarySegmentation segmentation;
  DGSystem system;
  ObjectiveBlocks objective;
};

/// Background rectangle for a geometry: bounding box inflated by 2H.
Rect study_bounds(const ImmersedGeometry& geom, double H);

/// Number of boundary segments giving h_gamma/h ~ ratio (multiple of 8 for
/// the L-shape so corners stay on segment endpoints).
int segment_count_for_ratio(const ImmersedGeometry& geom, double ratio, double h);

/// Assemble mesh, spaces, PDE and objective for refinement level `level` of
/// the config (level 0 = coarsest). `ratio_override` replaces
/// cfg.h_gamma_ratio when set.
LevelSetup assemble_level(const StudyConfig& cfg, const ImmersedGeometry& geom,
                          int level,
                          std::optional<double> ratio_override = {});

/// L2 error against the exact solution, zeroing quadrature points outside the
/// immersed domain.
double l2_error(const ActiveMesh& mesh, const StateSpace& state,
                const Eigen::VectorXd& u, const ScalarField& exact,
                const ImmersedGeometry& geom);

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  int n = 0, m = 0;
  double h_gamma = 0, d_H = 0;
  double error = 0;
  double rate = 0;  // log2(err_prev / err), 0 at the first level
  bool singular = false;
  double wall_ms = 0;
};

std::vector<ConvergenceRow> run_convergence(const StudyConfig& cfg);

struct ConditioningRow {
  int level = 0;
  double h = 0;
  int n = 0, m = 0;
  double ratio = 0, h_gamma = 0, d_H = 0;
  double kappa = 0, lambda_min = 0, lambda_max = 0;
  bool singular = false;
  double wall_ms = 0;
};

std::vector<ConditioningRow> run_conditioning(const StudyConfig& cfg);

/// Single solve at level 0; returns the JSON summary (objective, KKT
/// residuals, dimensions).
nlohmann::json run_single_solve(const StudyConfig& cfg);

/// Fixed study CSV schema: study, geometry, pde, p, level, h, n, m, h_gamma,
/// dH, kappa, l2_error, rate, singular_flag, wall_time_ms.
std::string csv_header();
std::string csv_line(const std::string& study, const StudyConfig& cfg,
                     const ConvergenceRow& row);
std::string csv_line(const std::string& study, const StudyConfig& cfg,
                     const ConditioningRow& row);
void write_csv(const std::string& path, const std::vector<std::string>& lines);

nlohmann::json mesh_to_json(const ActiveMesh& mesh);

}  // namespace iibm
