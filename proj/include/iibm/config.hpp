#pragma once

#include <string>
#include <vector>

#include "iibm/geometry.hpp"
#include "iibm/manufactured.hpp"
#include "iibm/objective.hpp"
#include "json.hpp"

namespace iibm {

enum class PDEKind { Advection, Diffusion, AdvDiff };

struct GeometryConfig {
  ShapeKind kind = ShapeKind::Circle;
  double radius = 1.0;
  double a = 0.9, b = 0.5;
  double r0 = 0.65, r1 = 0.25;
  int lobes = 5;
  Vec2 center{0, 0};

  ImmersedGeometry make() const;
  std::string name() const;
};

struct RegularizationConfig {
  Regularization kind = Regularization::Penalty;
  double alpha = 1.0;
  double c0 = 0.0;
  std::string name() const;
};

/// One experiment description; mirrors the JSON config schema.
struct StudyConfig {
  GeometryConfig geometry;
  PDEKind pde = PDEKind::Diffusion;
  Vec2 lambda{0, 0};
  double mu = 1.0;
  int p = 1;
  double H = 0.2;
  int levels = 3;
  double h_gamma_ratio = 0.5;
  RegularizationConfig regularization;
  SolutionKind solution = SolutionKind::Smooth;
  std::string out;

  // conditioning-study extras
  std::vector<double> h_gamma_ratios{0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  std::vector<int> sweep_levels{0};
  int dense_eigen_cap = 2000;
  int threads = 1;

  std::string pde_name() const;
  void validate() const;
};

StudyConfig parse_study_config(const nlohmann::json& j);
StudyConfig load_study_config(const std::string& path);

}  // namespace iibm
