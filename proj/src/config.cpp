#include "iibm/config.hpp"

#include <fstream>
#include <stdexcept>

namespace iibm {

using nlohmann::json;

ImmersedGeometry GeometryConfig::make() const {
  switch (kind) {
    case ShapeKind::Circle: return ImmersedGeometry::circle(radius, center);
    case ShapeKind::Ellipse: return ImmersedGeometry::ellipse(a, b, center);
    case ShapeKind::Star: return ImmersedGeometry::star(r0, r1, lobes, center);
    case ShapeKind::LShape: return ImmersedGeometry::lshape(center);
  }
  throw std::logic_error("GeometryConfig: unknown kind");
}

std::string GeometryConfig::name() const {
  switch (kind) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Star: return "star";
    case ShapeKind::LShape: return "lshape";
  }
  return "?";
}

std::string RegularizationConfig::name() const {
  switch (kind) {
    case Regularization::None: return "none";
    case Regularization::Penalty: return "penalty";
    case Regularization::Tikhonov: return "tikhonov";
  }
  return "?";
}

std::string StudyConfig::pde_name() const {
  switch (pde) {
    case PDEKind::Advection: return "advection";
    case PDEKind::Diffusion: return "diffusion";
    case PDEKind::AdvDiff: return "advdiff";
  }
  return "?";
}

void StudyConfig::validate() const {
  if (pde == PDEKind::Advection && mu != 0.0)
    throw std::invalid_argument("config: advection requires mu = 0");
  if (pde == PDEKind::Diffusion && lambda.norm() != 0.0)
    throw std::invalid_argument("config: diffusion requires lambda = 0");
  if (p < 1 || p > 4) throw std::invalid_argument("config: p must be in [1,4]");
  if (levels < 1 || levels > 5)
    throw std::invalid_argument("config: levels must be in [1,5]");
  if (H <= 0.0) throw std::invalid_argument("config: H must be positive");
  if (h_gamma_ratio <= 0.0)
    throw std::invalid_argument("config: h_gamma_ratio must be positive");
}

namespace {
GeometryConfig parse_geometry(const json& j) {
  GeometryConfig g;
  const std::string kind = j.value("kind", "circle");
  if (kind == "circle") {
    g.kind = ShapeKind::Circle;
    g.radius = j.value("radius", 1.0);
  } else if (kind == "ellipse") {
    g.kind = ShapeKind::Ellipse;
    g.a = j.at("a").get<double>();
    g.b = j.at("b").get<double>();
  } else if (kind == "star") {
    g.kind = ShapeKind::Star;
    g.r0 = j.value("r0", 0.65);
    g.r1 = j.value("r1", 0.25);
    g.lobes = j.value("lobes", 5);
  } else if (kind == "lshape") {
    g.kind = ShapeKind::LShape;
  } else {
    throw std::invalid_argument("config: unknown geometry kind '" + kind + "'");
  }
  if (j.contains("center")) {
    g.center = Vec2(j["center"][0].get<double>(), j["center"][1].get<double>());
  }
  return g;
}
}  // namespace

StudyConfig parse_study_config(const json& j) {
  StudyConfig cfg;
  if (j.contains("geometry")) cfg.geometry = parse_geometry(j["geometry"]);

  const std::string pde = j.value("pde", "diffusion");
  if (pde == "advection") {
    cfg.pde = PDEKind::Advection;
    cfg.lambda = Vec2(1, 1);
    cfg.mu = 0.0;
  } else if (pde == "diffusion") {
    cfg.pde = PDEKind::Diffusion;
    cfg.lambda = Vec2(0, 0);
    cfg.mu = 1.0;
  } else if (pde == "advdiff") {
    cfg.pde = PDEKind::AdvDiff;
    cfg.lambda = Vec2(1, 1);
    cfg.mu = 1e-2;
  } else {
    throw std::invalid_argument("config: unknown pde '" + pde + "'");
  }
  if (j.contains("lambda"))
    cfg.lambda = Vec2(j["lambda"][0].get<double>(), j["lambda"][1].get<double>());
  if (j.contains("mu")) cfg.mu = j["mu"].get<double>();

  cfg.p = j.value("p", 1);
  cfg.H = j.value("H", 0.2);
  cfg.levels = j.value("levels", 3);
  cfg.h_gamma_ratio = j.value("h_gamma_ratio", 0.5);

  if (j.contains("regularization")) {
    const auto& r = j["regularization"];
    const std::string kind = r.value("kind", "penalty");
    if (kind == "none") cfg.regularization.kind = Regularization::None;
    else if (kind == "penalty") cfg.regularization.kind = Regularization::Penalty;
    else if (kind == "tikhonov") cfg.regularization.kind = Regularization::Tikhonov;
    else throw std::invalid_argument("config: unknown regularization '" + kind + "'");
    cfg.regularization.alpha = r.value("alpha", 1.0);
    cfg.regularization.c0 = r.value("c0", 0.0);
  }

  const std::string sol = j.value("solution", "smooth");
  if (sol == "smooth") cfg.solution = SolutionKind::Smooth;
  else if (sol == "lshape_singular") cfg.solution = SolutionKind::LShapeSingular;
  else throw std::invalid_argument("config: unknown solution '" + sol + "'");

  cfg.out = j.value("out", "");
  if (j.contains("h_gamma_ratios"))
    cfg.h_gamma_ratios = j["h_gamma_ratios"].get<std::vector<double>>();
  if (j.contains("sweep_levels"))
    cfg.sweep_levels = j["sweep_levels"].get<std::vector<int>>();
  cfg.dense_eigen_cap = j.value("dense_eigen_cap", 2000);
  cfg.threads = j.value("threads", 1);

  cfg.validate();
  return cfg;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return parse_study_config(j);
}

}  // namespace iibm
