// Command-line driver for the inverse immersed-boundary studies.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <unsupported/Eigen/SparseExtra>
#include <vector>

#include "CLI11.hpp"
#include "iibm/model_problem.hpp"
#include "iibm/study.hpp"

namespace {

using namespace iibm;

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

int cmd_solve(const std::string& config_path, const std::string& out,
              const std::string& mesh_dump, const std::string& system_dump,
              int threads) {
  StudyConfig cfg = load_study_config(config_path);
  if (threads > 0) cfg.threads = threads;
  const nlohmann::json j = run_single_solve(cfg);
  emit(out.empty() ? cfg.out : out, j.dump(2) + "\n");
  if (!mesh_dump.empty() || !system_dump.empty()) {
    LevelSetup ls = assemble_level(cfg, cfg.geometry.make(), 0);
    if (!mesh_dump.empty()) {
      std::ofstream mout(mesh_dump);
      mout << mesh_to_json(ls.mesh).dump() << "\n";
    }
    if (!system_dump.empty()) {
      Eigen::saveMarket(ls.system.A_u, system_dump + "_Au.mtx");
      Eigen::saveMarket(ls.system.A_c, system_dump + "_Ac.mtx");
      Eigen::saveMarketVector(ls.system.f, system_dump + "_f.mtx");
    }
  }
  return j.value("singular", false) ? 2 : 0;
}

int cmd_convergence(const std::string& config_path, const std::string& out,
                    int threads) {
  StudyConfig cfg = load_study_config(config_path);
  if (threads > 0) cfg.threads = threads;
  const auto rows = run_convergence(cfg);
  std::vector<std::string> lines;
  for (const auto& row : rows) lines.push_back(csv_line("convergence", cfg, row));
  const std::string path = out.empty() ? cfg.out : out;
  if (path.empty()) {
    std::cout << csv_header() << "\n";
    for (const auto& l : lines) std::cout << l << "\n";
  } else {
    write_csv(path, lines);
  }
  return 0;
}

int cmd_conditioning(const std::string& config_path, const std::string& out,
                     int threads) {
  StudyConfig cfg = load_study_config(config_path);
  if (threads > 0) cfg.threads = threads;
  const auto rows = run_conditioning(cfg);
  std::vector<std::string> lines;
  for (const auto& row : rows) lines.push_back(csv_line("conditioning", cfg, row));
  const std::string path = out.empty() ? cfg.out : out;
  if (path.empty()) {
    std::cout << csv_header() << "\n";
    for (const auto& l : lines) std::cout << l << "\n";
  } else {
    write_csv(path, lines);
  }
  return 0;
}

int cmd_model_hessian(const std::string& config_path, const std::string& out) {
  std::vector<std::pair<double, double>> shapes{{0.9, 0.9}, {0.8, 0.8},
                                                {0.9, 0.5}};
  std::vector<int> Ks{16, 32, 50, 64};
  int n0 = 300;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    nlohmann::json j;
    in >> j;
    if (j.contains("shapes")) {
      shapes.clear();
      for (const auto& s : j["shapes"])
        shapes.emplace_back(s[0].get<double>(), s[1].get<double>());
    }
    if (j.contains("K_list")) Ks = j["K_list"].get<std::vector<int>>();
    n0 = j.value("n", 300);
  }
  const auto rows = conditioning_sweep(shapes, Ks, n0);
  std::string text = "K,a,b,h,d_H,h_over_dH,cond\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  r.K, r.a, r.b, r.h, r.d_H, r.h_over_dH, r.cond);
    text += buf;
  }
  emit(out, text);
  return 0;
}

int cmd_illposed(int n, double R) {
  const double ratio = illposedness_amplification(n, R);
  std::printf("n=%d R=%.12g amplification=%.12g\n", n, R, ratio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse immersed-boundary method studies"};
  app.require_subcommand(1);

  std::string config_path, out, mesh_dump, system_dump;
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for sweeps");

  auto* solve = app.add_subcommand("solve", "single solve, JSON summary");
  solve->add_option("--config", config_path, "config file")->required();
  solve->add_option("--out", out, "output path (stdout if omitted)");
  solve->add_option("--dump-mesh", mesh_dump, "write the active mesh as JSON");
  solve->add_option("--dump-system", system_dump,
                    "write A_u/A_c/f in Matrix Market format with this prefix");

  auto* conv = app.add_subcommand("convergence", "refinement study, CSV");
  conv->add_option("--config", config_path, "config file")->required();
  conv->add_option("--out", out, "output path (stdout if omitted)");

  auto* cond = app.add_subcommand("conditioning", "reduced-Hessian sweep, CSV");
  cond->add_option("--config", config_path, "config file")->required();
  cond->add_option("--out", out, "output path (stdout if omitted)");

  auto* model = app.add_subcommand("model-hessian",
                                   "analytic disk model sweep, CSV");
  model->add_option("--config", config_path, "optional config file");
  model->add_option("--out", out, "output path (stdout if omitted)");

  int ip_n = 10;
  double ip_R = 1.25;
  auto* ill = app.add_subcommand("illposed-demo",
                                 "sinusoid amplification ratio");
  ill->add_option("--n", ip_n, "mode number");
  ill->add_option("--R", ip_R, "outer radius");

  for (auto* sub : app.get_subcommands(nullptr))
    sub->fallthrough();  // accept --threads after the subcommand

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(config_path, out, mesh_dump, system_dump, threads);
    if (conv->parsed()) return cmd_convergence(config_path, out, threads);
    if (cond->parsed()) return cmd_conditioning(config_path, out, threads);
    if (model->parsed()) return cmd_model_hessian(config_path, out);
    if (ill->parsed()) return cmd_illposed(ip_n, ip_R);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
