// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
//
// dls: discontinuous least-squares solver for the Helmholtz equation.
//
//   dls study <config> [--output dir] [--threads n]   run a configured study
//   dls mesh-info <meshfile>                          inspect a mesh file
//   dls dump-matrix <config> <out.coo> [--threads n]  write the assembled matrix
#include <CLI11.hpp>
#include <iostream>

#include "dls/study.hpp"

namespace {

int cmd_study(const std::string& config_path, const std::string& output_dir) {
  auto cfg = dls::parse_config_file(config_path);
  auto result = dls::run_study(cfg, output_dir);
  for (const auto& f : result.outputs) std::cout << "wrote " << f << "\n";
  if (!result.all_converged) {
    std::cerr << "dls: solver failed to converge in at least one run\n";
    return 3;
  }
  return 0;
}

int cmd_mesh_info(const std::string& path) {
  auto mesh = dls::read_mesh_file(path);
  int n_dir = 0, n_rob = 0, n_int = 0;
  for (const auto& f : mesh.faces) {
    if (f.neighbor >= 0)
      ++n_int;
    else if (f.tag == dls::BoundaryTag::dirichlet)
      ++n_dir;
    else
      ++n_rob;
  }
  std::cout << "dim          " << mesh.dim << "\n";
  std::cout << "vertices     " << mesh.n_vertices() << "\n";
  std::cout << "elements     " << mesh.n_elements() << "\n";
  std::cout << "faces        " << mesh.n_faces() << " (" << n_int << " interior, " << n_dir
            << " dirichlet, " << n_rob << " robin)\n";
  std::cout << "h_max        " << mesh.max_diameter() << "\n";
  std::cout << "h_min        " << mesh.min_diameter() << "\n";
  std::cout << "measure      " << mesh.total_volume() << "\n";
  double ratio = mesh.worst_shape_ratio();
  std::cout << "shape ratio  " << ratio << (ratio > 20.0 ? "  (warning: above 20)" : "") << "\n";
  std::cout << "conforming   " << (mesh.conforming() ? "yes" : "no") << "\n";
  return mesh.conforming() ? 0 : 2;
}

int cmd_dump_matrix(const std::string& config_path, const std::string& out_path) {
  auto cfg = dls::parse_config_file(config_path);
  auto problem = dls::detail::build_problem(cfg);
  auto mesh = problem.initial_mesh(cfg.n);
  auto sys = dls::assemble(mesh, cfg.degree, problem, cfg.penalty_scale);
  std::ofstream out(out_path);
  if (!out) throw dls::ConfigError("cannot open output file: " + out_path);
  dls::dump_matrix(sys, out);
  std::cout << "wrote " << out_path << " (" << sys.matrix.rows << " rows, " << sys.matrix.nnz()
            << " entries)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discontinuous least-squares Helmholtz solver"};
  app.require_subcommand(1);
  int threads = 1;

  std::string config_path, output_dir = ".", mesh_path, coo_path;
  auto* study = app.add_subcommand("study", "run a study described by a config file");
  study->add_option("config", config_path, "config file")->required();
  study->add_option("--output", output_dir, "output directory (default .)");
  study->add_option("--threads", threads, "worker threads");

  auto* info = app.add_subcommand("mesh-info", "print mesh statistics");
  info->add_option("meshfile", mesh_path, "mesh file")->required();

  auto* dump = app.add_subcommand("dump-matrix", "assemble and dump the matrix in coordinate format");
  dump->add_option("config", config_path, "config file")->required();
  dump->add_option("out", coo_path, "output file (row col re im)")->required();
  dump->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);
  dls::set_thread_count(threads);

  try {
    if (study->parsed()) return cmd_study(config_path, output_dir);
    if (info->parsed()) return cmd_mesh_info(mesh_path);
    if (dump->parsed()) return cmd_dump_matrix(config_path, coo_path);
  } catch (const dls::ConfigError& e) {
    std::cerr << "dls: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dls: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
