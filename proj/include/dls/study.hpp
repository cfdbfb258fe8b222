// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dls/analysis.hpp"

namespace dls {

// Configuration error (bad file, bad key, bad value); the CLI maps these to
// exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StudyKind { uniform_convergence, adaptive, k2h, single_solve };

struct StudyConfig {
  // [problem]
  std::string problem_name;
  ProblemParams params;
  // [study]
  StudyKind kind = StudyKind::uniform_convergence;
  int degree = 1;
  int n = 4;                      // initial mesh resolution (1/h label)
  int levels = 4;                 // uniform_convergence
  double lambda = 0.45;           // adaptive
  std::int64_t max_dofs = 0;      // adaptive stop criteria
  int max_iterations = -1;
  double eta_threshold = 0.0;
  std::vector<double> k_values;   // k2h
  int samples = 101;              // single_solve grid per axis
  double penalty_scale = 1.0;
  std::string output;             // output basename (default: config file stem)
  // [solver]
  SolverConfig solver;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t pos;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline std::int64_t parse_int(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t pos;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects an integer, got '" + v + "'");
  }
}

}  // namespace detail

inline void validate_config(const StudyConfig& cfg) {
  if (cfg.problem_name.empty()) throw ConfigError("missing required key: [problem] name");
  if (!(cfg.params.k > 0.0)) throw ConfigError("k must be positive");
  if (cfg.degree < 1 || cfg.degree > 4) throw ConfigError("degree out of [1, 4]");
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  if (!(cfg.penalty_scale > 0.0)) throw ConfigError("penalty_scale must be positive");
  if (cfg.kind == StudyKind::uniform_convergence && cfg.levels < 1)
    throw ConfigError("levels must be >= 1");
  if (cfg.kind == StudyKind::adaptive) {
    if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0)) throw ConfigError("lambda out of (0,1)");
    if (cfg.max_dofs <= 0 && cfg.max_iterations < 0 && cfg.eta_threshold <= 0.0)
      throw ConfigError("adaptive study needs a stop criterion (max_dofs, max_iterations or eta_threshold)");
  }
  if (cfg.kind == StudyKind::k2h) {
    if (cfg.k_values.empty()) throw ConfigError("k2h study needs k_values");
    for (double k : cfg.k_values)
      if (!(k > 0.0)) throw ConfigError("k_values must be positive");
  }
  if (cfg.kind == StudyKind::single_solve && cfg.samples < 2) throw ConfigError("samples must be >= 2");
  if (!(cfg.solver.rel_tolerance > 0.0 && cfg.solver.rel_tolerance < 1.0))
    throw ConfigError("rel_tolerance out of (0,1)");
}

// key = value file with [problem] / [study] / [solver] sections and `#`
// comments. Unknown keys are rejected with their line number.
inline StudyConfig parse_config(std::istream& in, const std::string& origin = "<stream>") {
  StudyConfig cfg;
  std::string line, section;
  int lineno = 0;
  bool have_name = false, have_kind = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
      section = line.substr(1, line.size() - 2);
      if (section != "problem" && section != "study" && section != "solver")
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key + "' outside any section");

    auto bad_key = [&]() {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "' in [" +
                        section + "]");
    };
    if (section == "problem") {
      if (key == "name") {
        cfg.problem_name = value;
        have_name = true;
      } else if (key == "k")
        cfg.params.k = detail::parse_double(key, value, lineno);
      else if (key == "alpha")
        cfg.params.alpha = detail::parse_double(key, value, lineno);
      else if (key == "theta")
        cfg.params.theta = detail::parse_double(key, value, lineno);
      else if (key == "phi")
        cfg.params.phi = detail::parse_double(key, value, lineno);
      else if (key == "a")
        cfg.params.a = detail::parse_double(key, value, lineno);
      else if (key == "n")
        cfg.params.mode = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "poly_degree")
        cfg.params.poly_degree = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "poly_dim")
        cfg.params.poly_dim = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "segments")
        cfg.params.segments = static_cast<int>(detail::parse_int(key, value, lineno));
      else
        bad_key();
    } else if (section == "study") {
      if (key == "kind") {
        have_kind = true;
        if (value == "uniform_convergence")
          cfg.kind = StudyKind::uniform_convergence;
        else if (value == "adaptive")
          cfg.kind = StudyKind::adaptive;
        else if (value == "k2h")
          cfg.kind = StudyKind::k2h;
        else if (value == "single_solve")
          cfg.kind = StudyKind::single_solve;
        else
          throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown study kind '" + value + "'");
      } else if (key == "degree")
        cfg.degree = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "n")
        cfg.n = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "levels")
        cfg.levels = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "lambda")
        cfg.lambda = detail::parse_double(key, value, lineno);
      else if (key == "max_dofs")
        cfg.max_dofs = detail::parse_int(key, value, lineno);
      else if (key == "max_iterations")
        cfg.max_iterations = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "eta_threshold")
        cfg.eta_threshold = detail::parse_double(key, value, lineno);
      else if (key == "samples")
        cfg.samples = static_cast<int>(detail::parse_int(key, value, lineno));
      else if (key == "penalty_scale")
        cfg.penalty_scale = detail::parse_double(key, value, lineno);
      else if (key == "output")
        cfg.output = value;
      else if (key == "k_values") {
        cfg.k_values.clear();
        std::string v = value;
        for (char& c : v)
          if (c == ',') c = ' ';
        std::istringstream vs(v);
        std::string tok;
        while (vs >> tok) cfg.k_values.push_back(detail::parse_double(key, tok, lineno));
      } else
        bad_key();
    } else {  // solver
      if (key == "method") {
        if (value == "cg")
          cfg.solver.method = SolverConfig::Method::cg;
        else if (value == "bicgstab")
          cfg.solver.method = SolverConfig::Method::bicgstab;
        else
          throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown method '" + value + "'");
      } else if (key == "preconditioner") {
        if (value == "none")
          cfg.solver.preconditioner = SolverConfig::Preconditioner::none;
        else if (value == "jacobi")
          cfg.solver.preconditioner = SolverConfig::Preconditioner::jacobi;
        else if (value == "block_jacobi")
          cfg.solver.preconditioner = SolverConfig::Preconditioner::block_jacobi;
        else
          throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown preconditioner '" + value + "'");
      } else if (key == "rel_tolerance")
        cfg.solver.rel_tolerance = detail::parse_double(key, value, lineno);
      else if (key == "max_iterations")
        cfg.solver.max_iterations = detail::parse_int(key, value, lineno);
      else
        bad_key();
    }
  }
  if (!have_name) throw ConfigError(origin + ": missing required key: [problem] name");
  if (!have_kind) throw ConfigError(origin + ": missing required key: [study] kind");
  validate_config(cfg);
  return cfg;
}

inline StudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  auto cfg = parse_config(in, path);
  if (cfg.output.empty()) cfg.output = std::filesystem::path(path).stem().string();
  return cfg;
}

inline void emit_config(const StudyConfig& cfg, std::ostream& out) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "[problem]\n";
  out << "name = " << cfg.problem_name << "\n";
  out << "k = " << num(cfg.params.k) << "\n";
  out << "alpha = " << num(cfg.params.alpha) << "\n";
  out << "theta = " << num(cfg.params.theta) << "\n";
  out << "phi = " << num(cfg.params.phi) << "\n";
  out << "a = " << num(cfg.params.a) << "\n";
  out << "n = " << cfg.params.mode << "\n";
  out << "poly_degree = " << cfg.params.poly_degree << "\n";
  out << "poly_dim = " << cfg.params.poly_dim << "\n";
  out << "segments = " << cfg.params.segments << "\n";
  out << "\n[study]\n";
  const char* kinds[] = {"uniform_convergence", "adaptive", "k2h", "single_solve"};
  out << "kind = " << kinds[static_cast<int>(cfg.kind)] << "\n";
  out << "degree = " << cfg.degree << "\n";
  out << "n = " << cfg.n << "\n";
  out << "levels = " << cfg.levels << "\n";
  out << "lambda = " << num(cfg.lambda) << "\n";
  out << "max_dofs = " << cfg.max_dofs << "\n";
  out << "max_iterations = " << cfg.max_iterations << "\n";
  out << "eta_threshold = " << num(cfg.eta_threshold) << "\n";
  out << "samples = " << cfg.samples << "\n";
  out << "penalty_scale = " << num(cfg.penalty_scale) << "\n";
  if (!cfg.k_values.empty()) {
    out << "k_values =";
    for (double k : cfg.k_values) out << " " << num(k);
    out << "\n";
  }
  if (!cfg.output.empty()) out << "output = " << cfg.output << "\n";
  out << "\n[solver]\n";
  out << "method = " << (cfg.solver.method == SolverConfig::Method::cg ? "cg" : "bicgstab") << "\n";
  const char* precs[] = {"none", "jacobi", "block_jacobi"};
  out << "preconditioner = " << precs[static_cast<int>(cfg.solver.preconditioner)] << "\n";
  out << "rel_tolerance = " << num(cfg.solver.rel_tolerance) << "\n";
  out << "max_iterations = " << cfg.solver.max_iterations << "\n";
}

// ---- study execution ---------------------------------------------------------

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  std::int64_t n_elements = 0;
  std::int64_t n_dofs = 0;
  double energy_error = 0.0;
  double l2_u = 0.0;
  double l2_p = 0.0;
  double order_energy = 0.0;  // valid from the second row on
  double order_l2u = 0.0;
  double order_l2p = 0.0;
  bool has_order = false;
  std::int64_t solver_iterations = 0;
  double residual = 0.0;
  double wall_time_s = 0.0;
  bool converged = true;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  void to_csv(std::ostream& out) const {
    out << "level,h,n_elements,n_dofs,energy_error,l2_u,l2_p,order_energy,order_l2u,order_l2p,"
           "solver_iterations,residual,wall_time_s\n";
    char buf[64];
    auto num = [&buf](double v) {
      std::snprintf(buf, sizeof(buf), "%.9e", v);
      return std::string(buf);
    };
    for (const auto& r : rows) {
      out << r.level << "," << num(r.h) << "," << r.n_elements << "," << r.n_dofs << ","
          << num(r.energy_error) << "," << num(r.l2_u) << "," << num(r.l2_p) << ",";
      if (r.has_order)
        out << num(r.order_energy) << "," << num(r.order_l2u) << "," << num(r.order_l2p);
      else
        out << ",,";
      out << "," << r.solver_iterations << "," << num(r.residual) << "," << num(r.wall_time_s) << "\n";
    }
  }

  // least-squares slope of log2(error) against level (levels halve h)
  static double lsq_order(const std::vector<double>& errs) {
    const int n = static_cast<int>(errs.size());
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      double x = -double(i), y = std::log2(errs[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  void to_pretty(std::ostream& out) const {
    char line[256];
    out << "level        h    elements        dofs   energy_err     order        l2_u     order"
           "        l2_p     order  iters\n";
    std::vector<double> ee, eu, ep;
    for (const auto& r : rows) {
      ee.push_back(r.energy_error);
      eu.push_back(r.l2_u);
      ep.push_back(r.l2_p);
      auto ord = [&](double v) {
        if (!r.has_order) return std::string("     --- ");
        char b[32];
        std::snprintf(b, sizeof(b), "%9.2f", v);
        return std::string(b);
      };
      std::snprintf(line, sizeof(line), "%5d %8.5f %11lld %11lld %12.4e %s %11.4e %s %11.4e %s %6lld\n",
                    r.level, r.h, static_cast<long long>(r.n_elements),
                    static_cast<long long>(r.n_dofs), r.energy_error, ord(r.order_energy).c_str(),
                    r.l2_u, ord(r.order_l2u).c_str(), r.l2_p, ord(r.order_l2p).c_str(),
                    static_cast<long long>(r.solver_iterations));
      out << line;
    }
    std::snprintf(line, sizeof(line),
                  "least-squares orders: energy %.3f, l2_u %.3f, l2_p %.3f\n",
                  lsq_order(ee), lsq_order(eu), lsq_order(ep));
    out << line;
  }
};

struct StudyResult {
  ConvergenceTable table;                 // uniform_convergence
  std::vector<AdaptiveRecord> adaptive;   // adaptive
  bool all_converged = true;
  std::vector<std::string> outputs;       // files written
};

namespace detail {

inline ProblemSpec build_problem(const StudyConfig& cfg) {
  ProblemParams par = cfg.params;
  if (cfg.problem_name == "manufactured_poly" && par.poly_degree > cfg.degree)
    par.poly_degree = cfg.degree;
  return make_problem(cfg.problem_name, par);
}

inline std::string out_path(const StudyConfig& cfg, const std::string& dir, const std::string& suffix) {
  std::filesystem::path p(dir.empty() ? "." : dir);
  std::filesystem::create_directories(p);
  return (p / (cfg.output.empty() ? std::string("study") : cfg.output)).string() + suffix;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

inline void run_uniform(const StudyConfig& cfg, const std::string& dir, StudyResult& result) {
  auto problem = build_problem(cfg);
  SimplicialMesh mesh = problem.initial_mesh(cfg.n);
  for (int level = 0; level < cfg.levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    const auto t0 = std::chrono::steady_clock::now();
    auto sys = assemble(mesh, cfg.degree, problem, cfg.penalty_scale);
    auto [x, solve_rep] = solve(sys, cfg.solver);
    auto errors = compute_errors(mesh, cfg.degree, x, problem, cfg.penalty_scale);
    ConvergenceRow row;
    row.level = level;
    row.h = mesh.max_diameter();
    row.n_elements = mesh.n_elements();
    row.n_dofs = errors.n_dofs;
    row.energy_error = errors.energy_error;
    row.l2_u = errors.l2_u;
    row.l2_p = errors.l2_p;
    row.solver_iterations = solve_rep.iterations;
    row.residual = solve_rep.final_residual;
    row.converged = solve_rep.converged;
    if (!solve_rep.converged) result.all_converged = false;
    if (!result.table.rows.empty()) {
      const auto& prev = result.table.rows.back();
      row.has_order = true;
      row.order_energy = std::log2(prev.energy_error / row.energy_error);
      row.order_l2u = std::log2(prev.l2_u / row.l2_u);
      row.order_l2p = std::log2(prev.l2_p / row.l2_p);
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.table.rows.push_back(row);
  }
  auto csv = out_path(cfg, dir, ".csv");
  auto txt = out_path(cfg, dir, ".txt");
  auto c = open_out(csv);
  result.table.to_csv(c);
  auto t = open_out(txt);
  result.table.to_pretty(t);
  result.outputs = {csv, txt};
}

inline void run_adaptive(const StudyConfig& cfg, const std::string& dir, StudyResult& result) {
  auto problem = build_problem(cfg);
  AdaptiveStop stop{cfg.max_dofs, cfg.max_iterations, cfg.eta_threshold};
  result.adaptive = adaptive_solve(problem, cfg.degree, cfg.lambda, stop, cfg.n, cfg.solver,
                                   cfg.penalty_scale);
  for (const auto& rec : result.adaptive)
    if (!rec.solve.converged) result.all_converged = false;
  auto csv = out_path(cfg, dir, "_adaptive.csv");
  auto out = open_out(csv);
  out << "iteration,h_max,n_elements,n_dofs,energy_error,l2_u,l2_p,eta_sq_total,functional,"
         "n_marked,solver_iterations,residual,wall_time_s\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < result.adaptive.size(); ++i) {
    const auto& r = result.adaptive[i];
    out << i << "," << num(r.errors.h_max) << "," << r.mesh.n_elements() << "," << r.errors.n_dofs
        << "," << num(r.errors.energy_error) << "," << num(r.errors.l2_u) << ","
        << num(r.errors.l2_p) << "," << num(r.errors.eta_sq_total) << ","
        << num(r.errors.functional_value) << "," << r.n_marked << "," << r.solve.iterations << ","
        << num(r.solve.final_residual) << "," << num(r.solve.wall_time_s) << "\n";
  }
  auto meshfile = out_path(cfg, dir, "_final_mesh.txt");
  write_mesh_file(result.adaptive.back().mesh, meshfile);
  result.outputs = {csv, meshfile};
}

inline void run_k2h(const StudyConfig& cfg, const std::string& dir, StudyResult& result) {
  auto csv = out_path(cfg, dir, "_k2h.csv");
  auto out = open_out(csv);
  out << "k,n,h,n_elements,n_dofs,energy_error,rel_energy_error,exact_energy,"
         "solver_iterations,residual,wall_time_s\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return std::string(buf);
  };
  for (double k : cfg.k_values) {
    const auto t0 = std::chrono::steady_clock::now();
    StudyConfig local = cfg;
    local.params.k = k;
    auto problem = build_problem(local);
    const int n = static_cast<int>(std::ceil(k * k));  // h = 1/ceil(k^2)
    auto mesh = problem.initial_mesh(n);
    auto sys = assemble(mesh, cfg.degree, problem, cfg.penalty_scale);
    auto [x, solve_rep] = solve(sys, cfg.solver);
    if (!solve_rep.converged) result.all_converged = false;
    auto errors = compute_errors(mesh, cfg.degree, x, problem, cfg.penalty_scale);
    double exact_norm = exact_energy_norm(mesh, cfg.degree, problem);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << num(k) << "," << n << "," << num(mesh.max_diameter()) << "," << mesh.n_elements() << ","
        << errors.n_dofs << "," << num(errors.energy_error) << ","
        << num(errors.energy_error / exact_norm) << "," << num(exact_norm) << ","
        << solve_rep.iterations << "," << num(solve_rep.final_residual) << "," << num(wall) << "\n";
  }
  result.outputs = {csv};
}

inline void run_single_solve(const StudyConfig& cfg, const std::string& dir, StudyResult& result) {
  auto problem = build_problem(cfg);
  auto mesh = problem.initial_mesh(cfg.n);
  auto sys = assemble(mesh, cfg.degree, problem, cfg.penalty_scale);
  auto [x, solve_rep] = solve(sys, cfg.solver);
  if (!solve_rep.converged) result.all_converged = false;

  // bounding box sampling grid; points outside the domain are skipped
  Vec lo = mesh.vertices[0], hi = mesh.vertices[0];
  for (const auto& v : mesh.vertices)
    for (int d = 0; d < mesh.dim; ++d) {
      lo[d] = std::min(lo[d], v[d]);
      hi[d] = std::max(hi[d], v[d]);
    }
  // uniform bins over element bounding boxes for point location
  const int nb = std::max(1, static_cast<int>(std::sqrt(double(mesh.n_elements()))));
  std::vector<std::vector<int>> bins(static_cast<std::size_t>(nb) * nb);
  auto bin_of = [&](double px, double py) {
    int bx = std::min(nb - 1, std::max(0, static_cast<int>((px - lo.x) / (hi.x - lo.x) * nb)));
    int by = std::min(nb - 1, std::max(0, static_cast<int>((py - lo.y) / (hi.y - lo.y) * nb)));
    return by * nb + bx;
  };
  if (mesh.dim == 2) {
    for (int e = 0; e < mesh.n_elements(); ++e) {
      Vec elo = mesh.vertices[mesh.elements[e][0]], ehi = elo;
      for (int i = 1; i < 3; ++i) {
        const Vec& v = mesh.vertices[mesh.elements[e][i]];
        elo.x = std::min(elo.x, v.x);
        elo.y = std::min(elo.y, v.y);
        ehi.x = std::max(ehi.x, v.x);
        ehi.y = std::max(ehi.y, v.y);
      }
      int b0 = bin_of(elo.x, elo.y), b1 = bin_of(ehi.x, ehi.y);
      for (int by = b0 / nb; by <= b1 / nb; ++by)
        for (int bx = b0 % nb; bx <= b1 % nb; ++bx) bins[by * nb + bx].push_back(e);
    }
  }

  auto csv = out_path(cfg, dir, "_solution.csv");
  auto out = open_out(csv);
  out << (mesh.dim == 2 ? "x,y,re_u,im_u\n" : "x,y,z,re_u,im_u\n");
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return std::string(buf);
  };
  const double tol = 1e-10;
  auto locate2d = [&](const Vec& p) -> int {
    for (int e : bins[bin_of(p.x, p.y)]) {
      Vec r = mesh.map_to_reference(e, p);
      if (r.x >= -tol && r.y >= -tol && 1.0 - r.x - r.y >= -tol) return e;
    }
    return -1;
  };
  if (mesh.dim == 2) {
    for (int j = 0; j < cfg.samples; ++j)
      for (int i = 0; i < cfg.samples; ++i) {
        Vec p{lo.x + (hi.x - lo.x) * i / (cfg.samples - 1),
              lo.y + (hi.y - lo.y) * j / (cfg.samples - 1), 0.0};
        int e = locate2d(p);
        if (e < 0) continue;
        auto f = evaluate_solution(mesh, cfg.degree, x, e, p);
        out << num(p.x) << "," << num(p.y) << "," << num(f.u.real()) << "," << num(f.u.imag()) << "\n";
      }
  } else {
    // coarse grid in 3D: brute-force location per sample plane
    for (int j = 0; j < cfg.samples; ++j)
      for (int i = 0; i < cfg.samples; ++i) {
        Vec p{lo.x + (hi.x - lo.x) * i / (cfg.samples - 1),
              lo.y + (hi.y - lo.y) * j / (cfg.samples - 1), 0.5 * (lo.z + hi.z)};
        for (int e = 0; e < mesh.n_elements(); ++e) {
          Vec r = mesh.map_to_reference(e, p);
          if (r.x >= -tol && r.y >= -tol && r.z >= -tol && 1.0 - r.x - r.y - r.z >= -tol) {
            auto f = evaluate_solution(mesh, cfg.degree, x, e, p);
            out << num(p.x) << "," << num(p.y) << "," << num(p.z) << "," << num(f.u.real()) << ","
                << num(f.u.imag()) << "\n";
            break;
          }
        }
      }
  }
  auto meshfile = out_path(cfg, dir, "_mesh.txt");
  write_mesh_file(mesh, meshfile);
  result.outputs = {csv, meshfile};
}

}  // namespace detail

// Runs the configured study and writes its CSV outputs into output_dir.
inline StudyResult run_study(const StudyConfig& cfg, const std::string& output_dir = ".") {
  validate_config(cfg);
  StudyResult result;
  switch (cfg.kind) {
    case StudyKind::uniform_convergence:
      detail::run_uniform(cfg, output_dir, result);
      break;
    case StudyKind::adaptive:
      detail::run_adaptive(cfg, output_dir, result);
      break;
    case StudyKind::k2h:
      detail::run_k2h(cfg, output_dir, result);
      break;
    case StudyKind::single_solve:
      detail::run_single_solve(cfg, output_dir, result);
      break;
  }
  return result;
}

}  // namespace dls
