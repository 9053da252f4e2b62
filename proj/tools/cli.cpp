#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "chdg/basis.hpp"
#include "chdg/mesh_io.hpp"

namespace chdg::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string join(const std::string& dir, const std::string& file) { return (std::filesystem::path(dir) / file).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

BoundaryKind parse_kind(const std::string& name) {
  if (name == "dirichlet") return BoundaryKind::dirichlet;
  if (name == "neumann") return BoundaryKind::neumann;
  if (name == "robin") return BoundaryKind::robin;
  throw std::invalid_argument("unknown boundary kind '" + name + "' (expected dirichlet, neumann or robin)");
}

void print_counts(std::ostream& out, const MeshCounts& c, int p) {
  out << "N_tri=" << c.triangles << " N_fce=" << c.faces << " N_fce_bnd=" << c.boundary_faces
      << " N_fce_int=" << c.interior_faces << '\n';
  const long lhs = 3 * c.triangles, rhs = c.boundary_faces + 2 * c.interior_faces;
  out << "identity 3*N_tri = N_fce_bnd + 2*N_fce_int: " << lhs << " = " << rhs << (lhs == rhs ? " ok" : " VIOLATED")
      << '\n';
  const MethodCounts d = dof_counts(c.triangles, c.faces, p);
  out << "dofs (p=" << p << "): dg=" << d.dg << " hdg=" << d.hdg << " chdg=" << d.chdg << '\n';
  const MethodCounts b = nnz_upper_bounds(c.triangles, c.faces, p);
  out << "nnz bounds (p=" << p << "): dg=" << b.dg << " hdg=" << b.hdg << " chdg=" << b.chdg << '\n';
}

}  // namespace

BenchmarkCase make_case(const RunConfig& cfg) {
  BenchmarkCase b = make_benchmark(parse_benchmark(cfg.benchmark), parse_kappa_mode(cfg.kappa_mode));
  if (cfg.kappa) {
    if (!(*cfg.kappa > 0.0)) throw std::invalid_argument("--kappa must be positive");
    b.kappa = *cfg.kappa;
  }
  if (cfg.h) {
    if (!(*cfg.h > 0.0)) throw std::invalid_argument("--h must be positive");
    b.h = *cfg.h;
  }
  if (cfg.theta) b.theta = *cfg.theta;
  if (cfg.p < 0 || cfg.p > kMaxDegree) throw std::invalid_argument("--p outside 0.." + std::to_string(kMaxDegree));
  b.degree = cfg.p;
  return b;
}

TriangleMesh make_mesh(const RunConfig& cfg, const BenchmarkCase& bench) {
  if (cfg.mesh_file.empty()) return bench.make_mesh();
  const SideTags& t = bench.tags;
  const bool uniform = t.left == t.right && t.left == t.bottom && t.left == t.top;
  return read_mesh_file(cfg.mesh_file, uniform ? t.left : BoundaryKind::untagged);
}

std::string history_path(const RunConfig& cfg) {
  return join(cfg.out, cfg.benchmark + "_" + cfg.method + "_" + cfg.solver + ".csv");
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  const Method method = parse_method(cfg.method);
  const SolverKind solver = parse_solver(cfg.solver);
  check_combination(method, solver);
  if (cfg.max_iter < 0) throw std::invalid_argument("--max-iter must be nonnegative");
  const BenchmarkCase bench = make_case(cfg);
  const BenchmarkSetup setup(bench, make_mesh(cfg, bench));
  RunOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.tol = cfg.tol;
  opts.stop_at_error_factor = cfg.stop_factor;
  const RunResult r = run_benchmark(setup, method, solver, opts);

  ensure_dir(cfg.out);
  const std::string path = history_path(cfg);
  write_history_csv(path, r.history);
  out << "benchmark=" << to_string(bench.id) << " kappa=" << sci(bench.kappa) << " h=" << sci(bench.h)
      << " p=" << bench.degree << " elements=" << setup.discretization().num_elements() << '\n';
  out << "method=" << to_string(method) << " solver=" << to_string(solver) << " dofs=" << r.dofs << '\n';
  out << "direct_error=" << sci(r.direct_error) << '\n';
  out << "final_error=" << sci(r.final_error) << '\n';
  out << "iterations=" << r.iterations << " termination=" << to_string(r.reason) << '\n';
  out << "history=" << path << '\n';
  return 0;
}

int cmd_analyze(const RunConfig& cfg, const AnalyzeConfig& acfg, std::ostream& out) {
  if (acfg.identity > 0) {
    SparseMatrix id(acfg.identity, acfg.identity);
    id.setIdentity();
    ConditionOptions iterative;
    iterative.dense_threshold = 0;
    const GlobalConditioning d = estimate_condition(id, Method::dg);
    const GlobalConditioning l = estimate_condition(id, Method::dg, iterative);
    out << "identity size=" << acfg.identity << " cond_dense=" << sci(d.condition) << " cond_lanczos=" << sci(l.condition)
        << '\n';
    return 0;
  }
  const BenchmarkCase bench = make_case(cfg);
  AnalysisOptions o;
  o.degrees = acfg.degrees;
  o.local = acfg.local;
  o.global = acfg.global;
  o.spectrum = acfg.spectrum;
  o.cloud_limit = acfg.cloud_limit;
  o.spectrum_options.num_eigenvalues = acfg.nev;
  o.spectrum_options.seed = cfg.seed;
  const AnalysisResult a = analyze_benchmark(bench, make_mesh(cfg, bench), o);
  ensure_dir(cfg.out);
  const std::string stem = join(cfg.out, cfg.benchmark);

  out << "benchmark=" << to_string(bench.id) << " kappa=" << sci(bench.kappa) << " h=" << sci(bench.h)
      << " p=" << bench.degree << '\n';
  out << "dofs: dg=" << a.dofs.dg << " hdg=" << a.dofs.hdg << " chdg=" << a.dofs.chdg << '\n';
  if (o.local) {
    const std::string path = stem + "_local_conditioning.csv";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "method;degree;kappa_h;max_condition\n";
    for (const LocalConditioning& c : a.conditioning.local) {
      f << to_string(c.method) << ';' << c.degree << ';' << sci(c.kappa_h) << ';' << sci(c.max_condition) << '\n';
      out << "local " << to_string(c.method) << " p=" << c.degree << " max_cond=" << sci(c.max_condition) << '\n';
    }
    out << "local_conditioning=" << path << '\n';
  }
  if (o.global) {
    const std::string path = stem + "_global_conditioning.csv";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "method;size;nnz;block_nnz;sigma_max;sigma_min;condition\n";
    const long nnz[3] = {a.nnz.dg, a.nnz.hdg, a.nnz.chdg};
    const long bnnz[3] = {a.block_nnz.dg, a.block_nnz.hdg, a.block_nnz.chdg};
    for (std::size_t i = 0; i < a.conditioning.global.size(); ++i) {
      const GlobalConditioning& g = a.conditioning.global[i];
      f << to_string(g.method) << ';' << g.size << ';' << nnz[i] << ';' << bnnz[i] << ';' << sci(g.sigma_max) << ';' << sci(g.sigma_min)
        << ';' << sci(g.condition) << '\n';
      out << "global " << to_string(g.method) << " size=" << g.size << " nnz=" << nnz[i] << " block_nnz=" << bnnz[i] << " cond=" << sci(g.condition)
          << (g.dense ? " (dense)" : " (lanczos)") << '\n';
      if (!g.converged) throw NumericalError("condition estimate for " + to_string(g.method) + " did not converge");
    }
    out << "global_conditioning=" << path << '\n';
  }
  if (o.spectrum) {
    const std::string path = stem + "_spectrum.csv";
    write_spectrum_csv(path, a.spectrum.eigenvalues);
    out << "rho=" << sci(a.spectrum.spectral_radius) << " one_minus_rho=" << sci(a.spectrum.one_minus_rho)
        << " applies=" << a.spectrum.operator_applies << '\n';
    out << "spectrum=" << path << '\n';
    if (!a.spectrum.converged) throw NumericalError("Krylov-Schur iteration did not converge");
    if (!(a.spectrum.spectral_radius < 1.0)) throw NumericalError("spectral radius is not below one");
  }
  if (!a.cloud.empty()) {
    const std::string path = stem + "_cloud.csv";
    write_spectrum_csv(path, a.cloud);
    out << "cloud=" << path << '\n';
  }
  return 0;
}

int cmd_mesh(const RunConfig& cfg, const MeshConfig& mcfg, std::ostream& out) {
  if (mcfg.n_tri > 0 || mcfg.n_fce > 0) {
    MeshCounts c;
    c.triangles = mcfg.n_tri;
    c.faces = mcfg.n_fce;
    c.interior_faces = 3 * c.triangles - c.faces;
    c.boundary_faces = 2 * c.faces - 3 * c.triangles;
    if (c.triangles <= 0 || c.interior_faces < 0 || c.boundary_faces < 0)
      throw std::invalid_argument("--n-tri and --n-fce do not describe a triangulation");
    print_counts(out, c, cfg.p);
    return 0;
  }
  TriangleMesh mesh;
  std::string name = cfg.benchmark;
  if (mcfg.nx > 0 || mcfg.ny > 0) {
    name = "rectangle";
    if (mcfg.nx <= 0 || mcfg.ny < 0 || !(mcfg.lx > 0.0) || !(mcfg.ly > 0.0))
      throw std::invalid_argument("invalid grid geometry");
    mesh = generate_rectangle(mcfg.lx, mcfg.ly, mcfg.nx, mcfg.ny > 0 ? mcfg.ny : mcfg.nx,
                              SideTags::all(parse_kind(mcfg.boundary)));
  } else {
    RunConfig c = cfg;
    mesh = make_mesh(c, make_case(c));
  }
  const MeshCounts counts = mesh_counts(mesh);
  print_counts(out, counts, cfg.p);
  out << "h_char=" << sci(mesh.h_char) << '\n';
  std::string path = mcfg.out_file;
  if (path.empty()) {
    ensure_dir(cfg.out);
    path = join(cfg.out, name + ".msh");
  }
  write_mesh_file(path, mesh);
  out << "mesh=" << path << '\n';
  if (!counts.identities_hold()) throw NumericalError("face counting identities violated");
  return 0;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Upwind DG, HDG and CHDG solvers for the 2D Helmholtz equation"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file (INI/TOML); flags given on the command line override its values");
  app.footer(
      "Precedence: command-line flag > config file > built-in default.\n"
      "Exit codes: 0 success, 1 usage or input error, 2 numerical failure.");

  RunConfig cfg;
  AnalyzeConfig acfg;
  MeshConfig mcfg;
  double kappa = 0, h = 0, theta = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--benchmark", cfg.benchmark, "plane_wave, cavity or waveguide")->capture_default_str();
    sub->add_option("--kappa-mode", cfg.kappa_mode, "default, fine_mesh, near_resonance or high_frequency")
        ->capture_default_str();
    sub->add_option("--kappa", kappa, "wavenumber (overrides the benchmark value)");
    sub->add_option("--h", h, "grid spacing of the structured mesh (overrides the benchmark value)");
    sub->add_option("--theta", theta, "plane wave direction angle");
    sub->add_option("--p", cfg.p, "polynomial degree")->capture_default_str();
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed of the random start vectors")->capture_default_str();
    sub->add_option("--mesh-file", cfg.mesh_file, "MSH 2.2 ASCII mesh replacing the structured one");
  };

  CLI::App* run = app.add_subcommand("run", "solve a benchmark and write the error history CSV");
  common(run);
  run->add_option("--method", cfg.method, "dg, hdg or chdg")->capture_default_str();
  run->add_option("--solver", cfg.solver, "direct, richardson, cgn or gmres")->capture_default_str();
  run->add_option("--max-iter", cfg.max_iter, "iteration limit")->capture_default_str();
  run->add_option("--tol", cfg.tol, "relative residual tolerance")->capture_default_str();
  run->add_option("--stop-factor", cfg.stop_factor, "stop once the error is this multiple of the direct error");

  CLI::App* analyze = app.add_subcommand("analyze", "local and global conditioning, spectrum of the iteration operator");
  common(analyze);
  analyze->add_option("--degrees", acfg.degrees, "degrees of the local conditioning sweep")->delimiter(',');
  analyze->add_flag("!--no-local", acfg.local, "skip the local conditioning sweep");
  analyze->add_flag("!--no-global", acfg.global, "skip the global condition numbers");
  analyze->add_flag("!--no-spectrum", acfg.spectrum, "skip the spectral radius");
  analyze->add_option("--nev", acfg.nev, "number of eigenvalues")->capture_default_str();
  analyze->add_option("--cloud-limit", acfg.cloud_limit, "dense eigenvalue cloud when the CHDG size is at most this");
  analyze->add_option("--identity", acfg.identity, "sanity mode: condition number of the identity of this size");

  CLI::App* mesh = app.add_subcommand("mesh", "build or read a mesh, print counts and write it");
  common(mesh);
  mesh->add_option("--nx", mcfg.nx, "structured grid cells along x (unit square with --nx only)");
  mesh->add_option("--ny", mcfg.ny, "structured grid cells along y");
  mesh->add_option("--lx", mcfg.lx, "domain length along x")->capture_default_str();
  mesh->add_option("--ly", mcfg.ly, "domain length along y")->capture_default_str();
  mesh->add_option("--boundary", mcfg.boundary, "boundary kind of the --nx grid")->capture_default_str();
  mesh->add_option("--n-tri", mcfg.n_tri, "counting mode: number of triangles");
  mesh->add_option("--n-fce", mcfg.n_fce, "counting mode: number of faces");
  mesh->add_option("--mesh-out", mcfg.out_file, "mesh file to write (default <out>/<name>.msh)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  for (CLI::App* sub : {run, analyze, mesh}) {
    if (!sub->parsed()) continue;
    if (sub->count("--kappa")) cfg.kappa = kappa;
    if (sub->count("--h")) cfg.h = h;
    if (sub->count("--theta")) cfg.theta = theta;
  }

  try {
    if (run->parsed()) return cmd_run(cfg, out);
    if (analyze->parsed()) return cmd_analyze(cfg, acfg, out);
    return cmd_mesh(cfg, mcfg, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace chdg::cli
