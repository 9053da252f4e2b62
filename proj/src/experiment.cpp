#include "chdg/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "chdg/counting.hpp"
#include "chdg/hybrid_chdg.hpp"
#include "chdg/hybrid_hdg.hpp"

namespace chdg {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::direct: return "direct";
    case SolverKind::richardson: return "richardson";
    case SolverKind::cgn: return "cgn";
    case SolverKind::gmres: return "gmres";
  }
  return "unknown";
}

SolverKind parse_solver(const std::string& name) {
  if (name == "direct") return SolverKind::direct;
  if (name == "richardson") return SolverKind::richardson;
  if (name == "cgn") return SolverKind::cgn;
  if (name == "gmres") return SolverKind::gmres;
  throw std::invalid_argument("unknown solver '" + name + "' (expected direct, richardson, cgn or gmres)");
}

void check_combination(Method method, SolverKind solver) {
  if (solver == SolverKind::richardson && method != Method::chdg)
    throw std::invalid_argument("fixed-point only supported with CHDG");
}

namespace {

ReferenceSolution make_reference(const BenchmarkCase& bench, int oracle_refinement) {
  switch (bench.id) {
    case BenchmarkId::plane_wave: return reference_plane_wave(bench.theta, bench.kappa);
    case BenchmarkId::cavity: return reference_cavity(bench.kappa);
    case BenchmarkId::waveguide: return reference_waveguide_oracle(bench, oracle_refinement);
  }
  throw std::invalid_argument("unknown benchmark");
}

}  // namespace

BenchmarkSetup::BenchmarkSetup(const BenchmarkCase& bench, int oracle_refinement)
    : BenchmarkSetup(bench, bench.make_mesh(), oracle_refinement) {}

BenchmarkSetup::BenchmarkSetup(const BenchmarkCase& bench, TriangleMesh mesh, int oracle_refinement)
    : bench_(bench),
      disc_(std::make_unique<Discretization>(std::move(mesh), bench.degree)),
      problem_(bench.problem()),
      reference_(make_reference(bench, oracle_refinement)),
      error_(std::make_unique<ErrorEvaluator>(*disc_, reference_)) {}

int RunResult::iterations_to_error(double factor) const {
  for (const HistoryRecord& r : history)
    if (r.relative_error <= factor * direct_error) return r.iteration;
  return -1;
}

namespace {

// Everything a method needs to be driven by the solvers.
struct MethodOperators {
  long dofs = 0;
  SparseSystem system;
  LinearOperator apply, apply_adjoint, iteration;
  Vector rhs;
  std::function<ElementFields(const Vector&)> fields;
};

}  // namespace

RunResult run_benchmark(const BenchmarkSetup& setup, Method method, SolverKind solver, const RunOptions& options) {
  check_combination(method, solver);
  const Discretization& disc = setup.discretization();
  const ProblemConfig& cfg = setup.problem();
  RunResult res;
  res.method = method;
  res.solver = solver;

  MethodOperators ops;
  std::unique_ptr<HdgFactorization> hdg;
  std::unique_ptr<ChdgOperator> chdg;
  switch (method) {
    case Method::dg:
      ops.system = assemble_dg(disc, cfg);
      ops.fields = [&disc](const Vector& x) { return ElementFields(x, disc.scalar_dofs()); };
      break;
    case Method::hdg:
      hdg = std::make_unique<HdgFactorization>(disc, cfg);
      ops.system = assemble_reduced_hdg(*hdg);
      ops.fields = [h = hdg.get()](const Vector& x) { return reconstruct_hdg(*h, x); };
      break;
    case Method::chdg:
      chdg = std::make_unique<ChdgOperator>(disc, cfg);
      ops.system = assemble_reduced_chdg(*chdg);
      ops.fields = [c = chdg.get()](const Vector& x) { return c->reconstruct(x); };
      break;
  }
  ops.rhs = ops.system.rhs;
  ops.dofs = ops.system.layout.size();
  if (chdg) {
    ops.apply = [c = chdg.get()](const Vector& x) { return c->apply(x); };
    ops.apply_adjoint = [c = chdg.get()](const Vector& x) { return c->apply_adjoint(x); };
    ops.iteration = [c = chdg.get()](const Vector& x) { return c->iteration_apply(x); };
  } else {
    ops.apply = matrix_operator(ops.system.matrix);
    ops.apply_adjoint = matrix_adjoint_operator(ops.system.matrix);
  }
  res.dofs = ops.dofs;

  const Vector direct = direct_solve(ops.system);
  res.direct_error = setup.error(ops.fields(direct));

  if (solver == SolverKind::direct) {
    res.final_error = res.direct_error;
    const double r = (ops.system.rhs - ops.system.matrix * direct).norm() / std::max(ops.system.rhs.norm(), 1e-300);
    res.history.push_back({0, r, res.direct_error});
    res.iterations = 0;
    res.reason = Termination::tolerance;
    return res;
  }

  std::vector<double> errors;
  SolverOptions so;
  so.max_iter = options.max_iter;
  so.tol = options.tol;
  if (options.record_error)
    so.callback = [&](int, const Vector& g) {
      errors.push_back(setup.error(ops.fields(g)));
      return options.stop_at_error_factor > 0.0 && errors.back() <= options.stop_at_error_factor * res.direct_error;
    };
  const Vector g0 = Vector::Zero(ops.dofs);
  SolveReport rep;
  switch (solver) {
    case SolverKind::richardson: rep = richardson(ops.iteration, ops.rhs, g0, so); break;
    case SolverKind::cgn: rep = cgn(ops.apply, ops.apply_adjoint, ops.rhs, g0, so); break;
    case SolverKind::gmres: rep = gmres(ops.apply, ops.rhs, g0, so); break;
    case SolverKind::direct: break;
  }
  const std::size_t n = options.record_error ? errors.size() : rep.residuals.size();
  for (std::size_t i = 0; i < n; ++i) {
    HistoryRecord h;
    h.iteration = static_cast<int>(i);
    h.residual = i < rep.residuals.size() ? rep.residuals[i] : std::nan("");
    h.relative_error = options.record_error ? errors[i] : std::nan("");
    res.history.push_back(h);
  }
  res.iterations = res.history.empty() ? 0 : res.history.back().iteration;
  res.reason = rep.reason;
  res.final_error = options.record_error && !errors.empty() ? errors.back() : std::nan("");
  return res;
}

RunResult run_benchmark(const BenchmarkCase& bench, Method method, SolverKind solver, const RunOptions& options) {
  check_combination(method, solver);
  const BenchmarkSetup setup(bench);
  return run_benchmark(setup, method, solver, options);
}

AnalysisResult analyze_benchmark(const BenchmarkCase& bench, const AnalysisOptions& options) {
  return analyze_benchmark(bench, bench.make_mesh(), options);
}

AnalysisResult analyze_benchmark(const BenchmarkCase& bench, const TriangleMesh& mesh, const AnalysisOptions& options) {
  AnalysisResult out;
  const MeshCounts counts = mesh_counts(mesh);
  out.dofs = dof_counts(counts.triangles, counts.faces, bench.degree);

  if (options.local)
    out.conditioning = local_conditioning_sweep(mesh, options.degrees, {bench.kappa}, {Method::hdg, Method::chdg});

  const Discretization disc(mesh, bench.degree);
  const ProblemConfig cfg = bench.problem();
  const ChdgOperator chdg(disc, cfg);
  if (options.global) {
    const SparseSystem dg = assemble_dg(disc, cfg);
    const HdgFactorization hf(disc, cfg);
    const SparseSystem hdg = assemble_reduced_hdg(hf);
    const SparseSystem ch = assemble_reduced_chdg(chdg);
    out.nnz = {dg.matrix.nonZeros(), hdg.matrix.nonZeros(), ch.matrix.nonZeros()};
    out.block_nnz = {dg.matrix.nonZeros(), block_nnz(hdg.matrix, bench.degree + 1), block_nnz(ch.matrix, bench.degree + 1)};
    const ConditioningReport g = global_conditioning({&dg, &hdg, &ch}, options.condition_options);
    out.conditioning.global = g.global;
  }
  if (options.spectrum)
    out.spectrum = spectral_radius([&chdg](const Vector& x) { return chdg.iteration_apply(x); }, chdg.size(),
                                   options.spectrum_options);
  if (chdg.size() <= options.cloud_limit) {
    const SparseSystem ch = assemble_reduced_chdg(chdg);
    const Matrix iteration = Matrix::Identity(ch.matrix.rows(), ch.matrix.cols()) - Matrix(ch.matrix);
    out.cloud = dense_spectrum(iteration).eigenvalues;
  }
  return out;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

void write_history_csv(std::ostream& out, const std::vector<HistoryRecord>& history) {
  out << "iteration;residual;relative_error\n";
  for (const HistoryRecord& r : history) out << r.iteration << ';' << sci(r.residual) << ';' << sci(r.relative_error) << '\n';
}

void write_history_csv(const std::string& path, const std::vector<HistoryRecord>& history) {
  auto f = open_csv(path);
  write_history_csv(f, history);
}

void write_spectrum_csv(std::ostream& out, const std::vector<Complex>& eigenvalues) {
  out << "re_lambda;im_lambda\n";
  for (const Complex& l : eigenvalues) out << sci(l.real()) << ';' << sci(l.imag()) << '\n';
}

void write_spectrum_csv(const std::string& path, const std::vector<Complex>& eigenvalues) {
  auto f = open_csv(path);
  write_spectrum_csv(f, eigenvalues);
}

}  // namespace chdg
