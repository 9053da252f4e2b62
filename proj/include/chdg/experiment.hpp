#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "chdg/benchmarks.hpp"
#include "chdg/counting.hpp"
#include "chdg/conditioning.hpp"
#include "chdg/references.hpp"
#include "chdg/solvers.hpp"
#include "chdg/spectral.hpp"

namespace chdg {

enum class SolverKind { direct, richardson, cgn, gmres };

std::string to_string(SolverKind kind);
SolverKind parse_solver(const std::string& name);

/// Throws std::invalid_argument for combinations without a meaning
/// (the fixed-point iteration needs the characteristic hybrid).
void check_combination(Method method, SolverKind solver);

/// Mesh, spaces and cached reference values of one benchmark case, shared
/// by runs of different methods and solvers.
class BenchmarkSetup {
 public:
  explicit BenchmarkSetup(const BenchmarkCase& bench, int oracle_refinement = 2);
  BenchmarkSetup(const BenchmarkCase& bench, TriangleMesh mesh, int oracle_refinement = 2);

  const BenchmarkCase& bench() const { return bench_; }
  const Discretization& discretization() const { return *disc_; }
  const ProblemConfig& problem() const { return problem_; }
  const ReferenceSolution& reference() const { return reference_; }
  double error(const ElementFields& fields) const { return (*error_)(fields); }

 private:
  BenchmarkCase bench_;
  std::unique_ptr<Discretization> disc_;
  ProblemConfig problem_;
  ReferenceSolution reference_;
  std::unique_ptr<ErrorEvaluator> error_;
};

struct RunOptions {
  int max_iter = 1000;
  double tol = 1e-10;
  bool record_error = true;
  /// Stop once the field error is at most this factor times the direct error
  /// (0 disables the early stop).
  double stop_at_error_factor = 0.0;
};

struct HistoryRecord {
  int iteration = 0;
  double residual = 0.0;
  double relative_error = 0.0;
};

struct RunResult {
  Method method = Method::chdg;
  SolverKind solver = SolverKind::direct;
  long dofs = 0;
  std::vector<HistoryRecord> history;
  double direct_error = 0.0;
  double final_error = 0.0;
  int iterations = 0;
  Termination reason = Termination::tolerance;

  /// First iteration whose error is at most factor * direct_error, or -1.
  int iterations_to_error(double factor) const;
};

RunResult run_benchmark(const BenchmarkSetup& setup, Method method, SolverKind solver, const RunOptions& options = {});
RunResult run_benchmark(const BenchmarkCase& bench, Method method, SolverKind solver, const RunOptions& options = {});

struct AnalysisOptions {
  std::vector<int> degrees{1, 2, 3};
  bool local = true;
  bool global = true;
  bool spectrum = true;
  SpectrumOptions spectrum_options;
  ConditionOptions condition_options;
  /// Full eigenvalue cloud of the iteration matrix (dense) when its size is at most this.
  int cloud_limit = 0;
};

struct AnalysisResult {
  ConditioningReport conditioning;
  SpectrumReport spectrum;
  std::vector<Complex> cloud;
  MethodCounts dofs;
  MethodCounts nnz;
  /// Face-block storage count of the reduced systems (DG entry: plain nnz).
  MethodCounts block_nnz;
};

AnalysisResult analyze_benchmark(const BenchmarkCase& bench, const AnalysisOptions& options);
AnalysisResult analyze_benchmark(const BenchmarkCase& bench, const TriangleMesh& mesh, const AnalysisOptions& options);

/// `iteration;residual;relative_error`, scientific notation, 6 significant digits.
void write_history_csv(std::ostream& out, const std::vector<HistoryRecord>& history);
void write_history_csv(const std::string& path, const std::vector<HistoryRecord>& history);
/// `re_lambda;im_lambda`
void write_spectrum_csv(std::ostream& out, const std::vector<Complex>& eigenvalues);
void write_spectrum_csv(const std::string& path, const std::vector<Complex>& eigenvalues);

}  // namespace chdg
