#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chdg/experiment.hpp"

namespace chdg::cli {

struct RunConfig {
  std::string benchmark = "plane_wave";
  std::string kappa_mode = "default";
  std::string method = "chdg";
  std::string solver = "gmres";
  std::optional<double> kappa, h, theta;
  int p = 3;
  int max_iter = 1000;
  double tol = 1e-10;
  double stop_factor = 0.0;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::string mesh_file;
};

struct AnalyzeConfig {
  std::vector<int> degrees{1, 2, 3};
  bool local = true, global = true, spectrum = true;
  int nev = 6;
  int cloud_limit = 0;
  long identity = 0;  ///< > 0: condition of the identity of this size only
};

struct MeshConfig {
  int nx = 0, ny = 0;
  double lx = 1.0, ly = 1.0;
  std::string boundary = "robin";
  long n_tri = 0, n_fce = 0;  ///< counting mode when both are set
  std::string out_file;
};

BenchmarkCase make_case(const RunConfig& cfg);
/// Mesh of the case, or the one read from cfg.mesh_file.
TriangleMesh make_mesh(const RunConfig& cfg, const BenchmarkCase& bench);
std::string history_path(const RunConfig& cfg);

int cmd_run(const RunConfig& cfg, std::ostream& out);
int cmd_analyze(const RunConfig& cfg, const AnalyzeConfig& acfg, std::ostream& out);
int cmd_mesh(const RunConfig& cfg, const MeshConfig& mcfg, std::ostream& out);

/// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chdg::cli
