#pragma once

#include <optional>
#include <string>

#include "chdg/discretization.hpp"

namespace chdg {

enum class BenchmarkId { plane_wave, cavity, waveguide };
enum class KappaMode { standard, fine_mesh, near_resonance, high_frequency };

std::string to_string(BenchmarkId id);
std::string to_string(KappaMode mode);
BenchmarkId parse_benchmark(const std::string& name);
KappaMode parse_kappa_mode(const std::string& name);

struct BenchmarkCase {
  BenchmarkId id = BenchmarkId::plane_wave;
  double kappa = 0.0;
  double h = 0.0;  ///< grid spacing of the structured mesh
  int degree = 3;
  double theta = 0.0;
  double lx = 1.0, ly = 1.0;
  SideTags tags;

  int nx() const;
  int ny() const;
  TriangleMesh make_mesh() const;
  /// Same geometry with the grid refined by an integer factor.
  TriangleMesh make_mesh(int refinement) const;
  ProblemConfig problem() const;
  bool analytic_reference() const { return id != BenchmarkId::waveguide; }
};

inline constexpr double kDefaultTheta = 0.39269908169872414;  // pi / 8

/// Default case of a benchmark and wavenumber mode:
///   plane wave  k = 15 pi,            h = 1/16 (fine 1/34, high frequency k = 30 pi);
///   cavity      k = (7 + 1/10) sqrt2 pi, h = 1/10 (fine 1/15, near resonance (7 + 1/100) sqrt2 pi);
///   waveguide   k = 6 pi,             h = 1/8 (fine 1/17, high frequency k = 12 pi).
/// Throws std::invalid_argument for a mode that does not apply.
BenchmarkCase make_benchmark(BenchmarkId id, KappaMode mode = KappaMode::standard);

}  // namespace chdg
