#include "chdg/benchmarks.hpp"

#include <cmath>

namespace chdg {

std::string to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::plane_wave: return "plane_wave";
    case BenchmarkId::cavity: return "cavity";
    case BenchmarkId::waveguide: return "waveguide";
  }
  return "unknown";
}

std::string to_string(KappaMode mode) {
  switch (mode) {
    case KappaMode::standard: return "default";
    case KappaMode::fine_mesh: return "fine_mesh";
    case KappaMode::near_resonance: return "near_resonance";
    case KappaMode::high_frequency: return "high_frequency";
  }
  return "unknown";
}

BenchmarkId parse_benchmark(const std::string& name) {
  if (name == "plane_wave" || name == "1") return BenchmarkId::plane_wave;
  if (name == "cavity" || name == "2") return BenchmarkId::cavity;
  if (name == "waveguide" || name == "3") return BenchmarkId::waveguide;
  throw std::invalid_argument("unknown benchmark '" + name + "' (expected plane_wave, cavity or waveguide)");
}

KappaMode parse_kappa_mode(const std::string& name) {
  if (name == "default") return KappaMode::standard;
  if (name == "fine_mesh") return KappaMode::fine_mesh;
  if (name == "near_resonance") return KappaMode::near_resonance;
  if (name == "high_frequency") return KappaMode::high_frequency;
  throw std::invalid_argument("unknown kappa mode '" + name +
                              "' (expected default, fine_mesh, near_resonance or high_frequency)");
}

int BenchmarkCase::nx() const { return std::max(1, static_cast<int>(std::lround(lx / h))); }
int BenchmarkCase::ny() const { return std::max(1, static_cast<int>(std::lround(ly / h))); }

TriangleMesh BenchmarkCase::make_mesh() const { return make_mesh(1); }

TriangleMesh BenchmarkCase::make_mesh(int refinement) const {
  if (!(h > 0.0)) throw std::invalid_argument("benchmark mesh size must be positive");
  if (refinement < 1) throw std::invalid_argument("refinement factor must be >= 1");
  return generate_rectangle(lx, ly, refinement * nx(), refinement * ny(), tags);
}

ProblemConfig BenchmarkCase::problem() const {
  ProblemConfig c;
  c.kappa = kappa;
  c.degree = degree;
  const double k = kappa;
  const Point d(std::cos(theta), std::sin(theta));
  switch (id) {
    case BenchmarkId::plane_wave:
      c.robin = [k, d](const Point& x, const Point& n) { return (1.0 - n.dot(d)) * std::exp(kImag * k * d.dot(x)); };
      break;
    case BenchmarkId::cavity:
      c.source = [k](const Point&) { return kImag / k; };
      break;
    case BenchmarkId::waveguide:
      // d_n u - i k u = exp(i k d.x) rewritten as u - n.q with q = grad u / (i k)
      c.robin = [k, d](const Point& x, const Point&) { return kImag * std::exp(kImag * k * d.dot(x)) / k; };
      break;
  }
  return c;
}

BenchmarkCase make_benchmark(BenchmarkId id, KappaMode mode) {
  BenchmarkCase b;
  b.id = id;
  b.degree = 3;
  b.theta = kDefaultTheta;
  const double pi = M_PI;
  switch (id) {
    case BenchmarkId::plane_wave:
      b.tags = SideTags::all(BoundaryKind::robin);
      b.kappa = 15 * pi;
      b.h = 1.0 / 16;
      if (mode == KappaMode::near_resonance) throw std::invalid_argument("near_resonance applies to the cavity only");
      if (mode != KappaMode::standard) b.h = 1.0 / 34;
      if (mode == KappaMode::high_frequency) b.kappa = 30 * pi;
      break;
    case BenchmarkId::cavity:
      b.tags = SideTags::all(BoundaryKind::dirichlet);
      b.kappa = (7 + 1.0 / 10) * std::sqrt(2.0) * pi;
      b.h = 1.0 / 10;
      if (mode == KappaMode::high_frequency) throw std::invalid_argument("high_frequency applies to plane_wave and waveguide");
      if (mode != KappaMode::standard) b.h = 1.0 / 15;
      if (mode == KappaMode::near_resonance) b.kappa = (7 + 1.0 / 100) * std::sqrt(2.0) * pi;
      break;
    case BenchmarkId::waveguide:
      b.lx = 4.0;
      b.tags = SideTags{BoundaryKind::dirichlet, BoundaryKind::robin, BoundaryKind::dirichlet, BoundaryKind::dirichlet};
      b.kappa = 6 * pi;
      b.h = 1.0 / 8;
      if (mode == KappaMode::near_resonance) throw std::invalid_argument("near_resonance applies to the cavity only");
      if (mode != KappaMode::standard) b.h = 1.0 / 17;
      if (mode == KappaMode::high_frequency) b.kappa = 12 * pi;
      break;
  }
  return b;
}

}  // namespace chdg
