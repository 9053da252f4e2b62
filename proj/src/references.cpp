#include "chdg/references.hpp"

#include <cmath>

#include "chdg/benchmarks.hpp"
#include "chdg/hybrid_chdg.hpp"
#include "chdg/solvers.hpp"

namespace chdg {

ReferenceSolution reference_plane_wave(double theta, double kappa) {
  const Point d(std::cos(theta), std::sin(theta));
  ReferenceSolution r;
  r.name = "plane_wave";
  r.u = [d, kappa](const Point& x) { return std::exp(kImag * kappa * d.dot(x)); };
  r.q = [d, kappa](const Point& x) { return Eigen::Vector2cd(d.cast<Complex>() * std::exp(kImag * kappa * d.dot(x))); };
  return r;
}

CavitySeries::CavitySeries(double kappa, int truncation)
    : kappa_(kappa), truncation_(truncation), modes_((truncation + 1) / 2) {
  if (truncation < 1) throw std::invalid_argument("cavity series truncation must be >= 1");
  const double pi2 = M_PI * M_PI;
  coeff_.resize(modes_, modes_);
  for (int i = 0; i < modes_; ++i)
    for (int j = 0; j < modes_; ++j) {
      const double n = 2 * i + 1, m = 2 * j + 1;
      const double lam = (n * n + m * m) * pi2;
      if (std::abs(lam - kappa * kappa) <= 1e-10 * lam)
        throw std::invalid_argument("cavity wavenumber is resonant with mode (" + std::to_string(2 * i + 1) + ", " +
                                    std::to_string(2 * j + 1) + ")");
      coeff_(i, j) = 16.0 / (n * m * pi2 * (lam - kappa * kappa));
    }
}

void CavitySeries::tables(const Point& x, RealVector& sx, RealVector& cx, RealVector& sy, RealVector& cy) const {
  sx.resize(modes_);
  cx.resize(modes_);
  sy.resize(modes_);
  cy.resize(modes_);
  for (int i = 0; i < modes_; ++i) {
    const double n = (2 * i + 1) * M_PI;
    sx(i) = std::sin(n * x.x());
    cx(i) = std::cos(n * x.x());
    sy(i) = std::sin(n * x.y());
    cy(i) = std::cos(n * x.y());
  }
}

double CavitySeries::u(const Point& x) const {
  RealVector sx, cx, sy, cy;
  tables(x, sx, cx, sy, cy);
  return sx.dot(coeff_ * sy);
}

Eigen::Vector2cd CavitySeries::q(const Point& x) const {
  RealVector sx, cx, sy, cy;
  tables(x, sx, cx, sy, cy);
  const RealVector freq = RealVector::LinSpaced(modes_, 1.0, 2.0 * modes_ - 1.0) * M_PI;
  const double dx = freq.cwiseProduct(cx).dot(coeff_ * sy);
  const double dy = sx.dot(coeff_ * freq.cwiseProduct(cy));
  return Eigen::Vector2cd(dx, dy) / (kImag * kappa_);
}

double CavitySeries::residual(const Point& x) const {
  RealVector sx, cx, sy, cy;
  tables(x, sx, cx, sy, cy);
  double s = 0.0;
  for (int i = 0; i < modes_; ++i)
    for (int j = 0; j < modes_; ++j) {
      const double n = 2 * i + 1, m = 2 * j + 1;
      s += coeff_(i, j) * ((n * n + m * m) * M_PI * M_PI - kappa_ * kappa_) * sx(i) * sy(j);
    }
  return s - 1.0;
}

double CavitySeries::residual_bound(const Point& x) const {
  // |1 - s_N(t)| <= 4 / (pi (N + 2) sin(pi t)) for the odd sine series of 1,
  // N + 2 being the first dropped index.
  const double first = 2.0 * modes_ + 1.0;
  auto r = [first](double t) { return 4.0 / (M_PI * first * std::sin(M_PI * t)); };
  const double rx = r(x.x()), ry = r(x.y());
  return rx + ry + rx * ry;
}

double CavitySeries::tail_bound() const {
  // Dropped modes satisfy max(n, m) > N. With (n^2 + m^2) pi^2 - k^2 >=
  // (n^2 + m^2) pi^2 / gamma, summing 1/(n m max^2) gives the integral bound.
  const double big = 2.0 * modes_ + 1.0;
  const double lam_min = big * big * M_PI * M_PI;
  if (kappa_ * kappa_ >= lam_min) return std::numeric_limits<double>::infinity();
  const double gamma = 1.0 / (1.0 - kappa_ * kappa_ / lam_min);
  const double a = big - 2.0;
  const double integral = 0.5 / (a * a) + std::log(a) / (4 * a * a) + 1.0 / (8 * a * a);
  return 16.0 / std::pow(M_PI, 4) * gamma * 2.0 * integral;
}

ReferenceSolution reference_cavity(double kappa, int truncation) {
  const auto series = std::make_shared<const CavitySeries>(kappa, truncation);
  ReferenceSolution r;
  r.name = "cavity";
  r.u = [series](const Point& x) { return Complex(series->u(x), 0.0); };
  r.q = [series](const Point& x) { return series->q(x); };
  return r;
}

WaveguideOracle make_waveguide_oracle(const BenchmarkCase& bench, int refinement) {
  if (refinement < 2) throw std::invalid_argument("oracle refinement factor must be >= 2");
  WaveguideOracle o;
  o.refinement = refinement;
  o.degree = bench.degree + 1;
  auto disc = std::make_shared<const Discretization>(bench.make_mesh(refinement), o.degree);
  ProblemConfig cfg = bench.problem();
  cfg.degree = o.degree;
  const ChdgOperator op(*disc, cfg);
  const SparseSystem sys = assemble_reduced_chdg(op);
  Vector g;
  try {
    g = direct_solve(sys);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("waveguide oracle solve failed: ") + e.what());
  }
  o.fields = std::make_shared<const ElementFields>(op.reconstruct(g));
  o.locator = std::make_shared<const PointLocator>(disc->mesh());
  o.disc = std::move(disc);
  return o;
}

ReferenceSolution WaveguideOracle::reference() const {
  ReferenceSolution r;
  r.name = "waveguide_oracle";
  auto sample = [d = disc, f = fields, l = locator](const Point& x) {
    const auto loc = l->locate(x);
    if (!loc) throw std::out_of_range("oracle query outside the waveguide");
    return evaluate_in_element(*d, *f, loc->element, loc->reference);
  };
  r.u = [sample](const Point& x) { return sample(x).u; };
  r.q = [sample](const Point& x) { return sample(x).q; };
  return r;
}

ReferenceSolution reference_waveguide_oracle(const BenchmarkCase& bench, int refinement) {
  return make_waveguide_oracle(bench, refinement).reference();
}

ErrorEvaluator::ErrorEvaluator(const Discretization& disc, const ReferenceSolution& ref)
    : disc_(&disc), rule_(triangle_rule(2 * disc.degree() + 4)) {
  const int nq = static_cast<int>(rule_.points.size());
  phi_.resize(nq, disc.scalar_dofs());
  for (int q = 0; q < nq; ++q) phi_.row(q) = disc.basis().values(rule_.points[static_cast<std::size_t>(q)]).transpose();
  const int ne = disc.num_elements();
  values_.resize(static_cast<std::size_t>(ne * nq));
  weights_.resize(static_cast<std::size_t>(ne * nq));
  for (int k = 0; k < ne; ++k) {
    const AffineMap& map = disc.element(k).map;
    for (int q = 0; q < nq; ++q) {
      const auto idx = static_cast<std::size_t>(k * nq + q);
      const Point x = map.to_physical(rule_.points[static_cast<std::size_t>(q)]);
      const Eigen::Vector2cd qv = ref.q(x);
      values_[idx] = Eigen::Vector3cd(ref.u(x), qv(0), qv(1));
      weights_[idx] = std::abs(map.det) * rule_.weights[static_cast<std::size_t>(q)];
      ref_norm2_ += weights_[idx] * values_[idx].squaredNorm();
    }
  }
  if (!(ref_norm2_ > 0.0)) throw std::invalid_argument("relative error against a zero reference");
}

double ErrorEvaluator::operator()(const ElementFields& fields) const {
  const int nq = static_cast<int>(rule_.points.size());
  const int ne = disc_->num_elements();
  double err2 = 0.0;
#pragma omp parallel for reduction(+ : err2) schedule(static)
  for (int k = 0; k < ne; ++k) {
    const Vector u = phi_.cast<Complex>() * fields.u(k);
    const Vector qx = phi_.cast<Complex>() * fields.qx(k);
    const Vector qy = phi_.cast<Complex>() * fields.qy(k);
    for (int q = 0; q < nq; ++q) {
      const auto idx = static_cast<std::size_t>(k * nq + q);
      const Eigen::Vector3cd diff = values_[idx] - Eigen::Vector3cd(u(q), qx(q), qy(q));
      err2 += weights_[idx] * diff.squaredNorm();
    }
  }
  return std::sqrt(err2 / ref_norm2_);
}

double relative_error(const Discretization& disc, const ElementFields& fields, const ReferenceSolution& ref) {
  return ErrorEvaluator(disc, ref)(fields);
}

}  // namespace chdg
