#pragma once

#include <vector>

#include "chdg/discretization.hpp"

namespace chdg {

enum class Method { dg, hdg, chdg };

std::string to_string(Method method);
Method parse_method(const std::string& name);

/// Dof layout of a global system: `num_blocks` contiguous blocks of
/// `block_size` unknowns. DG blocks are elements, HDG blocks are faces and
/// CHDG blocks are (element, local face) pairs.
struct DofLayout {
  Method method = Method::dg;
  int block_size = 0;
  int num_blocks = 0;

  int size() const { return block_size * num_blocks; }
};

struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;
  DofLayout layout;
};

/// Coefficients of (u_h, q_h), element-major, each element holding the
/// u block, then q_x, then q_y.
class ElementFields {
 public:
  ElementFields() = default;
  ElementFields(int num_elements, int scalar_dofs);
  ElementFields(Vector coefficients, int scalar_dofs);

  int num_elements() const { return num_elements_; }
  int scalar_dofs() const { return n_; }

  const Vector& coefficients() const { return coeffs_; }
  Vector& coefficients() { return coeffs_; }

  auto element(int k) { return coeffs_.segment(3 * n_ * k, 3 * n_); }
  auto element(int k) const { return coeffs_.segment(3 * n_ * k, 3 * n_); }
  auto u(int k) const { return coeffs_.segment(3 * n_ * k, n_); }
  auto qx(int k) const { return coeffs_.segment(3 * n_ * k + n_, n_); }
  auto qy(int k) const { return coeffs_.segment(3 * n_ * k + 2 * n_, n_); }

 private:
  int num_elements_ = 0;
  int n_ = 0;
  Vector coeffs_;
};

struct FieldSample {
  Complex u{0.0, 0.0};
  Eigen::Vector2cd q = Eigen::Vector2cd::Zero();
};

/// Numerical trace and normal flux on a face seen from K with normal n.
struct FluxPair {
  Complex trace{0.0, 0.0};
  Complex normal_flux{0.0, 0.0};
};

/// Upwind fluxes from the traces of K (u, q) and of the neighbor (u_nb, q_nb).
FluxPair upwind_flux(Complex u, const Eigen::Vector2cd& q, Complex u_nb, const Eigen::Vector2cd& q_nb, const Point& n);
/// The same fluxes written with g_out = u + n.q and g_in = u_nb - n.q_nb.
FluxPair characteristic_flux(Complex g_out, Complex g_in);

/// Upwind DG system of the first-order Helmholtz problem.
/// Throws std::invalid_argument on untagged boundary faces.
SparseSystem assemble_dg(const Discretization& disc, const ProblemConfig& config);

/// Field values at a reference point of element k.
FieldSample evaluate_in_element(const Discretization& disc, const ElementFields& fields, int k, const Point& xi);

/// Field values at physical points. Throws std::out_of_range for points
/// outside the mesh.
std::vector<FieldSample> evaluate_solution(const Discretization& disc, const ElementFields& fields,
                                           const std::vector<Point>& points);

using ScalarField = std::function<Complex(const Point&)>;
using VectorField = std::function<Eigen::Vector2cd(const Point&)>;

/// Element-wise L2 projection of (u, q) onto the discrete spaces.
ElementFields project_fields(const Discretization& disc, const ScalarField& u, const VectorField& q);

/// Drops exactly-zero stored entries and compresses.
void prune_exact_zeros(SparseMatrix& matrix);

}  // namespace chdg
