#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "torsion/grid.hpp"

namespace torsion {

class SmoothField;

/// Discrete scalar field on a GridMask: one value per node, zero at exterior
/// nodes. The mask is shared and immutable.
class GridField {
 public:
  GridField(std::shared_ptr<const GridMask> mask, std::vector<double> values, double residual = 0.0,
            int iterations = 0);

  const GridMask& mask() const { return *mask_; }
  const std::shared_ptr<const GridMask>& shared_mask() const { return mask_; }
  std::span<const double> values() const { return values_; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(mask_->index(i, j))]; }
  double at(int node) const { return values_[static_cast<std::size_t>(node)]; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  std::shared_ptr<const GridMask> mask_;
  std::vector<double> values_;
  double residual_;
  int iterations_;
};

/// Samples a closed form at the mask's unknown nodes.
GridField sample_on_grid(std::shared_ptr<const GridMask> mask, const SmoothField& field);

struct SolverOptions {
  /// Bound on the infinity norm of 1 + L_h u, L_h the discrete Laplacian.
  double tol = 1e-10;
  int max_iterations = 1'000'000;
};

struct SolveResult {
  GridField field;
  double M = 0.0;
  Point argmax;
  double tau = 0.0;
  double residual = 0.0;
};

/// Solves -L_h u = 1 with u = 0 on the true boundary.
///
/// L_h is the symmetric Shortley-Weller Laplacian: a leg of fractional length
/// theta towards the boundary contributes (u_B - u_P) / (theta h^2) with
/// u_B = 0, unknown neighbours contribute (u_Q - u_P) / h^2. The matrix is
/// symmetric positive definite and the scheme is second-order accurate in the
/// maximum norm. Jacobi-preconditioned conjugate gradients; throws
/// NonConvergence past the iteration cap and SingularSystem for an empty mask.
SolveResult solve_torsion(std::shared_ptr<const GridMask> mask, const SolverOptions& options = {});
SolveResult solve_torsion(const GridMask& mask, const SolverOptions& options = {});

/// Infinity norm of 1 + L_h v over the unknowns.
double discrete_residual(const GridField& v);

/// Node quadrature: value * h^2 * clipped cell-area fraction.
double integrate(const GridField& v);

double torsional_rigidity(const SolveResult& result);

/// Discrete Dirichlet energy over squared integral.
///
/// The energy sums squared central differences over grid edges, with the
/// boundary legs measured to the true boundary, and the integral is the plain
/// node sum h^2 sum v. With these choices the solution of solve_torsion is the
/// exact minimiser over grid functions. Throws ZeroDenominator when the sum
/// vanishes.
double rayleigh_quotient(const GridField& v);

/// Maximum node, refined by fitting a quadratic to its 3x3 neighbourhood.
struct RefinedMax {
  Point point;
  double value = 0.0;
  int node = -1;
};
RefinedMax refine_argmax(const GridField& v);

/// CSV with header `x,y,value`, one row per unknown node.
void write_field_csv(std::ostream& out, const GridField& v);

/// {M, argmax, tau, residual, h, iterations, unknowns}
nlohmann::json summary_json(const SolveResult& result);

}  // namespace torsion
