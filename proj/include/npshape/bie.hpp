#pragma once

#include <Eigen/Dense>
#include <memory>

#include "npshape/coeffs_tables.hpp"
#include "npshape/mesh.hpp"

namespace npshape {

enum class Flavor { cos, sin };

// Boundary density at the mesh nodes, solution of (-1/2 I - K*) phi = rhs.
struct Density {
  Eigen::VectorXd values;
  double mean = 0.0;  // arclength average
};

// Dense Nystrom discretization of -1/2 I - K* on a panel mesh, with the
// factorization cached so many right-hand sides reuse one LU.
class NpSystem {
public:
  NpSystem(const PanelMesh& mesh, int threads = 1);

  const Eigen::MatrixXd& matrix() const { return A_; }
  const PanelMesh& mesh() const { return *mesh_; }
  double gauss_residual() const { return gauss_residual_; }

  Density solve(const Eigen::VectorXd& rhs) const;

private:
  const PanelMesh* mesh_;
  Eigen::MatrixXd A_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double gauss_residual_ = 0.0;
};

NpSystem assemble_np(const PanelMesh& mesh, int threads = 1);

// nu . grad P_n at one boundary sample, P_n^c = Re z^n, P_n^s = Im z^n.
double neumann_data(int n, Flavor flavor, const CurveSample& sample);

// Right-hand side vector over all mesh nodes.
Eigen::VectorXd neumann_rhs(const PanelMesh& mesh, int n, Flavor flavor);

// Full table of contracted moments M^{alpha beta}_{kn}, 1 <= k, n <= order;
// one solve per (n, alpha) against the cached factorization.
GptTable gpt_table(const PanelMesh& mesh, const NpSystem& system, int order);

// (1/2pi) int log|z - y| phi(y) ds(y) at an exterior point z, valid when z is
// farther than twice the largest panel arclength from the boundary.
double single_layer_eval(const PanelMesh& mesh, const Density& phi, Complex z);

struct MultipoleValue {
  double value = 0.0;  // perturbation u - h at z
  double tail = 0.0;   // crude bound for the truncated series tail
};

// Perturbation via the multipole series with coefficients from the gamma
// table; requires |z| > 1.5 * boundary_max_radius.
MultipoleValue multipole_eval(const GammaTable& gamma, int n, Flavor flavor, Complex z,
                              double boundary_max_radius);

}  // namespace npshape
