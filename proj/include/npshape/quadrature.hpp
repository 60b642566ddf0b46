#pragma once

#include <vector>

namespace npshape {

// Quadrature rule on [-1, 1]: sum w[i] * f(x[i]).
struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

// n-point Gauss-Legendre rule (weight 1).
QuadRule gauss_legendre(int n);

// n-point Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta,
// alpha, beta > -1. The weights absorb the singular factor, so the
// integrand passed to the rule must be the smooth part only.
QuadRule gauss_jacobi(int n, double alpha, double beta);

// Cached 16-point Gauss-Legendre rule used by panel quadrature throughout.
const QuadRule& panel_rule();

}  // namespace npshape
