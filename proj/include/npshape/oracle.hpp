#pragma once

#include <functional>
#include <span>
#include <vector>

#include "npshape/coeffs.hpp"
#include "npshape/geometry.hpp"
#include "npshape/types.hpp"

namespace npshape {

// Simple polygon with external angles beta_j (turn / pi) and, when known, the
// disk prevertices a_j of its interior conformal map.
struct Polygon {
  std::vector<Complex> vertices;        // counterclockwise
  std::vector<double> external_angles;  // sum = 2
  std::vector<Complex> pre_vertices;    // unit modulus, empty if unknown

  bool has_pre_vertices() const { return !pre_vertices.empty(); }
  int size() const { return static_cast<int>(vertices.size()); }
};

// Regular n-gon in standard position: vertices R_n e^{2 pi i j / n} with the
// prevertices at the same roots of unity and R_n fixed by unit map derivative
// at the origin.
Polygon make_regular_polygon(int nsides);
double regular_polygon_circumradius(int nsides);

// Validates angle sum, simplicity, origin, and prevertex ordering.
void validate_polygon(const Polygon& p);

// sigma_k of the reflected polygon: sum_j beta_j a_j^{-k}.
GeometricFactors sigma_from_prevertices(const Polygon& p, int order);

// Interior-map Taylor route: the log-derivative recurrence for the map
// derivative gives b_{k+1}, then the sigma recurrence. Exactly consistent
// with sigma_from_prevertices; the pair is the library's algebraic oracle.
struct ScTaylor {
  std::vector<Complex> b;  // b[1..order+1]
  GeometricFactors sigma;  // to `order`
};
ScTaylor sc_taylor(const Polygon& p, int order);

// Boundary trace of the interior map, S(e^{2 pi i t}), normalized S(0) = 0,
// S'(0) = 1/C > 0 with C fixed by perimeter matching against the vertices.
class ScTrace {
public:
  explicit ScTrace(const Polygon& p);

  Complex operator()(double t) const;
  double capacity() const { return capacity_; }
  // Prevertex angles in [0, 1), sorted; S maps them to the vertices.
  const std::vector<double>& corner_params() const { return tau_; }
  Complex vertex_image(int j) const { return vertex_values_[j] / capacity_; }

private:
  Complex arc_from(int vertex, double t) const;  // integral a_vertex -> e^{2pi i t}
  Complex radial_unscaled(int vertex) const;     // integral 0 -> a_vertex

  std::vector<Complex> pre_;   // sorted by angle
  std::vector<double> beta_;   // matching order
  std::vector<double> tau_;    // angles of pre_ in [0,1)
  std::vector<Complex> vertex_values_;  // unscaled S1(a_j)
  double capacity_ = 1.0;
};

// Inscribed approximating polygon: nodes alpha(j/n) with the node nearest
// each corner snapped onto the corner itself.
struct ApproxPolygonData {
  int n = 0;
  std::vector<Complex> nodes;      // p_{n,j}, j = 0..n-1
  std::vector<Complex> unit_pre;   // e_{n,j}
  std::vector<double> beta;        // external angles of the chain
  std::vector<int> snapped;        // snapped node indices, one per corner
};

ApproxPolygonData approx_polygon(const std::function<Complex(double)>& alpha,
                                 std::span<const double> corner_params, int n);
ApproxPolygonData approx_polygon(const BoundaryCurve& curve, int n);

// sigma~_{n,k} = sum_j beta_{n,j} e_{n,j}^{-k}.
GeometricFactors sigma_tilde(const ApproxPolygonData& data, int order);

}  // namespace npshape
