#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npshape/types.hpp"

namespace npshape {

// Point sample of a positively oriented boundary curve.
struct CurveSample {
  Complex position{};
  Complex unit_tangent{};
  Complex outward_normal{};  // tangent rotated by -pi/2
  double speed = 0.0;        // |alpha'(t)|
  double curvature = 0.0;    // (x'y'' - x''y') / |alpha'|^3
  bool one_sided = false;    // sample taken at a corner, limit from above
};

struct Jet {
  Complex z{};
  Complex dz{};
  Complex ddz{};
};

// One analytic arc of a piecewise boundary, defined on [t0, t1] in the global
// parameter. eval_from(end, delta) evaluates at (endpoint + delta) with the
// offset kept in exact arithmetic: dyadic corner refinement produces offsets
// far below the resolution of t0 + delta formed in doubles.
class Piece {
public:
  Piece(double t0, double t1) : t0_(t0), t1_(t1) {}
  virtual ~Piece() = default;

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double param_length() const { return t1_ - t0_; }

  virtual Jet eval_from(int end, double delta) const = 0;

  Jet eval(double t) const {
    const double dl = t - t0_, dr = t - t1_;
    return (dl <= -dr) ? eval_from(0, dl) : eval_from(1, dr);
  }

private:
  double t0_, t1_;
};

struct Corner {
  double t = 0.0;     // parameter in [0, 1)
  double beta = 0.0;  // external angle / pi, in (-1, 1)
};

// Closed, positively oriented, piecewise-analytic Jordan curve enclosing the
// origin. Immutable after construction; all evaluations are pure.
class BoundaryCurve {
public:
  // Validates closure, continuity, nonvanishing velocity, declared corner
  // angles, and unit winding about the origin; throws InputError otherwise.
  static BoundaryCurve from_pieces(std::vector<std::shared_ptr<const Piece>> pieces,
                                   std::vector<Corner> corners);

  const std::vector<std::shared_ptr<const Piece>>& pieces() const { return pieces_; }
  const std::vector<Corner>& corners() const { return corners_; }
  bool has_corners() const { return !corners_.empty(); }

  CurveSample sample(double t) const;
  Jet jet(double t) const;
  Complex position(double t) const { return jet(t).z; }

  // Corner-anchored evaluation for the dyadic mesh: parameter corner_t + delta
  // with delta applied inside the piece (exact for tiny offsets).
  Jet jet_near_corner(int corner_index, double delta) const;
  CurveSample sample_near_corner(int corner_index, double delta) const;
  Complex corner_position(int corner_index) const;

  // z(t_l + delta) - z(t_l) evaluated without cancellation (velocity is
  // integrated over the offset instead of subtracting nearby positions).
  // Requires |delta| at most half the parameter distance to adjacent corners.
  Complex local_displacement(int corner_index, double delta) const;

  // Reflection across the unit circle, z -> 1/z, reparametrized t -> 1-t so
  // the image is again positively oriented. External angles flip sign.
  BoundaryCurve reflected() const;

  // Mirror image across the real axis (conjugation), reparametrized likewise.
  BoundaryCurve mirrored() const;

  double max_radius() const { return max_radius_; }
  double diameter() const { return diameter_; }

private:
  BoundaryCurve() = default;
  int piece_index(double t) const;
  void validate();

  std::vector<std::shared_ptr<const Piece>> pieces_;
  std::vector<Corner> corners_;
  double max_radius_ = 0.0;
  double diameter_ = 0.0;
};

// Built-in domains.
BoundaryCurve make_disk(double radius);
BoundaryCurve make_ellipse(double a, double b);
BoundaryCurve make_cap_shaped();
BoundaryCurve make_polygon_boundary(std::vector<Complex> vertices,
                                    std::optional<std::vector<double>> betas = std::nullopt);
BoundaryCurve make_polygon_reflection(std::vector<Complex> vertices);
BoundaryCurve make_reflected_equilateral_triangle();
// Image of the unit circle under the polynomial c[0] + c[1] z + ... Requires
// the image to be a Jordan curve around the origin (dense pairwise check).
BoundaryCurve make_polynomial_image(std::vector<Complex> coeffs);

// Dispatch by name; params are the flattened real parameter list.
BoundaryCurve builtin_curve(const std::string& name, std::span<const double> params);

// Elementary pieces for explicit piecewise domain specs.
std::shared_ptr<const Piece> make_line_piece(Complex z0, Complex z1, double t0, double t1);
std::shared_ptr<const Piece> make_arc_piece(Complex center, double radius, double t0,
                                            double t1, double phase0, double phase1);

// Circumradius of the equilateral triangle whose interior disk map has unit
// derivative at the origin and prevertices at the cube roots of unity.
double equilateral_triangle_circumradius();

// External angles (turn / pi) of a simple closed polygon, counterclockwise.
std::vector<double> polygon_external_angles(std::span<const Complex> vertices);

// True if the closed chain p[0] p[1] ... p[n-1] p[0] is a simple polygon.
bool is_simple_closed_chain(std::span<const Complex> points);

// Parameters of the cap-shaped domain, exposed for tests and reporting.
struct CapParameters {
  double a, b, c, t1, t2;
  double beta0, beta1, beta2;
  Complex corner0, corner1, corner2;
};
CapParameters cap_parameters();

}  // namespace npshape
