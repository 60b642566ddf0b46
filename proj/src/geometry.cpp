#include "npshape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "npshape/quadrature.hpp"

namespace npshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double cross2(const Complex& a, const Complex& b) {
  return a.real() * b.imag() - a.imag() * b.real();
}

class LinePiece final : public Piece {
public:
  LinePiece(Complex z0, Complex z1, double t0, double t1)
      : Piece(t0, t1), z0_(z0), z1_(z1), v_((z1 - z0) / (t1 - t0)) {}

  Jet eval_from(int end, double d) const override {
    return {(end == 0 ? z0_ : z1_) + v_ * d, v_, Complex(0.0, 0.0)};
  }

private:
  Complex z0_, z1_, v_;
};

// Circular arc z = center + r e^{i phase}, phase affine in t. Phases are
// stored at both endpoints so offsets anchor exactly at either corner.
class ArcPiece final : public Piece {
public:
  ArcPiece(Complex center, double radius, double t0, double t1, double phase0, double phase1)
      : Piece(t0, t1), c_(center), r_(radius), ph0_(phase0), ph1_(phase1),
        w_((phase1 - phase0) / (t1 - t0)) {}

  Jet eval_from(int end, double d) const override {
    const double ph = (end == 0 ? ph0_ : ph1_) + w_ * d;
    const Complex e = std::polar(r_, ph);
    return {c_ + e, Complex(0.0, w_) * e, -w_ * w_ * e};
  }

private:
  Complex c_;
  double r_, ph0_, ph1_, w_;
};

class EllipsePiece final : public Piece {
public:
  EllipsePiece(double a, double b) : Piece(0.0, 1.0), a_(a), b_(b) {}

  Jet eval_from(int, double d) const override {
    // Period 1: both endpoints sit at phase 0, so the offset is the phase.
    const double th = 2.0 * kPi * d;
    const double c = std::cos(th), s = std::sin(th);
    const double w = 2.0 * kPi;
    return {Complex(a_ * c, b_ * s), Complex(-a_ * s * w, b_ * c * w),
            Complex(-a_ * c * w * w, -b_ * s * w * w)};
  }

private:
  double a_, b_;
};

class PolynomialImagePiece final : public Piece {
public:
  explicit PolynomialImagePiece(std::vector<Complex> coeffs)
      : Piece(0.0, 1.0), c_(std::move(coeffs)) {}

  Jet eval_from(int, double d) const override {
    const Complex u = std::polar(1.0, 2.0 * kPi * d);
    Complex z = 0.0, dz = 0.0, ddz = 0.0;
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
      z = z * u + c_[k];
      dz = dz * u + double(k) * c_[k];
      ddz = ddz * u + double(k) * double(k) * c_[k];
    }
    const Complex iw(0.0, 2.0 * kPi);
    return {z, iw * dz, iw * iw * ddz};
  }

private:
  std::vector<Complex> c_;
};

// Crown of the cap-shaped domain: x = -sqrt2 asin(cos(th)/sqrt2),
// y = -asinh(sin(th)), th affine in t, ending at th = 2 pi.
class CapCrownPiece final : public Piece {
public:
  CapCrownPiece(double t2, double omega, double theta_left)
      : Piece(t2, 1.0), w_(omega), thl_(theta_left) {}

  Jet eval_from(int end, double d) const override {
    // Right endpoint phase is exactly 2 pi; reduce by periodicity.
    const double th = (end == 0 ? thl_ : 0.0) + w_ * d;
    const double c = std::cos(th), s = std::sin(th);
    const double d2 = 1.0 + s * s;
    const double dn = std::sqrt(d2);
    const double x = -kSqrt2 * std::asin(0.5 * kSqrt2 * c);
    const double y = -std::asinh(s);
    const double xd = kSqrt2 * s / dn, yd = -c / dn;
    const double xdd = kSqrt2 * c / (dn * d2), ydd = 2.0 * s / (dn * d2);
    return {Complex(x, y), Complex(w_ * xd, w_ * yd),
            Complex(w_ * w_ * xdd, w_ * w_ * ydd)};
  }

private:
  double w_, thl_;
};

class ReflectedPiece final : public Piece {
public:
  explicit ReflectedPiece(std::shared_ptr<const Piece> inner)
      : Piece(1.0 - inner->t1(), 1.0 - inner->t0()), inner_(std::move(inner)) {}

  Jet eval_from(int end, double d) const override {
    const Jet j = inner_->eval_from(1 - end, -d);
    const Complex z2 = j.z * j.z;
    return {1.0 / j.z, j.dz / z2, -j.ddz / z2 + 2.0 * j.dz * j.dz / (z2 * j.z)};
  }

private:
  std::shared_ptr<const Piece> inner_;
};

class MirroredPiece final : public Piece {
public:
  explicit MirroredPiece(std::shared_ptr<const Piece> inner)
      : Piece(1.0 - inner->t1(), 1.0 - inner->t0()), inner_(std::move(inner)) {}

  Jet eval_from(int end, double d) const override {
    const Jet j = inner_->eval_from(1 - end, -d);
    return {std::conj(j.z), -std::conj(j.dz), std::conj(j.ddz)};
  }

private:
  std::shared_ptr<const Piece> inner_;
};

CurveSample sample_from_jet(const Jet& j) {
  CurveSample s;
  s.position = j.z;
  s.speed = std::abs(j.dz);
  s.unit_tangent = j.dz / s.speed;
  s.outward_normal = Complex(0.0, -1.0) * s.unit_tangent;
  s.curvature = cross2(j.dz, j.ddz) / (s.speed * s.speed * s.speed);
  return s;
}

}  // namespace

BoundaryCurve BoundaryCurve::from_pieces(std::vector<std::shared_ptr<const Piece>> pieces,
                                         std::vector<Corner> corners) {
  BoundaryCurve c;
  c.pieces_ = std::move(pieces);
  c.corners_ = std::move(corners);
  std::sort(c.corners_.begin(), c.corners_.end(),
            [](const Corner& a, const Corner& b) { return a.t < b.t; });
  c.validate();
  return c;
}

int BoundaryCurve::piece_index(double t) const {
  int lo = 0, hi = static_cast<int>(pieces_.size()) - 1;
  if (t >= pieces_.back()->t0()) return hi;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (pieces_[mid]->t0() <= t)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

Jet BoundaryCurve::jet(double t) const { return pieces_[piece_index(t)]->eval(t); }

CurveSample BoundaryCurve::sample(double t) const {
  CurveSample s = sample_from_jet(jet(t));
  for (const Corner& c : corners_)
    if (c.t == t) s.one_sided = true;
  return s;
}

Jet BoundaryCurve::jet_near_corner(int corner_index, double delta) const {
  const Corner& c = corners_.at(corner_index);
  if (delta >= 0.0) {
    const int ip = (c.t == 0.0) ? 0 : piece_index(c.t);
    return pieces_[ip]->eval_from(0, delta);
  }
  const int ip = (c.t == 0.0) ? static_cast<int>(pieces_.size()) - 1 : piece_index(c.t) - 1;
  return pieces_[ip]->eval_from(1, delta);
}

CurveSample BoundaryCurve::sample_near_corner(int corner_index, double delta) const {
  CurveSample s = sample_from_jet(jet_near_corner(corner_index, delta));
  s.one_sided = (delta == 0.0);
  return s;
}

Complex BoundaryCurve::corner_position(int corner_index) const {
  return jet_near_corner(corner_index, 0.0).z;
}

Complex BoundaryCurve::local_displacement(int corner_index, double delta) const {
  if (delta == 0.0) return {0.0, 0.0};
  const Corner& c = corners_.at(corner_index);
  // Guard: stay within the adjacent piece (corner-to-corner on all builtins).
  const int ip_out = (c.t == 0.0) ? 0 : piece_index(c.t);
  const int ip_in = (c.t == 0.0) ? static_cast<int>(pieces_.size()) - 1 : ip_out - 1;
  const double room = (delta > 0.0) ? pieces_[ip_out]->param_length()
                                    : pieces_[ip_in]->param_length();
  if (std::abs(delta) > room)
    throw InputError("local_displacement: offset exceeds the adjacent piece");

  // Integrate the velocity over the offset; no large positions are subtracted.
  const QuadRule& gl = panel_rule();
  const double len = std::abs(delta);
  const int npanels = std::max(1, static_cast<int>(std::ceil(len / 0.02)));
  const double sgn = (delta > 0.0) ? 1.0 : -1.0;
  KahanSum<Complex> acc;
  for (int p = 0; p < npanels; ++p) {
    const double s0 = len * p / npanels, s1 = len * (p + 1) / npanels;
    const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
    for (int i = 0; i < gl.size(); ++i) {
      const double off = sgn * (mid + half * gl.x[i]);
      acc.add(jet_near_corner(corner_index, off).dz * (gl.w[i] * half * sgn));
    }
  }
  return acc.value();
}

void BoundaryCurve::validate() {
  if (pieces_.empty()) throw InputError("curve: no pieces");
  const int np = static_cast<int>(pieces_.size());
  if (pieces_.front()->t0() != 0.0 || pieces_.back()->t1() != 1.0)
    throw InputError("curve: pieces must cover [0, 1]");
  for (int i = 0; i + 1 < np; ++i)
    if (pieces_[i]->t1() != pieces_[i + 1]->t0())
      throw InputError("curve: pieces must be contiguous");

  for (const Corner& c : corners_) {
    if (!(c.beta > -1.0 && c.beta < 1.0))
      throw InputError("curve: external angle must lie in (-1, 1)");
    bool at_break = (c.t == 0.0);
    for (int i = 0; i < np && !at_break; ++i) at_break = (pieces_[i]->t0() == c.t);
    if (!at_break) throw InputError("curve: corner parameter is not a piece breakpoint");
  }
  for (size_t i = 0; i + 1 < corners_.size(); ++i)
    if (corners_[i].t == corners_[i + 1].t) throw InputError("curve: duplicate corner");

  // Winding number about the origin, speed bounds, and radius/diameter scan.
  const QuadRule& gl = panel_rule();
  KahanSum<double> wind;
  double min_speed = 1e300, scale = 0.0;
  std::vector<Complex> probes;
  for (int ip = 0; ip < np; ++ip) {
    const Piece& p = *pieces_[ip];
    const int panels = 32;
    for (int q = 0; q < panels; ++q) {
      const double a = p.t0() + p.param_length() * q / panels;
      const double b = p.t0() + p.param_length() * (q + 1) / panels;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < gl.size(); ++i) {
        const Jet j = p.eval(mid + half * gl.x[i]);
        wind.add(gl.w[i] * half * std::imag(j.dz / j.z));
        min_speed = std::min(min_speed, std::abs(j.dz));
        scale = std::max(scale, std::abs(j.z));
        if (i == 7) probes.push_back(j.z);
      }
    }
    const Jet j0 = p.eval_from(0, 0.0), j1 = p.eval_from(1, 0.0);
    min_speed = std::min({min_speed, std::abs(j0.dz), std::abs(j1.dz)});
    scale = std::max({scale, std::abs(j0.z), std::abs(j1.z)});
  }
  max_radius_ = scale;
  if (min_speed <= 1e-12 * (1.0 + scale))
    throw InputError("curve: velocity vanishes on a piece");
  const double w = wind.value() / (2.0 * kPi);
  if (std::abs(w - 1.0) > 1e-6)
    throw InputError("curve: winding about the origin must be +1 "
                     "(origin inside, positive orientation); got " + std::to_string(w));

  diameter_ = 0.0;
  const size_t stride = std::max<size_t>(1, probes.size() / 256);
  for (size_t i = 0; i < probes.size(); i += stride)
    for (size_t j = i + stride; j < probes.size(); j += stride)
      diameter_ = std::max(diameter_, std::abs(probes[i] - probes[j]));

  // Closure and junction continuity; declared angles must match the turn.
  const double tol = 1e-13 * std::max(1.0, scale);
  auto junction_check = [&](const Piece& before, const Piece& after, double t_break) {
    const Jet jb = before.eval_from(1, 0.0), ja = after.eval_from(0, 0.0);
    if (std::abs(jb.z - ja.z) > tol)
      throw InputError("curve: discontinuous at t = " + std::to_string(t_break));
    const double turn = std::arg(ja.dz / jb.dz) / kPi;
    const Corner* corner = nullptr;
    for (const Corner& c : corners_)
      if (c.t == t_break) corner = &c;
    if (corner == nullptr) {
      if (std::abs(turn) > 1e-6)
        throw InputError("curve: undeclared corner at t = " + std::to_string(t_break));
    } else if (std::abs(turn - corner->beta) > 1e-6) {
      throw InputError("curve: declared external angle disagrees with the tangent turn at t = " +
                       std::to_string(t_break));
    }
  };
  junction_check(*pieces_.back(), *pieces_.front(), 0.0);
  for (int i = 0; i + 1 < np; ++i)
    junction_check(*pieces_[i], *pieces_[i + 1], pieces_[i + 1]->t0());
}

BoundaryCurve BoundaryCurve::reflected() const {
  std::vector<std::shared_ptr<const Piece>> ps;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it)
    ps.push_back(std::make_shared<ReflectedPiece>(*it));
  std::vector<Corner> cs;
  for (const Corner& c : corners_) {
    double t = 1.0 - c.t;
    if (t >= 1.0) t = 0.0;
    cs.push_back({t, -c.beta});
  }
  return from_pieces(std::move(ps), std::move(cs));
}

BoundaryCurve BoundaryCurve::mirrored() const {
  std::vector<std::shared_ptr<const Piece>> ps;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it)
    ps.push_back(std::make_shared<MirroredPiece>(*it));
  std::vector<Corner> cs;
  for (const Corner& c : corners_) {
    double t = 1.0 - c.t;
    if (t >= 1.0) t = 0.0;
    cs.push_back({t, c.beta});
  }
  return from_pieces(std::move(ps), std::move(cs));
}

BoundaryCurve make_disk(double radius) {
  if (!(radius > 0.0)) throw InputError("disk: radius must be positive");
  return BoundaryCurve::from_pieces({std::make_shared<EllipsePiece>(radius, radius)}, {});
}

BoundaryCurve make_ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("ellipse: semi-axes must be positive");
  return BoundaryCurve::from_pieces({std::make_shared<EllipsePiece>(a, b)}, {});
}

CapParameters cap_parameters() {
  const double sh = std::sinh(0.5);
  const double root = std::sqrt(1.0 - sh * sh);  // cos(asin(sinh(1/2)))
  CapParameters p;
  p.a = 0.5 - std::asin(sh) / (2.0 * kPi);
  const double cos2pa = -root;
  p.b = p.a - 1.0 / (4.0 * kPi) - kSqrt2 / 8.0 +
        (kSqrt2 / (2.0 * kPi)) * std::asin(0.5 * kSqrt2 * cos2pa);
  p.c = 9.0 / 8.0 - p.b;
  p.t1 = 1.0 / (8.0 * p.c);
  p.t2 = p.t1 + (p.a - p.b) / p.c;
  p.beta0 = -0.5;
  p.beta1 = 0.5;
  p.beta2 = std::atan2(root, kSqrt2 * sh) / kPi;
  p.corner0 = Complex(-kSqrt2 * kPi / 4.0, 0.0);
  p.corner1 = Complex(-kSqrt2 * kPi / 4.0 - 0.5, -0.5);
  p.corner2 = Complex(-kSqrt2 * std::asin(0.5 * kSqrt2 * cos2pa), -0.5);
  return p;
}

BoundaryCurve make_cap_shaped() {
  const CapParameters p = cap_parameters();
  const Complex arc_center(-kSqrt2 * kPi / 4.0, -0.5);
  std::vector<std::shared_ptr<const Piece>> pieces;
  pieces.push_back(std::make_shared<ArcPiece>(arc_center, 0.5, 0.0, p.t1, kPi / 2.0, kPi));
  pieces.push_back(std::make_shared<LinePiece>(p.corner1, p.corner2, p.t1, p.t2));
  const double theta_left = kPi - std::asin(std::sinh(0.5));  // = 2 pi a
  pieces.push_back(std::make_shared<CapCrownPiece>(p.t2, 2.0 * kPi * p.c, theta_left));
  return BoundaryCurve::from_pieces(std::move(pieces),
                                    {{0.0, p.beta0}, {p.t1, p.beta1}, {p.t2, p.beta2}});
}

std::vector<double> polygon_external_angles(std::span<const Complex> v) {
  const int n = static_cast<int>(v.size());
  if (n < 3) throw InputError("polygon: need at least 3 vertices");
  std::vector<double> beta(n);
  for (int j = 0; j < n; ++j) {
    const Complex prev = v[(j + n - 1) % n], next = v[(j + 1) % n];
    beta[j] = std::arg((next - v[j]) / (v[j] - prev)) / kPi;
  }
  return beta;
}

BoundaryCurve make_polygon_boundary(std::vector<Complex> vertices,
                                    std::optional<std::vector<double>> betas) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw InputError("polygon: need at least 3 vertices");
  double area2 = 0.0;
  for (int j = 0; j < n; ++j) area2 += cross2(vertices[j], vertices[(j + 1) % n]);
  if (area2 < 0.0) {
    std::reverse(vertices.begin(), vertices.end());
    if (betas) std::reverse(betas->begin(), betas->end());
  }
  std::vector<double> beta = betas ? *betas : polygon_external_angles(vertices);
  if (static_cast<int>(beta.size()) != n)
    throw InputError("polygon: external angle count must match vertex count");

  std::vector<std::shared_ptr<const Piece>> pieces;
  std::vector<Corner> corners;
  for (int j = 0; j < n; ++j) {
    const double t0 = double(j) / n, t1 = double(j + 1) / n;
    pieces.push_back(std::make_shared<LinePiece>(vertices[j], vertices[(j + 1) % n],
                                                 t0, j + 1 == n ? 1.0 : t1));
    corners.push_back({t0, beta[j]});
  }
  return BoundaryCurve::from_pieces(std::move(pieces), std::move(corners));
}

BoundaryCurve make_polygon_reflection(std::vector<Complex> vertices) {
  return make_polygon_boundary(std::move(vertices)).reflected();
}

double equilateral_triangle_circumradius() {
  const double g13 = std::tgamma(1.0 / 3.0), g23 = std::tgamma(2.0 / 3.0);
  return g13 * g13 / (3.0 * g23);
}

BoundaryCurve make_reflected_equilateral_triangle() {
  const double r = equilateral_triangle_circumradius();
  const std::vector<Complex> v = {Complex(r, 0.0),
                                  Complex(-0.5 * r, 0.5 * std::sqrt(3.0) * r),
                                  Complex(-0.5 * r, -0.5 * std::sqrt(3.0) * r)};
  const std::vector<double> beta = {2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
  return make_polygon_boundary(v, beta).reflected();
}

namespace {

bool segments_cross(const Complex& a1, const Complex& a2, const Complex& b1,
                    const Complex& b2) {
  const double lx = std::min({a1.real(), a2.real()}), hx = std::max({a1.real(), a2.real()});
  const double ly = std::min({a1.imag(), a2.imag()}), hy = std::max({a1.imag(), a2.imag()});
  if (std::max(b1.real(), b2.real()) < lx || std::min(b1.real(), b2.real()) > hx ||
      std::max(b1.imag(), b2.imag()) < ly || std::min(b1.imag(), b2.imag()) > hy)
    return false;
  const double la = std::abs(a2 - a1), lb = std::abs(b2 - b1);
  const double eps = 1e-12 * la * lb;
  const double d1 = cross2(b2 - b1, a1 - b1);
  const double d2 = cross2(b2 - b1, a2 - b1);
  const double d3 = cross2(a2 - a1, b1 - a1);
  const double d4 = cross2(a2 - a1, b2 - a1);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  // Near-collinear: crossing only if the projections overlap beyond roundoff.
  if (std::abs(d1) <= eps && std::abs(d2) <= eps && std::abs(d3) <= eps &&
      std::abs(d4) <= eps) {
    const Complex dir = (la >= lb ? a2 - a1 : b2 - b1);
    auto proj = [&](const Complex& p) {
      return p.real() * dir.real() + p.imag() * dir.imag();
    };
    const double s0 = std::min(proj(a1), proj(a2)), s1 = std::max(proj(a1), proj(a2));
    const double r0 = std::min(proj(b1), proj(b2)), r1 = std::max(proj(b1), proj(b2));
    const double overlap = std::min(s1, r1) - std::max(s0, r0);
    return overlap > 1e-10 * std::max(la, lb) * std::abs(dir);
  }
  return false;
}

}  // namespace

bool is_simple_closed_chain(std::span<const Complex> p) {
  const int n = static_cast<int>(p.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  }
  return true;
}

BoundaryCurve make_polynomial_image(std::vector<Complex> coeffs) {
  if (coeffs.size() < 2) throw InputError("polynomial_image: need degree >= 1");
  auto piece = std::make_shared<PolynomialImagePiece>(coeffs);
  const int nsamp = 2048;
  std::vector<Complex> probe(nsamp);
  for (int i = 0; i < nsamp; ++i) probe[i] = piece->eval(double(i) / nsamp).z;
  if (!is_simple_closed_chain(probe))
    throw InputError("polynomial_image: boundary self-intersects "
                     "(polynomial is not univalent on the closed disk)");
  return BoundaryCurve::from_pieces({piece}, {});
}

std::shared_ptr<const Piece> make_line_piece(Complex z0, Complex z1, double t0, double t1) {
  return std::make_shared<LinePiece>(z0, z1, t0, t1);
}

std::shared_ptr<const Piece> make_arc_piece(Complex center, double radius, double t0,
                                            double t1, double phase0, double phase1) {
  return std::make_shared<ArcPiece>(center, radius, t0, t1, phase0, phase1);
}

BoundaryCurve builtin_curve(const std::string& name, std::span<const double> params) {
  auto need = [&](size_t k) {
    if (params.size() != k)
      throw InputError("curve '" + name + "': expected " + std::to_string(k) +
                       " parameters, got " + std::to_string(params.size()));
  };
  if (name == "disk") {
    need(1);
    return make_disk(params[0]);
  }
  if (name == "ellipse") {
    need(2);
    return make_ellipse(params[0], params[1]);
  }
  if (name == "cap_shaped") {
    need(0);
    return make_cap_shaped();
  }
  if (name == "reflected_equilateral_triangle") {
    need(0);
    return make_reflected_equilateral_triangle();
  }
  if (name == "polynomial_image") {
    if (params.size() < 4 || params.size() % 2 != 0)
      throw InputError("polynomial_image: params are re/im pairs c0, c1, ...");
    std::vector<Complex> c(params.size() / 2);
    for (size_t k = 0; k < c.size(); ++k) c[k] = Complex(params[2 * k], params[2 * k + 1]);
    return make_polynomial_image(std::move(c));
  }
  if (name == "polygon_reflection") {
    if (params.size() < 6 || params.size() % 2 != 0)
      throw InputError("polygon_reflection: params are x/y vertex pairs");
    std::vector<Complex> v(params.size() / 2);
    for (size_t k = 0; k < v.size(); ++k) v[k] = Complex(params[2 * k], params[2 * k + 1]);
    return make_polygon_reflection(std::move(v));
  }
  throw InputError("unknown curve '" + name + "'");
}

}  // namespace npshape
