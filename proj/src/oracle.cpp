#include "npshape/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "npshape/quadrature.hpp"

namespace npshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDyadicLevels = 36;

// 1 - e^{i phi} without cancellation for small |phi|.
Complex one_minus_cis(double phi) {
  const double h = 0.5 * phi;
  return Complex(0.0, -2.0 * std::sin(h)) * std::polar(1.0, h);
}

}  // namespace

double regular_polygon_circumradius(int n) {
  // S(1) for the map with derivative (1 - w^n)^{-2/n} and unit slope at 0.
  const double a = 1.0 / n, b = 1.0 - 2.0 / n;
  return std::tgamma(a) * std::tgamma(b) / (n * std::tgamma(a + b));
}

Polygon make_regular_polygon(int nsides) {
  if (nsides < 3) throw InputError("regular polygon: need at least 3 sides");
  Polygon p;
  const double r = regular_polygon_circumradius(nsides);
  for (int j = 0; j < nsides; ++j) {
    const Complex a = std::polar(1.0, kTwoPi * j / nsides);
    p.pre_vertices.push_back(a);
    p.vertices.push_back(r * a);
    p.external_angles.push_back(2.0 / nsides);
  }
  validate_polygon(p);
  return p;
}

void validate_polygon(const Polygon& p) {
  const int n = p.size();
  if (n < 3) throw InputError("polygon: need at least 3 vertices");
  if (static_cast<int>(p.external_angles.size()) != n)
    throw InputError("polygon: angle count != vertex count");
  double sum = 0.0;
  for (double b : p.external_angles) {
    if (!(b > -1.0 && b < 1.0)) throw InputError("polygon: external angle outside (-1,1)");
    sum += b;
  }
  if (std::abs(sum - 2.0) > 1e-12)
    throw InputError("polygon: external angles must sum to 2, got " + std::to_string(sum));
  if (!is_simple_closed_chain(p.vertices))
    throw InputError("polygon: vertex chain is not simple");

  // Origin inside: winding of the vertex chain about 0.
  double wind = 0.0;
  for (int j = 0; j < n; ++j)
    wind += std::arg(p.vertices[(j + 1) % n] / p.vertices[j]);
  if (std::abs(wind / kTwoPi - 1.0) > 1e-9)
    throw InputError("polygon: must contain the origin with positive orientation");

  if (p.has_pre_vertices()) {
    if (static_cast<int>(p.pre_vertices.size()) != n)
      throw InputError("polygon: prevertex count != vertex count");
    for (const Complex& a : p.pre_vertices)
      if (std::abs(std::abs(a) - 1.0) > 1e-12)
        throw InputError("polygon: prevertices must have unit modulus");
    for (int j = 0; j < n; ++j) {
      const double gap =
          std::arg(p.pre_vertices[(j + 1) % n] / p.pre_vertices[j]);
      const double norm = gap < 0.0 ? gap + kTwoPi : gap;
      if (norm <= 1e-12) throw InputError("polygon: prevertices must be distinct and ordered");
    }
  }
}

GeometricFactors sigma_from_prevertices(const Polygon& p, int order) {
  if (!p.has_pre_vertices()) throw InputError("sigma_from_prevertices: prevertices unknown");
  GeometricFactors gf;
  gf.provenance = GeometricFactors::Source::sc_oracle;
  gf.sigma.assign(order + 1, Complex(0.0));
  std::vector<Complex> apow(p.size(), Complex(1.0));
  for (int k = 1; k <= order; ++k) {
    KahanSum<Complex> acc;
    for (int j = 0; j < p.size(); ++j) {
      apow[j] *= std::conj(p.pre_vertices[j]);  // a_j^{-k}, |a_j| = 1
      acc.add(p.external_angles[j] * apow[j]);
    }
    gf.sigma[k] = acc.value();
  }
  return gf;
}

ScTaylor sc_taylor(const Polygon& p, int order) {
  const GeometricFactors st = sigma_from_prevertices(p, order + 1);
  // Taylor coefficients c_k of the map derivative from its log-derivative:
  // c_k = (sum_{j<k} c_j st_{k-j}) / k, c_0 = 1; then b_{k+1} = c_k/(k+1).
  std::vector<Complex> c(order + 2, Complex(0.0));
  c[0] = 1.0;
  for (int k = 1; k <= order + 1; ++k) {
    KahanSum<Complex> acc;
    for (int j = 0; j <= k - 1; ++j) acc.add(c[j] * st.sigma[k - j]);
    c[k] = acc.value() / double(k);
  }
  ScTaylor out;
  out.b.assign(order + 3, Complex(0.0));
  out.b[1] = 1.0;
  for (int k = 1; k <= order + 1; ++k) out.b[k + 1] = c[k] / double(k + 1);
  out.sigma = sigma_from_b(out.b, order, GeometricFactors::Source::sc_oracle);
  return out;
}

ScTrace::ScTrace(const Polygon& p) {
  validate_polygon(p);
  if (!p.has_pre_vertices()) throw InputError("ScTrace: prevertices unknown");
  const int n = p.size();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> angles(n);
  for (int j = 0; j < n; ++j) {
    double t = std::arg(p.pre_vertices[j]) / kTwoPi;
    if (t < 0.0) t += 1.0;
    angles[j] = t;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return angles[a] < angles[b]; });
  for (int j : order) {
    pre_.push_back(p.pre_vertices[j]);
    beta_.push_back(p.external_angles[j]);
    tau_.push_back(angles[j]);
  }

  vertex_values_.resize(n);
  for (int j = 0; j < n; ++j) vertex_values_[j] = radial_unscaled(j);

  // Scale fixed by perimeter matching; the unscaled image is a polygon with
  // vertices S1(a_j), so both perimeters are plain vertex sums.
  double peri_img = 0.0, peri_ref = 0.0;
  for (int j = 0; j < n; ++j) {
    peri_img += std::abs(vertex_values_[(j + 1) % n] - vertex_values_[j]);
    peri_ref += std::abs(p.vertices[(j + 1) % n] - p.vertices[j]);
  }
  capacity_ = peri_img / peri_ref;
}

Complex ScTrace::radial_unscaled(int vertex) const {
  // Integral of the map derivative along the ray 0 -> a_vertex, written in
  // the distance v = 1 - s to the endpoint: the anchor factor is v^{-beta}
  // exactly on this ray. Dyadic panels toward v = 0, Gauss-Jacobi innermost.
  // All anchor distances come from the exact panel offsets, never from a
  // rounded global parameter.
  const Complex a = pre_[vertex];
  const double beta = beta_[vertex];
  const QuadRule& gl = panel_rule();
  const QuadRule gj = gauss_jacobi(24, 0.0, -beta);  // singular end at x = -1

  auto smooth_rest = [&](double v) {
    const double s = 1.0 - v;
    KahanSum<Complex> logsum;
    for (size_t j = 0; j < pre_.size(); ++j) {
      if (static_cast<int>(j) == vertex) continue;
      logsum.add(-beta_[j] * std::log(1.0 - s * a / pre_[j]));
    }
    return std::exp(logsum.value()) * a;
  };

  KahanSum<Complex> total;
  const double h0 = std::ldexp(1.0, -kDyadicLevels);
  const double scale = std::pow(0.5 * h0, 1.0 - beta);
  for (int i = 0; i < gj.size(); ++i) {
    const double v = 0.5 * h0 * (1.0 + gj.x[i]);
    total.add(scale * gj.w[i] * smooth_rest(v));
  }
  double left = h0;
  for (int lev = kDyadicLevels - 1; lev >= 0; --lev) {
    const double right = std::ldexp(1.0, -lev);
    const double mid = 0.5 * (left + right), half = 0.5 * (right - left);
    for (int i = 0; i < gl.size(); ++i) {
      const double v = mid + half * gl.x[i];
      total.add(gl.w[i] * half * smooth_rest(v) * std::pow(v, -beta));
    }
    left = right;
  }
  return total.value();
}

Complex ScTrace::arc_from(int vertex, double t) const {
  // Circle-arc integral from the prevertex angle tau to t, anchored at the
  // singular end: dyadic panels away from tau, Gauss-Jacobi innermost. The
  // anchor distance u is carried exactly; only the bounded factors see the
  // rounded global angle tau + sgn u.
  const double tau = tau_[vertex];
  const double beta = beta_[vertex];
  double gap = t - tau;
  double sgn = 1.0;
  if (gap == 0.0) return {0.0, 0.0};
  if (gap < 0.0) {
    sgn = -1.0;
    gap = -gap;
  }

  const QuadRule& gl = panel_rule();
  const QuadRule gj = gauss_jacobi(24, 0.0, -beta);

  auto rest_of_integrand = [&](double u) {  // everything except the anchor factor
    const double s = tau + sgn * u;
    KahanSum<Complex> logsum;
    for (size_t j = 0; j < pre_.size(); ++j) {
      if (static_cast<int>(j) == vertex) continue;
      logsum.add(-beta_[j] * std::log(one_minus_cis(kTwoPi * (s - tau_[j]))));
    }
    const Complex w = std::polar(1.0, kTwoPi * s);
    return std::exp(logsum.value()) * Complex(0.0, kTwoPi) * w;
  };

  KahanSum<Complex> total;
  const double h0 = gap * std::ldexp(1.0, -kDyadicLevels);
  const double scale = std::pow(0.5 * h0, 1.0 - beta);
  for (int i = 0; i < gj.size(); ++i) {
    const double u = 0.5 * h0 * (1.0 + gj.x[i]);
    // Gauss-Jacobi soaks up u^{-beta}; multiply back the smooth remainder
    // (1 - w/a)^{-beta} u^{+beta} through the stable ratio form.
    const Complex ratio = one_minus_cis(kTwoPi * sgn * u) / u;
    total.add(scale * gj.w[i] * rest_of_integrand(u) *
              std::exp(-beta * std::log(ratio)));
  }
  double left = h0;
  for (int lev = kDyadicLevels - 1; lev >= 0; --lev) {
    const double right = gap * std::ldexp(1.0, -lev);
    const double mid = 0.5 * (left + right), half = 0.5 * (right - left);
    for (int i = 0; i < gl.size(); ++i) {
      const double u = mid + half * gl.x[i];
      const Complex anchor = one_minus_cis(kTwoPi * sgn * u);
      total.add(gl.w[i] * half * rest_of_integrand(u) *
                std::exp(-beta * std::log(anchor)));
    }
    left = right;
  }
  return sgn * total.value();
}

Complex ScTrace::operator()(double t) const {
  double tw = t - std::floor(t);
  const int n = static_cast<int>(pre_.size());

  // Nearest prevertex angle (cyclically) anchors the integral.
  int best = 0;
  double best_dist = 2.0;
  for (int j = 0; j < n; ++j) {
    double d = std::abs(tw - tau_[j]);
    d = std::min(d, 1.0 - d);
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  if (best_dist == 0.0) return vertex_values_[best] / capacity_;

  double anchor_t = tw;
  if (tw - tau_[best] > 0.5) anchor_t = tw - 1.0;       // wrap below tau
  else if (tau_[best] - tw > 0.5) anchor_t = tw + 1.0;  // wrap above tau
  return (vertex_values_[best] + arc_from(best, anchor_t)) / capacity_;
}

ApproxPolygonData approx_polygon(const std::function<Complex(double)>& alpha,
                                 std::span<const double> corner_params, int n) {
  if (n < 3) throw InputError("approx_polygon: need n >= 3");
  ApproxPolygonData data;
  data.n = n;
  data.nodes.resize(n);
  data.unit_pre.resize(n);
  for (int j = 0; j < n; ++j) {
    const double t = double(j) / n;
    data.nodes[j] = alpha(t);
    data.unit_pre[j] = std::polar(1.0, kTwoPi * t);
  }
  for (double tl : corner_params) {
    const Complex corner = alpha(tl);
    int jbest = 0;
    double dbest = 1e300;
    for (int j = 0; j < n; ++j) {
      const double d = std::abs(data.nodes[j] - corner);
      if (d < dbest) {
        dbest = d;
        jbest = j;
      }
    }
    // Ties with an already-snapped index move to the next node.
    while (std::find(data.snapped.begin(), data.snapped.end(), jbest) != data.snapped.end())
      jbest = (jbest + 1) % n;
    data.nodes[jbest] = corner;
    data.unit_pre[jbest] = std::polar(1.0, kTwoPi * tl);
    data.snapped.push_back(jbest);
  }
  if (!is_simple_closed_chain(data.nodes))
    throw InputError("approx_polygon: node chain is not a simple polygon; increase n");
  data.beta = polygon_external_angles(data.nodes);
  return data;
}

ApproxPolygonData approx_polygon(const BoundaryCurve& curve, int n) {
  std::vector<double> corner_ts;
  for (const Corner& c : curve.corners()) corner_ts.push_back(c.t);
  return approx_polygon([&](double t) { return curve.position(t); }, corner_ts, n);
}

GeometricFactors sigma_tilde(const ApproxPolygonData& data, int order) {
  GeometricFactors gf;
  gf.provenance = GeometricFactors::Source::sc_oracle;
  gf.sigma.assign(order + 1, Complex(0.0));
  std::vector<Complex> epow(data.n, Complex(1.0));
  for (int k = 1; k <= order; ++k) {
    KahanSum<Complex> acc;
    for (int j = 0; j < data.n; ++j) {
      epow[j] *= std::conj(data.unit_pre[j]);
      acc.add(data.beta[j] * epow[j]);
    }
    gf.sigma[k] = acc.value();
  }
  return gf;
}

}  // namespace npshape
