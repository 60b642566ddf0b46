#include <doctest.h>

#include <cmath>
#include <numbers>

#include "npshape/quadrature.hpp"

using namespace npshape;

namespace {
constexpr double kPi = std::numbers::pi;

double integrate(const QuadRule& r, double (*f)(double)) {
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}
}  // namespace

TEST_CASE("16-point Gauss-Legendre matches the reference abscissas") {
  const QuadRule& r = panel_rule();
  REQUIRE(r.size() == 16);
  // Literature values for the largest node/weight pair.
  CHECK(std::abs(r.x[15] - 0.9894009349916499) < 1e-14);
  CHECK(std::abs(r.w[15] - 0.0271524594117541) < 1e-14);
  CHECK(std::abs(r.x[8] - 0.0950125098376374) < 1e-14);
  CHECK(std::abs(r.w[8] - 0.1894506104550685) < 1e-14);
  double wsum = 0.0;
  for (double w : r.w) wsum += w;
  CHECK(std::abs(wsum - 2.0) < 1e-14);
}

TEST_CASE("Gauss-Legendre integrates degree 31 exactly") {
  const QuadRule& r = panel_rule();
  // int_{-1}^{1} x^{30} dx = 2/31, x^{31} dx = 0.
  double s30 = 0.0, s31 = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    s30 += r.w[i] * std::pow(r.x[i], 30);
    s31 += r.w[i] * std::pow(r.x[i], 31);
  }
  CHECK(std::abs(s30 - 2.0 / 31.0) < 1e-15);
  CHECK(std::abs(s31) < 1e-15);
}

TEST_CASE("Gauss-Jacobi at (-1/2,-1/2) is Gauss-Chebyshev") {
  const int n = 12;
  const QuadRule r = gauss_jacobi(n, -0.5, -0.5);
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(r.w[i] - kPi / n) < 1e-13);
    const double node = std::cos((2.0 * (n - i) - 1.0) * kPi / (2.0 * n));
    CHECK(std::abs(r.x[i] - node) < 1e-13);
  }
}

TEST_CASE("Gauss-Jacobi moments match the Jacobi-matrix moments") {
  // m_0 = mu0, m_1 = mu0 alpha_0, m_2 = mu0 (alpha_0^2 + beta_1).
  const double a = 0.37, b = -0.61;
  const QuadRule r = gauss_jacobi(20, a, b);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) *
                     std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  const double alpha0 = (b - a) / (a + b + 2.0);
  const double beta1 = 4.0 * (a + 1.0) * (b + 1.0) /
                       ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    m0 += r.w[i];
    m1 += r.w[i] * r.x[i];
    m2 += r.w[i] * r.x[i] * r.x[i];
  }
  CHECK(std::abs(m0 - mu0) < 1e-13 * mu0);
  CHECK(std::abs(m1 - mu0 * alpha0) < 1e-13);
  CHECK(std::abs(m2 - mu0 * (alpha0 * alpha0 + beta1)) < 1e-13);
}

TEST_CASE("Gauss-Jacobi absorbs an endpoint singularity") {
  // int_{-1}^{1} (1+x)^{-2/3} cos(x) dx via the rule with the weight in it.
  const QuadRule r = gauss_jacobi(24, 0.0, -2.0 / 3.0);
  const double got = integrate(r, [](double x) { return std::cos(x); });
  // Independent reference: substitute u = (1+x)^{1/3}, which removes the
  // singularity; x = u^3 - 1, dx = 3u^2 du, (1+x)^{-2/3} = u^{-2}.
  const QuadRule& gl = panel_rule();
  const double umax = std::cbrt(2.0);
  double ref = 0.0;
  const int panels = 64;
  for (int p = 0; p < panels; ++p) {
    const double u0 = umax * p / panels, u1 = umax * (p + 1) / panels;
    const double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
    for (int i = 0; i < gl.size(); ++i) {
      const double u = mid + half * gl.x[i];
      ref += gl.w[i] * half * 3.0 * std::cos(u * u * u - 1.0);
    }
  }
  CHECK(std::abs(got - ref) < 1e-12);
}
