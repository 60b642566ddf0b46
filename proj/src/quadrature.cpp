#include "npshape/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "npshape/types.hpp"

namespace npshape {
namespace {

// Symmetric tridiagonal eigensolver (implicit-shift QL) that also carries the
// first-row components of the eigenvectors, which is all Golub-Welsch needs.
// d: diagonal, e: off-diagonal (e[0..n-2]), z: starts as (1,0,...,0).
void tridiag_eig_firstrow(std::vector<double>& d, std::vector<double>& e,
                          std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw NumericError("quadrature: eigensolver failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

QuadRule golub_welsch(std::vector<double> diag, std::vector<double> offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  tridiag_eig_firstrow(diag, offdiag, z);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] < diag[b]; });

  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = diag[order[i]];
    rule.w[i] = mu0 * z[order[i]] * z[order[i]];
  }
  return rule;
}

}  // namespace

QuadRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

QuadRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw InputError("gauss_jacobi: need at least one node");
  if (a <= -1.0 || b <= -1.0) throw InputError("gauss_jacobi: exponents must exceed -1");

  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  const double apb = a + b;
  diag[0] = (b - a) / (apb + 2.0);
  for (int k = 1; k < n; ++k) {
    const double den = (2.0 * k + apb) * (2.0 * k + apb + 2.0);
    diag[k] = (b * b - a * a) / den;
  }
  if (n > 1) {
    off[0] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) /
                       ((apb + 2.0) * (apb + 2.0) * (apb + 3.0)));
    for (int k = 2; k < n; ++k) {
      const double t = 2.0 * k + apb;
      const double num = 4.0 * k * (k + a) * (k + b) * (k + apb);
      off[k - 1] = std::sqrt(num / (t * t * (t + 1.0) * (t - 1.0)));
    }
  }
  const double mu0 = std::pow(2.0, apb + 1.0) * std::tgamma(a + 1.0) *
                     std::tgamma(b + 1.0) / std::tgamma(apb + 2.0);
  return golub_welsch(std::move(diag), std::move(off), mu0);
}

const QuadRule& panel_rule() {
  static const QuadRule rule = gauss_legendre(16);
  return rule;
}

}  // namespace npshape
