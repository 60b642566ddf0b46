#include "npshape/coeffs.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace npshape {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> real_powers(double base, int up_to) {
  std::vector<double> p(up_to + 1);
  p[0] = 1.0;
  for (int i = 1; i <= up_to; ++i) p[i] = p[i - 1] * base;
  return p;
}
}  // namespace

GammaTable gamma_from_gpt(const GptTable& gpt) {
  GammaTable g(gpt.order);
  for (int k = 1; k <= gpt.order; ++k) {
    const double f = 1.0 / (4.0 * kPi * k);
    for (int n = 1; n <= gpt.order; ++n) {
      const double cc = gpt.Mcc(k - 1, n - 1), ss = gpt.Mss(k - 1, n - 1);
      const double cs = gpt.Mcs(k - 1, n - 1), sc = gpt.Msc(k - 1, n - 1);
      g.g1(k - 1, n - 1) = f * Complex(cc - ss, cs + sc);
      g.g2(k - 1, n - 1) = f * Complex(cc + ss, -(cs - sc));
    }
  }
  return g;
}

GptTable gpt_from_gamma(const GammaTable& gamma) {
  GptTable t(gamma.order);
  for (int k = 1; k <= gamma.order; ++k) {
    const double f = 2.0 * kPi * k;
    for (int n = 1; n <= gamma.order; ++n) {
      const Complex g1 = gamma.gamma1(k, n), g2 = gamma.gamma2(k, n);
      t.Mcc(k - 1, n - 1) = f * (g1.real() + g2.real());
      t.Mss(k - 1, n - 1) = f * (g2.real() - g1.real());
      t.Mcs(k - 1, n - 1) = f * (g1.imag() - g2.imag());
      t.Msc(k - 1, n - 1) = f * (g1.imag() + g2.imag());
    }
  }
  return t;
}

PowerCoeffTable series_power_coeffs(std::span<const Complex> s, int order, int max_row) {
  if (static_cast<int>(s.size()) < order + 1)
    throw InputError("series_power_coeffs: base series shorter than requested order");
  if (max_row < 0) max_row = order;
  PowerCoeffTable t;
  t.order = order;
  t.rows.assign(max_row + 1, std::vector<Complex>(order + 1, Complex(0.0)));
  for (int k = 1; k <= order; ++k) t.rows[1][k] = s[k];
  for (int m = 2; m <= max_row; ++m) {
    for (int k = m; k <= order; ++k) {
      KahanSum<Complex> acc;
      for (int j = 1; j <= k - m + 1; ++j) acc.add(s[j] * t.rows[m - 1][k - j]);
      t.rows[m][k] = acc.value();
    }
  }
  return t;
}

double capacity(const GammaTable& gamma) {
  if (gamma.order < 1) throw InputError("capacity: empty gamma table");
  const Complex g = gamma.gamma2(1, 1);
  if (!(g.real() < 0.0))
    throw NumericError("capacity: Re gamma^2_11 must be negative, got " +
                       std::to_string(g.real()));
  if (std::abs(g.imag()) >= 1e-6 * std::abs(g))
    throw NumericError("capacity: |Im gamma^2_11| too large for a physical table");
  return std::sqrt(-g.real());
}

std::vector<Complex> b_from_gamma(const GammaTable& gamma, int order) {
  if (gamma.order < order)
    throw InputError("b_from_gamma: gamma table only reaches order " +
                     std::to_string(gamma.order) + ", need " + std::to_string(order));
  const double C = capacity(gamma);
  const auto Cpow = real_powers(C, order + 1);

  // b_{m,k} rows grow together with b itself: b_{m,k} touches b_j only for
  // j <= k - m + 1, so each new b_k closes over already-known entries.
  std::vector<std::vector<Complex>> rows(order + 1,
                                         std::vector<Complex>(order + 1, Complex(0.0)));
  std::vector<Complex> b(order + 1, Complex(0.0));
  b[1] = 1.0;
  rows[1][1] = 1.0;
  for (int k = 2; k <= order; ++k) {
    for (int m = 2; m <= k; ++m) {
      KahanSum<Complex> acc;
      for (int j = 1; j <= k - m + 1; ++j) acc.add(b[j] * rows[m - 1][k - j]);
      rows[m][k] = acc.value();
    }
    KahanSum<Complex> acc;
    for (int m = 2; m <= k; ++m) acc.add(gamma.gamma2(m, 1) / Cpow[m + 1] * rows[m][k]);
    b[k] = acc.value();
    rows[1][k] = b[k];
  }
  return b;
}

std::vector<Complex> mu_from_b(std::span<const Complex> b, int order) {
  if (static_cast<int>(b.size()) < order + 2)
    throw InputError("mu_from_b: need b up to order " + std::to_string(order + 1));
  std::vector<Complex> mu(order + 1, Complex(0.0));  // mu[j] = mu_{j-1}
  mu[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    KahanSum<Complex> acc;
    acc.add(-b[k + 1]);
    for (int j = 2; j <= k; ++j) acc.add(-b[j] * mu[k - j + 1]);
    mu[k] = acc.value();  // mu_{k-1}
  }
  return mu;
}

GeometricFactors sigma_from_b(std::span<const Complex> b, int order,
                              GeometricFactors::Source src) {
  if (static_cast<int>(b.size()) < order + 2)
    throw InputError("sigma_from_b: need b up to order " + std::to_string(order + 1));
  GeometricFactors gf;
  gf.provenance = src;
  gf.sigma.assign(order + 1, Complex(0.0));
  for (int k = 1; k <= order; ++k) {
    KahanSum<Complex> acc;
    acc.add(double(k) * double(k + 1) * b[k + 1]);
    for (int j = 1; j <= k - 1; ++j) acc.add(-double(j + 1) * b[j + 1] * gf.sigma[k - j]);
    gf.sigma[k] = acc.value();
  }
  return gf;
}

std::vector<Complex> b_from_sigma(const GeometricFactors& sigma, int order) {
  if (sigma.order() < order)
    throw InputError("b_from_sigma: sigma only reaches order " +
                     std::to_string(sigma.order()));
  std::vector<Complex> b(order + 2, Complex(0.0));
  b[1] = 1.0;
  for (int k = 1; k <= order; ++k) {
    KahanSum<Complex> acc;
    acc.add(sigma.sigma[k]);
    for (int j = 1; j <= k - 1; ++j) acc.add(double(j + 1) * b[j + 1] * sigma.sigma[k - j]);
    b[k + 1] = acc.value() / (double(k) * double(k + 1));
  }
  return b;
}

MappingCoefficients mapping_from_gamma(const GammaTable& gamma, int order) {
  MappingCoefficients mc;
  mc.capacity = capacity(gamma);
  mc.b = b_from_gamma(gamma, order);
  mc.mu_store = (order >= 2) ? mu_from_b(mc.b, order - 1) : std::vector<Complex>{1.0};
  return mc;
}

GammaTable gamma_forward(double C, std::span<const Complex> b,
                         const std::vector<Complex>& mu_store, int order) {
  const int N = order;
  if (static_cast<int>(b.size()) < N + 1)
    throw InputError("gamma_forward: need b to order " + std::to_string(N));
  const int mu_needed = 3 * N - 2;  // mu_{n,2n+k} reaches series index 3N
  if (static_cast<int>(mu_store.size()) < mu_needed + 2)
    throw InputError("gamma_forward: need mu to index " + std::to_string(mu_needed) +
                     " (series power mu_{n,2n+k} with n = k = N)");

  const PowerCoeffTable bt = series_power_coeffs(b, N);
  // Base series of the mu powers: coefficient of x^j is mu_{j-2}.
  std::vector<Complex> s(3 * N + 1, Complex(0.0));
  for (int j = 1; j <= 3 * N; ++j) s[j] = mu_store[j - 1];
  const PowerCoeffTable mt = series_power_coeffs(s, 3 * N, N);

  const auto Cpow = real_powers(C, 2 * N + 1);
  std::vector<double> invCpow(2 * N + 1);
  for (int i = 0; i <= 2 * N; ++i) invCpow[i] = 1.0 / Cpow[i];

  GammaTable g(N);
  for (int n = 1; n <= N; ++n) {
    for (int k = 1; k <= N; ++k) {
      KahanSum<Complex> acc1;
      acc1.add(mt.at(n, 2 * n + k));
      for (int m = 1; m <= k - 1; ++m)
        acc1.add(-g.gamma1(m, n) * invCpow[m + n] * bt.at(m, k));
      g.g1(k - 1, n - 1) = Cpow[k + n] * acc1.value();

      KahanSum<Complex> acc2;
      if (k <= n) acc2.add(std::conj(mt.at(n, 2 * n - k)));
      for (int m = 1; m <= k - 1; ++m)
        acc2.add(g.gamma2(m, n) * invCpow[m + n] * bt.at(m, k));
      g.g2(k - 1, n - 1) = -Cpow[k + n] * acc2.value();
    }
  }
  return g;
}

std::vector<double> bk2_residual(const GammaTable& gamma, double C,
                                 std::span<const Complex> b,
                                 const std::vector<Complex>& mu_store, int order) {
  if (gamma.order < order || static_cast<int>(b.size()) < order + 1 ||
      static_cast<int>(mu_store.size()) < order + 2)
    throw InputError("bk2_residual: inputs must reach order " + std::to_string(order));
  const PowerCoeffTable bt = series_power_coeffs(b, order);
  const auto Cpow = real_powers(C, order + 2);
  const Complex g11 = gamma.gamma1(1, 1);

  std::vector<double> r;
  for (int k = 2; k <= order; ++k) {
    KahanSum<Complex> acc;
    acc.add(mu_store[k + 1]);  // mu_k
    for (int m = 2; m <= k; ++m)
      acc.add(-gamma.gamma1(m, 1) / Cpow[m + 1] * bt.at(m, k));
    r.push_back(std::abs(g11 * b[k] - Cpow[2] * acc.value()));
  }
  return r;
}

std::vector<double> cauchy_product_residual(const MappingCoefficients& mc, int order) {
  const int kmax = std::min(order, std::min(mc.b_order() - 1, mc.mu_order() + 1));
  std::vector<double> r;
  for (int k = 1; k <= kmax; ++k) {
    KahanSum<Complex> acc;
    acc.add(mc.mu(k - 1));
    acc.add(mc.b[k + 1]);
    for (int j = 2; j <= k; ++j) acc.add(mc.b[j] * mc.mu(k - j));
    r.push_back(std::abs(acc.value()));
  }
  return r;
}

}  // namespace npshape
