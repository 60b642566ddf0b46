#pragma once

#include <span>
#include <vector>

#include "npshape/coeffs_tables.hpp"
#include "npshape/types.hpp"

namespace npshape {

// Capacity C and the two Riemann-map coefficient families: b_k for the
// interior map of the reflected domain (b_1 = 1) and mu_k for the exterior
// map (mu_{-1} = 1). b is stored 1-based (b[0] unused); mu is stored shifted
// so mu(k) is valid for k >= -1.
struct MappingCoefficients {
  double capacity = 0.0;
  std::vector<Complex> b;         // b[k], k = 1..b_order()
  std::vector<Complex> mu_store;  // mu_store[j] = mu_{j-1}

  int b_order() const { return static_cast<int>(b.size()) - 1; }
  int mu_order() const { return static_cast<int>(mu_store.size()) - 2; }
  Complex mu(int k) const { return mu_store.at(k + 1); }
};

// Coefficients of the m-th power of a series: rows[m][k] = coefficient of
// x^k in (sum_j s_j x^j)^m, 1 <= m <= k <= order.
struct PowerCoeffTable {
  int order = 0;
  std::vector<std::vector<Complex>> rows;  // rows[m][k]; rows[0] unused
  Complex at(int m, int k) const { return rows.at(m).at(k); }
};

struct GeometricFactors {
  enum class Source { gpts, sc_oracle, analytic };
  std::vector<Complex> sigma;  // sigma[k], k = 1..order (sigma[0] unused)
  Source provenance = Source::analytic;
  int order() const { return static_cast<int>(sigma.size()) - 1; }
};

// gamma tensors from the contracted moment table and back.
GammaTable gamma_from_gpt(const GptTable& gpt);
GptTable gpt_from_gamma(const GammaTable& gamma);

// Power table of the series with coefficients s[1..K] (s[0] ignored).
PowerCoeffTable series_power_coeffs(std::span<const Complex> s, int order,
                                    int max_row = -1);

// C = sqrt(-Re gamma^2_{11}) with physical-consistency checks.
double capacity(const GammaTable& gamma);

// Interior map coefficients from the first gamma^2 column, built jointly with
// the power table in increasing k. Returns b[0..K] with b[1] = 1.
std::vector<Complex> b_from_gamma(const GammaTable& gamma, int order);

// Exterior coefficients from the Cauchy-product identity; needs b to K+1.
// Returns the shifted store (mu_store[j] = mu_{j-1}, j = 0..K).
std::vector<Complex> mu_from_b(std::span<const Complex> b, int order);

// Geometric factor recurrence and its exact inverse.
GeometricFactors sigma_from_b(std::span<const Complex> b, int order,
                              GeometricFactors::Source src = GeometricFactors::Source::gpts);
std::vector<Complex> b_from_sigma(const GeometricFactors& sigma, int order);

// Everything from a gamma table in one step (C, b to K, mu to K-2).
MappingCoefficients mapping_from_gamma(const GammaTable& gamma, int order);

// Forward recurrences gamma(C, b, mu) for a full N x N table. Requires b to
// order N and mu to index 3N-2; throws InputError naming the required order.
GammaTable gamma_forward(double capacity, std::span<const Complex> b,
                         const std::vector<Complex>& mu_store, int order);

// Residuals of the domain-independent cross-relation tying gamma^1, b, mu.
std::vector<double> bk2_residual(const GammaTable& gamma, double capacity,
                                 std::span<const Complex> b,
                                 const std::vector<Complex>& mu_store, int order);

// Residuals of the Cauchy-product identity, k = 1..K.
std::vector<double> cauchy_product_residual(const MappingCoefficients& mc, int order);

}  // namespace npshape
