#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npshape/coeffs.hpp"
#include "npshape/geometry.hpp"
#include "npshape/types.hpp"

namespace npshape {

// Fourier partial sum of the generalized external angle function,
// Theta_m(t) = 2 + 2 sum Re(sigma_k) cos(2 pi k t) + 2 sum Im(sigma_k) sin(2 pi k t).
struct ThetaSeries {
  int order = 0;
  std::vector<Complex> sigma;  // sigma[1..order]
  std::vector<double> grid;    // t values in [0, 1)
  std::vector<double> values;  // Theta_m on the grid
};

std::vector<double> uniform_grid(int npoints);
ThetaSeries theta_partial(const GeometricFactors& sigma, int order,
                          std::vector<double> grid);
double theta_partial_at(const GeometricFactors& sigma, int order, double t);

// Smooth part k_g |alpha'| / pi of the generalized external angle in the
// curve's own parametrization, plus the corner delta weights.
struct ThetaAnalytic {
  const BoundaryCurve* curve = nullptr;
  std::vector<Corner> deltas;
  double smooth(double t) const;
};
ThetaAnalytic theta_analytic(const BoundaryCurve& curve);

// Truncated exterior map Phi_m at zeta = e^{-2 pi i t}; mu spans mu_{-1}..mu_m.
Complex phi_truncated_at(double capacity, std::span<const Complex> mu_store, int order,
                         double t);
std::vector<Complex> phi_truncated(double capacity, std::span<const Complex> mu_store,
                                   int order, std::span<const double> grid);

struct ClassifyResult {
  std::string verdict;  // "smooth" or "cornered"
  double slope = 0.0;   // least-squares slope of log|sigma_k| against k
  double ratio = 0.0;   // exp(slope), per-index decay factor
};

// Decay classifier over the upper half of the sigma sequence, skipping
// near-zero entries and restricting to the nonzero subsequence of
// rotationally symmetric data. Needs at least 16 factors.
ClassifyResult classify_decay(const GeometricFactors& sigma);

struct Peak {
  double t = 0.0;
  double theta = 0.0;
  int sign = 0;
  bool merged = false;
  std::optional<Complex> mapped;  // Phi_m(e^{-2 pi i t})
};

struct DetectConfig {
  double tau = 3.0;    // threshold in robust standard deviations
  int max_peaks = 16;
  // Corner deltas produce narrow partial-sum lobes: |Theta - 2| collapses
  // within ~0.65/m of the peak, while curvature bumps of the smooth part and
  // Gibbs sidelobes stay comparable there. Candidates whose magnitude at
  // that offset exceeds sharpness_ratio of the peak are rejected.
  double sharpness_distance_factor = 0.65;  // in units of 1/m
  double sharpness_ratio = 0.6;
};

struct CornerReport {
  std::vector<Peak> peaks;
  std::string peak_verdict;  // "ok" or "insufficient order"
  double threshold = 0.0;    // absolute |Theta - 2| threshold used
  ClassifyResult classifier;
};

// Peak detection on |Theta_m - 2| with a median-absolute-deviation scale,
// peaks merged within the resolution limit 1/(2m). The grid must be uniform
// with at least 8m points. Mapping coefficients, when given, place each peak
// on the boundary through the truncated exterior map.
CornerReport detect_corners(const ThetaSeries& theta, const DetectConfig& config,
                            const MappingCoefficients* mapping = nullptr);

}  // namespace npshape
