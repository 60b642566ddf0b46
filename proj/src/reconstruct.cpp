#include "npshape/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace npshape {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

double median_inplace(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}
}  // namespace

std::vector<double> uniform_grid(int npoints) {
  if (npoints < 1) throw InputError("uniform_grid: need at least one point");
  std::vector<double> g(npoints);
  for (int i = 0; i < npoints; ++i) g[i] = double(i) / npoints;
  return g;
}

double theta_partial_at(const GeometricFactors& sigma, int order, double t) {
  // Synthesis inverting sigma_k = int Theta(t) e^{-2 pi i k t} dt:
  // Theta_m(t) = 2 + 2 sum [Re sigma_k cos(2 pi k t) - Im sigma_k sin(2 pi k t)].
  // The sine sign is pinned by the delta locations: partial sums must peak at
  // the corner parameters, which the prevertex oracle verifies exactly.
  KahanSum<double> acc;
  acc.add(2.0);
  for (int k = 1; k <= order; ++k) {
    acc.add(2.0 * sigma.sigma[k].real() * std::cos(kTwoPi * k * t));
    acc.add(-2.0 * sigma.sigma[k].imag() * std::sin(kTwoPi * k * t));
  }
  return acc.value();
}

ThetaSeries theta_partial(const GeometricFactors& sigma, int order,
                          std::vector<double> grid) {
  if (sigma.order() < order)
    throw InputError("theta_partial: sigma only reaches order " +
                     std::to_string(sigma.order()) + ", need " + std::to_string(order));
  ThetaSeries ts;
  ts.order = order;
  ts.sigma.assign(sigma.sigma.begin(), sigma.sigma.begin() + order + 1);
  ts.grid = std::move(grid);
  ts.values.resize(ts.grid.size());
  for (size_t i = 0; i < ts.grid.size(); ++i)
    ts.values[i] = theta_partial_at(sigma, order, ts.grid[i]);
  return ts;
}

double ThetaAnalytic::smooth(double t) const {
  const CurveSample s = curve->sample(t);
  return s.curvature * s.speed / kPi;
}

ThetaAnalytic theta_analytic(const BoundaryCurve& curve) {
  ThetaAnalytic ta;
  ta.curve = &curve;
  ta.deltas = curve.corners();
  return ta;
}

Complex phi_truncated_at(double capacity, std::span<const Complex> mu_store, int order,
                         double t) {
  if (static_cast<int>(mu_store.size()) < order + 2)
    throw InputError("phi_truncated: need mu to index " + std::to_string(order));
  // zeta = e^{-2 pi i t}, so zeta^{-k} = u^k with u = e^{2 pi i t}.
  const Complex u = std::polar(1.0, kTwoPi * t);
  const Complex invu = std::conj(u);
  Complex acc = mu_store[0] * invu;  // mu_{-1} zeta
  Complex up = 1.0;
  for (int k = 0; k <= order; ++k) {
    acc += mu_store[k + 1] * up;
    up *= u;
  }
  return capacity * acc;
}

std::vector<Complex> phi_truncated(double capacity, std::span<const Complex> mu_store,
                                   int order, std::span<const double> grid) {
  std::vector<Complex> out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    out[i] = phi_truncated_at(capacity, mu_store, order, grid[i]);
  return out;
}

ClassifyResult classify_decay(const GeometricFactors& sigma) {
  const int K = sigma.order();
  if (K < 16) throw InputError("classify_decay: need at least 16 geometric factors");

  double maxabs = 0.0;
  for (int k = 1; k <= K; ++k) maxabs = std::max(maxabs, std::abs(sigma.sigma[k]));

  // Rotational symmetry: indices carrying mass determine the subsequence.
  int nsym = 0;
  for (int k = 1; k <= K; ++k)
    if (std::abs(sigma.sigma[k]) > 1e-10 * maxabs) nsym = std::gcd(nsym, k);
  if (nsym == 0) nsym = 1;

  std::vector<double> ks, ys;
  for (int k = (K + 1) / 2; k <= K; ++k) {
    if (k % nsym != 0) continue;
    const double a = std::abs(sigma.sigma[k]);
    if (a < 1e-13) continue;
    ks.push_back(k);
    ys.push_back(std::log(a));
  }

  ClassifyResult res;
  if (ks.size() < 2) {
    // Nothing above the floor in the tail: disk-like.
    res.verdict = "smooth";
    res.slope = std::log(1e-16);
    res.ratio = 0.0;
    return res;
  }
  const double n = double(ks.size());
  const double mk = std::accumulate(ks.begin(), ks.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < ks.size(); ++i) {
    sxx += (ks[i] - mk) * (ks[i] - mk);
    sxy += (ks[i] - mk) * (ys[i] - my);
  }
  res.slope = sxy / sxx;
  res.ratio = std::exp(res.slope);
  res.verdict = (res.slope < std::log(0.95)) ? "smooth" : "cornered";
  return res;
}

CornerReport detect_corners(const ThetaSeries& theta, const DetectConfig& config,
                            const MappingCoefficients* mapping) {
  const int m = theta.order;
  const int G = static_cast<int>(theta.grid.size());
  if (G < 8 * m)
    throw InputError("detect_corners: grid must have at least 8m points");
  for (int i = 0; i + 1 < G; ++i)
    if (std::abs((theta.grid[i + 1] - theta.grid[i]) - 1.0 / G) > 1e-12)
      throw InputError("detect_corners: grid must be uniform");

  std::vector<double> dev(G);
  for (int i = 0; i < G; ++i) dev[i] = theta.values[i] - 2.0;

  std::vector<double> tmp = dev;
  const double med = median_inplace(tmp);
  for (int i = 0; i < G; ++i) tmp[i] = std::abs(dev[i] - med);
  const double mad = median_inplace(tmp);
  const double scale = 1.4826 * mad;
  const double threshold = config.tau * scale;

  // Local maxima of |Theta - 2| above threshold, cyclic neighbors.
  struct Cand {
    int idx;
    double mag;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < G; ++i) {
    const double a = std::abs(dev[i]);
    const double left = std::abs(dev[(i + G - 1) % G]);
    const double right = std::abs(dev[(i + 1) % G]);
    if (a >= left && a > right && a > threshold) cands.push_back({i, a});
  }

  // Isolation test: a corner peak must collapse by half a kernel width and
  // stay collapsed one width out. Sidelobe trains and wide curvature bumps
  // hold their magnitude at one of those offsets.
  const int off1 = std::max(1, static_cast<int>(std::lround(
                                    config.sharpness_distance_factor / m * G)));
  const int off2 = std::max(off1 + 1, static_cast<int>(std::lround(double(G) / m)));
  std::vector<Cand> sharp;
  for (const Cand& c : cands) {
    double side = 0.0;
    for (int off : {off1, off2}) {
      side = std::max(side, std::abs(dev[(c.idx + off) % G]));
      side = std::max(side, std::abs(dev[(c.idx + G - off) % G]));
    }
    if (side <= config.sharpness_ratio * c.mag) sharp.push_back(c);
  }
  cands = std::move(sharp);

  // Merge within the partial-sum resolution limit 1/(2m), keeping the
  // strongest candidate of each cluster.
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.mag > b.mag; });
  const double min_spacing = 1.0 / (2.0 * m);
  std::vector<Cand> kept;
  std::vector<bool> merged_flag;
  for (const Cand& c : cands) {
    bool absorbed = false;
    for (size_t j = 0; j < kept.size(); ++j) {
      double d = std::abs(theta.grid[c.idx] - theta.grid[kept[j].idx]);
      d = std::min(d, 1.0 - d);
      if (d < min_spacing) {
        merged_flag[j] = true;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) {
      kept.push_back(c);
      merged_flag.push_back(false);
    }
  }
  if (static_cast<int>(kept.size()) > config.max_peaks) {
    kept.resize(config.max_peaks);
    merged_flag.resize(config.max_peaks);
  }

  CornerReport report;
  report.threshold = threshold;
  for (size_t j = 0; j < kept.size(); ++j) {
    Peak p;
    p.t = theta.grid[kept[j].idx];
    p.theta = theta.values[kept[j].idx];
    p.sign = (dev[kept[j].idx] > 0.0) ? +1 : -1;
    p.merged = merged_flag[j];
    if (mapping != nullptr && mapping->mu_order() >= 1) {
      // Map at the series order when the coefficients reach it; a gamma
      // budget of N supplies the angle series one order past the map.
      const int phi_order = std::min(theta.order, mapping->mu_order());
      p.mapped = phi_truncated_at(mapping->capacity, mapping->mu_store, phi_order, p.t);
    }
    report.peaks.push_back(p);
  }
  std::sort(report.peaks.begin(), report.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.t < b.t; });
  report.peak_verdict = report.peaks.empty() ? "insufficient order" : "ok";
  return report;
}

}  // namespace npshape
