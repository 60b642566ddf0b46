#include "npshape/bie.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

namespace npshape {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

NpSystem::NpSystem(const PanelMesh& mesh, int threads) : mesh_(&mesh) {
  const auto& nodes = mesh.nodes();
  const int n = mesh.size();
  A_ = Eigen::MatrixXd(n, n);

  // Adjoint double-layer kernel (1/2pi) <x - y, nu_x> / |x - y|^2 with the
  // smooth diagonal limit k_g/(4pi). Node pairs anchored at the same corner
  // subtract corner-relative displacements, never nearby global positions.
  auto fill_columns = [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      const MeshNode& y = nodes[j];
      for (int i = 0; i < n; ++i) {
        const MeshNode& x = nodes[i];
        double k;
        if (i == j) {
          k = x.curvature / (4.0 * kPi);
        } else {
          const bool shared = x.anchor >= 0 && x.anchor == y.anchor;
          const Complex d = shared ? (x.displacement - y.displacement)
                                   : (x.position - y.position);
          const double r2 = std::norm(d);
          if (r2 == 0.0)
            throw NumericError("assemble_np: coincident quadrature nodes");
          k = (d.real() * x.outward_normal.real() + d.imag() * x.outward_normal.imag()) /
              (kTwoPi * r2);
        }
        A_(i, j) = -k * y.weight;
      }
      A_(j, j) -= 0.5;
    }
  };

  threads = std::max(1, threads);
  if (threads == 1 || n < 256) {
    fill_columns(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int j0 = t * chunk, j1 = std::min(n, j0 + chunk);
      if (j0 < j1) pool.emplace_back(fill_columns, j0, j1);
    }
    for (auto& th : pool) th.join();
  }

  // Interior Gauss identity: the x-integral of the kernel over the closed
  // curve equals 1/2 at every boundary target. On smooth meshes the weighted
  // column sums must reproduce it; corner meshes are checked in tests only.
  if (!mesh.curve().has_corners()) {
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      KahanSum<double> col;
      for (int i = 0; i < n; ++i) {
        const double kij = (i == j) ? -(A_(i, j) + 0.5) : -A_(i, j);
        col.add(kij * nodes[i].weight / nodes[j].weight);
      }
      worst = std::max(worst, std::abs(col.value() - 0.5));
    }
    gauss_residual_ = worst;
    if (worst > 1e-6)
      throw NumericError("assemble_np: Gauss identity residual " + std::to_string(worst));
  }

  lu_.compute(A_);
}

Density NpSystem::solve(const Eigen::VectorXd& rhs) const {
  const PanelMesh& mesh = *mesh_;
  if (rhs.size() != mesh.size()) throw InputError("solve_density: size mismatch");

  KahanSum<double> integral;
  for (int i = 0; i < mesh.size(); ++i) integral.add(rhs[i] * mesh.nodes()[i].weight);
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  const double mean = integral.value() / mesh.arclength();
  if (std::abs(integral.value()) > 1e-8 * scale)
    throw InputError("solve_density: right-hand side has nonzero boundary integral (" +
                     std::to_string(integral.value()) + "); outside the invertibility class");

  const Eigen::VectorXd rhs0 = rhs.array() - mean;
  Eigen::VectorXd x = lu_.solve(rhs0);

  // A couple of refinement sweeps keep the residual at working accuracy even
  // on deeply refined (ill-conditioned) corner systems.
  const double denom = std::max(1e-300, rhs0.cwiseAbs().maxCoeff());
  double resid = (A_ * x - rhs0).cwiseAbs().maxCoeff();
  for (int sweep = 0; sweep < 3 && resid / denom > 1e-13; ++sweep) {
    const Eigen::VectorXd r = rhs0 - A_ * x;
    x += lu_.solve(r);
    const double next = (A_ * x - rhs0).cwiseAbs().maxCoeff();
    if (next >= resid) break;
    resid = next;
  }
  if (resid / denom > 1e-10) {
    std::ostringstream msg;
    msg << "solve_density: residual " << resid / denom
        << " exceeds 1e-10; reciprocal condition estimate " << lu_.rcond();
    throw NumericError(msg.str());
  }

  KahanSum<double> phi_int;
  for (int i = 0; i < mesh.size(); ++i) phi_int.add(x[i] * mesh.nodes()[i].weight);
  return Density{std::move(x), phi_int.value() / mesh.arclength()};
}

NpSystem assemble_np(const PanelMesh& mesh, int threads) { return NpSystem(mesh, threads); }

double neumann_data(int n, Flavor flavor, const CurveSample& s) {
  if (n < 1) throw InputError("neumann_data: order must be >= 1");
  const Complex g = double(n) * std::pow(s.position, n - 1) * s.outward_normal;
  return flavor == Flavor::cos ? g.real() : g.imag();
}

Eigen::VectorXd neumann_rhs(const PanelMesh& mesh, int n, Flavor flavor) {
  if (n < 1) throw InputError("neumann_rhs: order must be >= 1");
  const auto& nodes = mesh.nodes();
  Eigen::VectorXd rhs(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    Complex p = 1.0;
    for (int k = 1; k < n; ++k) p *= nodes[i].position;
    const Complex g = double(n) * p * nodes[i].outward_normal;
    rhs[i] = (flavor == Flavor::cos) ? g.real() : g.imag();
  }
  return rhs;
}

GptTable gpt_table(const PanelMesh& mesh, const NpSystem& system, int order) {
  if (order < 1) throw InputError("gpt_table: order must be >= 1");
  const auto& nodes = mesh.nodes();
  const int nn = mesh.size();

  // Cached powers z^k for the harmonic polynomials.
  Eigen::MatrixXcd zpow(nn, order + 1);
  for (int i = 0; i < nn; ++i) {
    zpow(i, 0) = 1.0;
    for (int k = 1; k <= order; ++k) zpow(i, k) = zpow(i, k - 1) * nodes[i].position;
  }

  GptTable table(order);
  for (int n = 1; n <= order; ++n) {
    for (Flavor alpha : {Flavor::cos, Flavor::sin}) {
      Eigen::VectorXd rhs(nn);
      for (int i = 0; i < nn; ++i) {
        const Complex g = double(n) * zpow(i, n - 1) * nodes[i].outward_normal;
        rhs[i] = (alpha == Flavor::cos) ? g.real() : g.imag();
      }
      const Density phi = system.solve(rhs);
      for (int k = 1; k <= order; ++k) {
        KahanSum<double> mc, ms;
        for (int i = 0; i < nn; ++i) {
          const double w = phi.values[i] * nodes[i].weight;
          mc.add(zpow(i, k).real() * w);
          ms.add(zpow(i, k).imag() * w);
        }
        // First superscript pairs with the test polynomial P_k, the second
        // with the excitation P_n (classical contracted-GPT ordering; it is
        // the one under which the multipole identity holds, cross-checked
        // against the single-layer far field on asymmetric domains).
        if (alpha == Flavor::cos) {
          table.Mcc(k - 1, n - 1) = mc.value();
          table.Msc(k - 1, n - 1) = ms.value();
        } else {
          table.Mcs(k - 1, n - 1) = mc.value();
          table.Mss(k - 1, n - 1) = ms.value();
        }
      }
    }
  }
  return table;
}

double single_layer_eval(const PanelMesh& mesh, const Density& phi, Complex z) {
  if (phi.values.size() != mesh.size()) throw InputError("single_layer_eval: size mismatch");
  double dist = 1e300;
  for (const MeshNode& node : mesh.nodes()) dist = std::min(dist, std::abs(z - node.position));
  if (dist <= 2.0 * mesh.max_panel_arclength())
    throw InputError("single_layer_eval: target too close to the boundary "
                     "(no near-singular quadrature)");
  KahanSum<double> acc;
  const auto& nodes = mesh.nodes();
  for (int i = 0; i < mesh.size(); ++i)
    acc.add(std::log(std::abs(z - nodes[i].position)) * phi.values[i] * nodes[i].weight);
  return acc.value() / kTwoPi;
}

MultipoleValue multipole_eval(const GammaTable& gamma, int n, Flavor flavor, Complex z,
                              double boundary_max_radius) {
  if (n < 1 || n > gamma.order) throw InputError("multipole_eval: excitation order out of range");
  if (std::abs(z) <= 1.5 * boundary_max_radius)
    throw InputError("multipole_eval: |z| must exceed 1.5 x boundary radius");

  const Complex invz = 1.0 / z;
  Complex zm = 1.0;
  KahanSum<Complex> sum;
  double last = 0.0, prev = 0.0;
  for (int m = 1; m <= gamma.order; ++m) {
    zm *= invz;
    const Complex coeff = (flavor == Flavor::cos)
                              ? gamma.gamma1(m, n) + gamma.gamma2(m, n)
                              : gamma.gamma1(m, n) - gamma.gamma2(m, n);
    const Complex term = coeff * zm;
    sum.add(term);
    prev = last;
    last = std::abs(term);
  }
  MultipoleValue out;
  out.value = (flavor == Flavor::cos) ? -sum.value().real() : -sum.value().imag();
  double q = (prev > 0.0) ? std::min(0.9, last / prev) : 0.5;
  out.tail = last * q / (1.0 - q);
  return out;
}

}  // namespace npshape
