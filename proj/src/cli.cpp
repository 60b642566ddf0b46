#include "npshape/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "npshape/bie.hpp"
#include "npshape/io.hpp"
#include "npshape/reconstruct.hpp"

namespace npshape {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int default_threads() {
  if (const char* env = std::getenv("NPSHAPE_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

struct GptsOptions {
  std::string domain;
  int order = 12;
  int panels = 6;
  int depth = -1;  // auto: 30 with corners, 0 without
  int threads = default_threads();
  std::string out = ".";
};

void run_gpts_pipeline(const BoundaryCurve& curve_in, const GptsOptions& opt) {
  auto curve = std::make_shared<BoundaryCurve>(curve_in);
  const int depth = opt.depth >= 0 ? opt.depth : (curve->has_corners() ? 30 : 0);
  const PanelMesh mesh = build_mesh(curve, opt.panels, depth);
  const NpSystem system(mesh, opt.threads);
  const GptTable gpt = gpt_table(mesh, system, opt.order);
  const GammaTable gamma = gamma_from_gpt(gpt);

  const fs::path out(opt.out);
  fs::create_directories(out);
  write_gpt_csv(out / "gpt.csv", gpt);
  write_gamma_csv(out / "gamma.csv", gamma);

  json stats;
  stats["panel_count"] = mesh.panels().size();
  stats["node_count"] = mesh.size();
  stats["min_panel_param_length"] = mesh.min_panel_param_length();
  stats["arclength"] = mesh.arclength();
  stats["depth"] = depth;
  stats["gauss_residual"] = system.gauss_residual();
  std::ofstream(out / "mesh.json") << stats.dump(2) << '\n';
  std::cout << "wrote " << (out / "gpt.csv").string() << ", gamma.csv, mesh.json\n";
}

FactorsFile factors_pipeline(const GammaTable& gamma, int order) {
  if (order < 1) throw InputError("factors: order must be >= 1");
  if (order + 1 > gamma.order)
    throw InputError("factors: sigma to order " + std::to_string(order) +
                     " requires the gamma table to order " + std::to_string(order + 1) +
                     " (have " + std::to_string(gamma.order) + ")");
  FactorsFile f;
  f.mapping = mapping_from_gamma(gamma, order + 1);
  f.sigma = sigma_from_b(f.mapping.b, order, GeometricFactors::Source::gpts);
  return f;
}

void write_factors_outputs(const fs::path& out, const GammaTable& gamma,
                           const FactorsFile& f) {
  fs::create_directories(out);
  write_factors_csv(out / "factors.csv", f);
  json diag;
  diag["capacity"] = f.mapping.capacity;
  const int K = f.sigma.order();
  diag["order"] = K;
  if (K >= 3) {
    const auto bk2 = bk2_residual(gamma, f.mapping.capacity, f.mapping.b,
                                  f.mapping.mu_store, K - 1);
    diag["bk2_residuals"] = bk2;
  }
  diag["cauchy_product_residuals"] = cauchy_product_residual(f.mapping, K - 1);
  std::ofstream(out / "diagnostics.json") << diag.dump(2) << '\n';
}

json peak_to_json(const Peak& p) {
  json j;
  j["t"] = p.t;
  j["theta"] = p.theta;
  j["sign"] = p.sign;
  j["merged"] = p.merged;
  if (p.mapped) j["mapped"] = {p.mapped->real(), p.mapped->imag()};
  return j;
}

void run_reconstruct(const FactorsFile& f, int order, int grid_n, double tau,
                     const fs::path& out) {
  if (f.sigma.order() < order)
    throw InputError("reconstruct: need sigma to order " + std::to_string(order) +
                     " (have " + std::to_string(f.sigma.order()) + ")");
  fs::create_directories(out);
  const std::vector<double> grid = uniform_grid(grid_n);
  const ThetaSeries theta = theta_partial(f.sigma, order, grid);
  write_theta_csv(out / "theta.csv", theta.grid, theta.values);

  const bool have_phi = f.mapping.mu_order() >= 1;
  if (have_phi) {
    const int phi_order = std::min(order, f.mapping.mu_order());
    const auto image =
        phi_truncated(f.mapping.capacity, f.mapping.mu_store, phi_order, grid);
    write_boundary_csv(out / "boundary.csv", grid, image);
  }

  DetectConfig config;
  config.tau = tau;
  const CornerReport report =
      detect_corners(theta, config, have_phi ? &f.mapping : nullptr);

  json j;
  j["order"] = order;
  j["peak_verdict"] = report.peak_verdict;
  j["threshold"] = report.threshold;
  j["peaks"] = json::array();
  for (const Peak& p : report.peaks) j["peaks"].push_back(peak_to_json(p));
  if (f.sigma.order() >= 16) {
    const ClassifyResult c = classify_decay(f.sigma);
    j["classifier"] = {{"verdict", c.verdict}, {"slope", c.slope}, {"ratio", c.ratio}};
  }
  std::ofstream(out / "corners.json") << j.dump(2) << '\n';
  std::cout << "wrote " << (out / "theta.csv").string() << ", "
            << (have_phi ? "boundary.csv, " : "") << "corners.json\n";
}

void run_classify(const FactorsFile& f, const fs::path& out) {
  const ClassifyResult c = classify_decay(f.sigma);
  fs::create_directories(out);
  json j = {{"verdict", c.verdict}, {"slope", c.slope}, {"ratio", c.ratio},
            {"order", f.sigma.order()}};
  std::ofstream(out / "classify.json") << j.dump(2) << '\n';
  std::cout << c.verdict << " (per-index decay ratio " << c.ratio << ")\n";
}

Polygon polygon_from_options(const std::string& path, int regular) {
  if (!path.empty()) return polygon_from_json_file(path);
  if (regular >= 3) return make_regular_polygon(regular);
  throw InputError("oracle: give --polygon FILE or --regular N");
}

void run_oracle_sc(const Polygon& poly, int order, int trace_samples, const fs::path& out) {
  fs::create_directories(out);
  const GeometricFactors exact = sigma_from_prevertices(poly, order);
  const ScTaylor taylor = sc_taylor(poly, order);
  {
    std::ofstream csv(out / "sc.csv");
    csv << "# npshape sc-oracle v1\n# k,Re_sigma_exact,Im_sigma_exact,Re_sigma_taylor,"
           "Im_sigma_taylor,Re_b,Im_b\n";
    for (int k = 1; k <= order; ++k)
      csv << k << ',' << format_full(exact.sigma[k].real()) << ','
          << format_full(exact.sigma[k].imag()) << ','
          << format_full(taylor.sigma.sigma[k].real()) << ','
          << format_full(taylor.sigma.sigma[k].imag()) << ','
          << format_full(taylor.b[k].real()) << ',' << format_full(taylor.b[k].imag())
          << '\n';
  }
  if (trace_samples > 0) {
    const ScTrace trace(poly);
    std::vector<double> grid = uniform_grid(trace_samples);
    std::vector<Complex> pts(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) pts[i] = trace(grid[i]);
    write_boundary_csv(out / "trace.csv", grid, pts);
  }
  std::cout << "wrote " << (out / "sc.csv").string()
            << (trace_samples > 0 ? ", trace.csv" : "") << '\n';
}

void run_oracle_approx(const Polygon& poly, const std::vector<int>& ns, int order,
                       const fs::path& out) {
  fs::create_directories(out);
  const GeometricFactors exact = sigma_from_prevertices(poly, order);
  const ScTrace trace(poly);
  std::ofstream csv(out / "approx.csv");
  csv << "# npshape sigma-tilde v1\n# n,k,Re_sigma_tilde,Im_sigma_tilde,abs_err\n";
  for (int n : ns) {
    const ApproxPolygonData data =
        approx_polygon([&](double t) { return trace(t); }, trace.corner_params(), n);
    const GeometricFactors st = sigma_tilde(data, order);
    for (int k = 1; k <= order; ++k)
      csv << n << ',' << k << ',' << format_full(st.sigma[k].real()) << ','
          << format_full(st.sigma[k].imag()) << ','
          << format_full(std::abs(st.sigma[k] - exact.sigma[k])) << '\n';
  }
  std::cout << "wrote " << (out / "approx.csv").string() << '\n';
}

void run_repro(const std::string& target, const fs::path& out, int threads) {
  GptsOptions opt;
  opt.threads = threads;
  opt.out = (out / target).string();
  const fs::path dir(opt.out);

  auto pipeline = [&](const BoundaryCurve& curve, int order, int sigma_order) {
    opt.order = order;
    // Cornered builtins split into corner-to-corner pieces; smooth ones are a
    // single piece and need the resolution in the base panel count.
    opt.panels = curve.has_corners() ? 4 : 16;
    opt.depth = curve.has_corners() ? 30 : 0;
    run_gpts_pipeline(curve, opt);
    const GammaTable gamma = read_gamma_csv(dir / "gamma.csv");
    const FactorsFile f = factors_pipeline(gamma, sigma_order);
    write_factors_outputs(dir, gamma, f);
    return f;
  };

  if (target == "table1") {
    pipeline(make_reflected_equilateral_triangle(), 21, 20);
  } else if (target == "table2") {
    pipeline(make_cap_shaped(), 21, 20);
  } else if (target == "fig1") {
    const FactorsFile f = pipeline(make_reflected_equilateral_triangle(), 23, 22);
    run_reconstruct(f, 21, 1024, 3.0, dir);
  } else if (target == "fig2") {
    const FactorsFile f = pipeline(make_cap_shaped(), 30, 29);
    run_reconstruct(f, 28, 1024, 3.0, dir);
  } else if (target == "fig3") {
    // Low-order pass restricted to the gamma budget of a 6-coefficient
    // acquisition; high-order pass uses the full table.
    GptsOptions base = opt;
    run_gpts_pipeline(make_cap_shaped(), [&] {
      GptsOptions o = base;
      o.order = 30;
      o.panels = 4;  // three corner-to-corner pieces
      o.depth = 30;
      return o;
    }());
    const GammaTable gamma = read_gamma_csv(dir / "gamma.csv");
    const FactorsFile low = factors_pipeline(gamma, 5);
    write_factors_outputs(dir / "low_order", gamma, low);
    run_reconstruct(low, 5, 1024, 3.0, dir / "low_order");
    const FactorsFile high = factors_pipeline(gamma, 29);
    write_factors_outputs(dir / "high_order", gamma, high);
    run_reconstruct(high, 28, 1024, 3.0, dir / "high_order");
  } else if (target == "fig4") {
    const std::vector<double> params = {0, 0, 1, 0, 0, 0, 0, 0, 0.03, 0};
    const FactorsFile f = pipeline(builtin_curve("polynomial_image", params), 23, 22);
    run_reconstruct(f, 21, 1024, 3.0, dir);
    run_classify(f, dir);
  } else if (target == "fig5") {
    const std::vector<double> params = {0, 0, 1, 0, 0.03, 0, 0, 0.02, -0.01, 0};
    const FactorsFile f = pipeline(builtin_curve("polynomial_image", params), 30, 29);
    run_reconstruct(f, 28, 1024, 3.0, dir);
    run_classify(f, dir);
  } else {
    throw InputError("repro: unknown target '" + target +
                     "' (table1|table2|fig1|fig2|fig3|fig4|fig5)");
  }
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Polarization-tensor shape analysis: GPTs, mapping coefficients, "
               "geometric factors, and corner reconstruction"};
  app.require_subcommand(1);

  GptsOptions gopt;
  CLI::App* gpts = app.add_subcommand("gpts", "Solve the boundary integral equation and "
                                              "tabulate polarization tensors");
  gpts->add_option("--domain", gopt.domain, "domain spec JSON file")->required();
  gpts->add_option("--order", gopt.order, "table order N");
  gpts->add_option("--panels", gopt.panels, "base panels per piece");
  gpts->add_option("--depth", gopt.depth, "dyadic refinement depth (-1 = auto)");
  gpts->add_option("--threads", gopt.threads, "assembly threads");
  gpts->add_option("--out", gopt.out, "output directory");

  std::string gamma_path, factors_path;
  int factors_order = -1;
  std::string factors_out = ".";
  CLI::App* factors = app.add_subcommand("factors", "Mapping coefficients and geometric "
                                                    "factors from a gamma table");
  factors->add_option("--gamma", gamma_path, "gamma-table CSV")->required();
  factors->add_option("--order", factors_order, "sigma order K (default: table order - 1)");
  factors->add_option("--out", factors_out, "output directory");

  int rec_order = 0, rec_grid = 0;
  double rec_tau = 3.0;
  std::string rec_out = ".";
  CLI::App* rec = app.add_subcommand("reconstruct", "Theta partial sums, truncated exterior "
                                                    "map, and corner detection");
  rec->add_option("--factors", factors_path, "factors CSV")->required();
  rec->add_option("--order", rec_order, "partial sum order m")->required();
  rec->add_option("--grid", rec_grid, "grid points (default max(8m, 256))");
  rec->add_option("--tau", rec_tau, "peak threshold in robust deviations");
  rec->add_option("--out", rec_out, "output directory");

  std::string cls_path, cls_out = ".";
  CLI::App* cls = app.add_subcommand("classify", "Smooth/cornered decay classifier");
  cls->add_option("--factors", cls_path, "factors CSV")->required();
  cls->add_option("--out", cls_out, "output directory");

  CLI::App* oracle = app.add_subcommand("oracle", "Schwarz-Christoffel ground truth");
  oracle->require_subcommand(1);
  std::string poly_path;
  int poly_regular = 0, sc_order = 30, sc_trace = 0;
  std::string sc_out = ".";
  CLI::App* sc = oracle->add_subcommand("sc", "Exact geometric factors and map trace");
  sc->add_option("--polygon", poly_path, "polygon spec JSON");
  sc->add_option("--regular", poly_regular, "regular n-gon");
  sc->add_option("--order", sc_order, "factor order K");
  sc->add_option("--trace-samples", sc_trace, "boundary trace sample count");
  sc->add_option("--out", sc_out, "output directory");

  std::string ap_ns = "48,96,192,384,768";
  int ap_order = 6;
  std::string ap_out = ".";
  std::string ap_poly_path;
  int ap_regular = 0;
  CLI::App* approx = oracle->add_subcommand("approx", "Approximating-polygon convergence");
  approx->add_option("--polygon", ap_poly_path, "polygon spec JSON");
  approx->add_option("--regular", ap_regular, "regular n-gon");
  approx->add_option("--n", ap_ns, "comma-separated node counts");
  approx->add_option("--order", ap_order, "factor order K");
  approx->add_option("--out", ap_out, "output directory");

  std::string repro_target, repro_out = ".";
  int repro_threads = default_threads();
  CLI::App* repro = app.add_subcommand("repro", "Regenerate table/figure data end-to-end");
  repro->add_option("target", repro_target, "table1|table2|fig1|fig2|fig3|fig4|fig5")
      ->required();
  repro->add_option("--out", repro_out, "output directory");
  repro->add_option("--threads", repro_threads, "assembly threads");

  std::vector<const char*> argv;
  const std::string prog = "npshape";
  argv.push_back(prog.c_str());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);  // --help
      std::cerr << nlohmann::json{{"error", {{"type", "input"}, {"message", e.what()}}}}.dump()
                << '\n';
      return 2;
    }

    if (gpts->parsed()) {
      run_gpts_pipeline(curve_from_json_file(gopt.domain), gopt);
    } else if (factors->parsed()) {
      const GammaTable gamma = read_gamma_csv(gamma_path);
      const int K = factors_order > 0 ? factors_order : gamma.order - 1;
      const FactorsFile f = factors_pipeline(gamma, K);
      write_factors_outputs(factors_out, gamma, f);
      std::cout << "wrote " << (fs::path(factors_out) / "factors.csv").string()
                << ", diagnostics.json (capacity " << f.mapping.capacity << ")\n";
    } else if (rec->parsed()) {
      const FactorsFile f = read_factors_csv(factors_path);
      const int grid = rec_grid > 0 ? rec_grid : std::max(8 * rec_order, 256);
      run_reconstruct(f, rec_order, grid, rec_tau, rec_out);
    } else if (cls->parsed()) {
      run_classify(read_factors_csv(cls_path), cls_out);
    } else if (sc->parsed()) {
      run_oracle_sc(polygon_from_options(poly_path, poly_regular), sc_order, sc_trace, sc_out);
    } else if (approx->parsed()) {
      std::vector<int> ns;
      std::stringstream ss(ap_ns);
      std::string cell;
      while (std::getline(ss, cell, ',')) ns.push_back(std::stoi(cell));
      run_oracle_approx(polygon_from_options(ap_poly_path, ap_regular), ns, ap_order, ap_out);
    } else if (repro->parsed()) {
      run_repro(repro_target, repro_out, repro_threads);
    }
    return 0;
  } catch (const InputError& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "input"}, {"message", e.what()}}}}.dump()
              << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"type", "numeric"}, {"message", e.what()}}}}.dump()
              << '\n';
    return 1;
  }
}

}  // namespace npshape
