#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "npshape/cli.hpp"
#include "npshape/io.hpp"

using namespace npshape;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("npshape_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("17-digit formatting round-trips doubles exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng) * std::pow(10.0, int(u(rng) * 20));
    CHECK(std::stod(format_full(x)) == x);
  }
  CHECK(std::stod(format_full(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("gamma table CSV round-trip is exact") {
  TempDir tmp;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  GammaTable t(5);
  for (int k = 0; k < 5; ++k)
    for (int n = 0; n < 5; ++n) {
      t.g1(k, n) = Complex(u(rng), u(rng));
      t.g2(k, n) = Complex(u(rng), u(rng));
    }
  const fs::path file = tmp.path / "gamma.csv";
  write_gamma_csv(file, t);
  const GammaTable r = read_gamma_csv(file);
  REQUIRE(r.order == 5);
  CHECK((r.g1 - t.g1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.g2 - t.g2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("factors CSV round-trip preserves capacity and columns") {
  TempDir tmp;
  FactorsFile f;
  f.mapping.capacity = 1.25;
  f.mapping.b = {Complex(0), Complex(1), Complex(0.3, -0.2), Complex(-0.1, 0.05)};
  f.mapping.mu_store = {Complex(1), Complex(-0.3, 0.2)};
  f.sigma.sigma = {Complex(0), Complex(0.6, -0.4), Complex(-0.9, 0.1), Complex(0.2, 0.0)};
  const fs::path file = tmp.path / "factors.csv";
  write_factors_csv(file, f);
  const FactorsFile r = read_factors_csv(file);
  CHECK(r.mapping.capacity == 1.25);
  CHECK(r.sigma.sigma[2] == f.sigma.sigma[2]);
  CHECK(r.mapping.b[3] == f.mapping.b[3]);
  CHECK(r.mapping.mu(0) == f.mapping.mu(0));
}

TEST_CASE("schema headers are validated across stages") {
  TempDir tmp;
  GammaTable t(2);
  const fs::path file = tmp.path / "gamma.csv";
  write_gamma_csv(file, t);
  CHECK_THROWS_AS(read_factors_csv(file), InputError);  // wrong kind header

  std::ofstream(tmp.path / "naked.csv") << "1,2,3,4,5,6\n";
  CHECK_THROWS_AS(read_gamma_csv(tmp.path / "naked.csv"), InputError);
}

TEST_CASE("domain specs: builtin, piecewise, malformed") {
  const BoundaryCurve ell =
      curve_from_json_text("{\"curve\": \"ellipse\", \"params\": [2, 1]}");
  CHECK(std::abs(ell.position(0.0) - Complex(2, 0)) < 1e-14);

  // Explicit piecewise diamond with declared corners.
  const std::string diamond = R"({
    "pieces": [
      {"kind": "line", "coeffs": [ 1.4, 0.0, 0.0,  1.4], "t_range": [0.0, 0.25]},
      {"kind": "line", "coeffs": [ 0.0, 1.4, -1.4, 0.0], "t_range": [0.25, 0.5]},
      {"kind": "line", "coeffs": [-1.4, 0.0, 0.0, -1.4], "t_range": [0.5, 0.75]},
      {"kind": "line", "coeffs": [ 0.0, -1.4, 1.4, 0.0], "t_range": [0.75, 1.0]}],
    "corners": [{"t": 0.0, "beta": 0.5}, {"t": 0.25, "beta": 0.5},
                {"t": 0.5, "beta": 0.5}, {"t": 0.75, "beta": 0.5}]})";
  const BoundaryCurve dia = curve_from_json_text(diamond);
  CHECK(dia.corners().size() == 4);

  CHECK_THROWS_AS(curve_from_json_text("not json"), InputError);
  CHECK_THROWS_AS(curve_from_json_text("{\"params\": [1]}"), InputError);
  // Undeclared corners are rejected by curve validation.
  const std::string undeclared = R"({
    "pieces": [
      {"kind": "line", "coeffs": [ 1.4, 0.0, 0.0,  1.4], "t_range": [0.0, 0.5]},
      {"kind": "line", "coeffs": [ 0.0, 1.4, 1.4, 0.0], "t_range": [0.5, 1.0]}]})";
  CHECK_THROWS_AS(curve_from_json_text(undeclared), InputError);
}

TEST_CASE("polygon specs: regular shortcut and explicit prevertices") {
  const Polygon reg = polygon_from_json_text("{\"regular\": 4}");
  CHECK(reg.size() == 4);
  CHECK(reg.has_pre_vertices());

  const Polygon tri = polygon_from_json_text(
      "{\"vertices\": [[2.0, 0.0], [-1.0, 1.8], [-1.0, -1.8]]}");
  CHECK(tri.size() == 3);
  CHECK_FALSE(tri.has_pre_vertices());
  CHECK_THROWS_AS(polygon_from_json_text("{\"vertices\": [[1, 0], [0, 1]]}"), InputError);
}

TEST_CASE("run_cli: exit codes and pipeable stages") {
  TempDir tmp;
  const std::string dom = (tmp.path / "disk.json").string();
  std::ofstream(dom) << "{\"curve\": \"disk\", \"params\": [1.0]}\n";
  const std::string out = (tmp.path / "run").string();

  CHECK(run_cli({"gpts", "--domain", dom, "--order", "6", "--panels", "8",
                 "--out", out}) == 0);
  CHECK(fs::exists(fs::path(out) / "gpt.csv"));
  CHECK(fs::exists(fs::path(out) / "gamma.csv"));
  CHECK(fs::exists(fs::path(out) / "mesh.json"));

  CHECK(run_cli({"factors", "--gamma", out + "/gamma.csv", "--order", "5",
                 "--out", out}) == 0);
  CHECK(fs::exists(fs::path(out) / "factors.csv"));
  CHECK(fs::exists(fs::path(out) / "diagnostics.json"));

  CHECK(run_cli({"reconstruct", "--factors", out + "/factors.csv", "--order", "4",
                 "--out", out}) == 0);
  CHECK(fs::exists(fs::path(out) / "theta.csv"));
  CHECK(fs::exists(fs::path(out) / "corners.json"));

  // Input failures exit 2.
  const std::string bad = (tmp.path / "bad.json").string();
  std::ofstream(bad) << "no json here\n";
  CHECK(run_cli({"gpts", "--domain", bad}) == 2);
  CHECK(run_cli({"gpts", "--domain", (tmp.path / "missing.json").string()}) == 2);
  CHECK(run_cli({"factors", "--gamma", out + "/gamma.csv", "--order", "50"}) == 2);
  CHECK(run_cli({"repro", "nonsense"}) == 2);
  CHECK(run_cli({"oracle", "sc"}) == 2);  // neither --polygon nor --regular
}
