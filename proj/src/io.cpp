#include "npshape/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace npshape {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

// Lines of a CSV body (comments stripped), each split on commas.
struct CsvBody {
  std::vector<std::string> comments;
  std::vector<std::vector<double>> rows;
};

CsvBody read_csv(const std::filesystem::path& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  CsvBody body;
  std::string line;
  bool kind_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      body.comments.push_back(line);
      if (line.find("npshape " + kind) != std::string::npos) kind_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError(path.string() + ": non-numeric cell '" + cell + "'");
      }
    }
    body.rows.push_back(std::move(row));
  }
  if (!kind_seen)
    throw InputError(path.string() + ": missing '# npshape " + kind + "' schema header");
  return body;
}

}  // namespace

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_gpt_csv(const std::filesystem::path& path, const GptTable& t) {
  auto out = open_out(path);
  out << "# npshape gpt-table v1\n# k,n,Mcc,Mcs,Msc,Mss\n";
  for (int k = 1; k <= t.order; ++k)
    for (int n = 1; n <= t.order; ++n)
      out << k << ',' << n << ',' << format_full(t.Mcc(k - 1, n - 1)) << ','
          << format_full(t.Mcs(k - 1, n - 1)) << ',' << format_full(t.Msc(k - 1, n - 1))
          << ',' << format_full(t.Mss(k - 1, n - 1)) << '\n';
}

void write_gamma_csv(const std::filesystem::path& path, const GammaTable& t) {
  auto out = open_out(path);
  out << "# npshape gamma-table v1\n# k,n,Re_g1,Im_g1,Re_g2,Im_g2\n";
  for (int k = 1; k <= t.order; ++k)
    for (int n = 1; n <= t.order; ++n) {
      const Complex g1 = t.gamma1(k, n), g2 = t.gamma2(k, n);
      out << k << ',' << n << ',' << format_full(g1.real()) << ','
          << format_full(g1.imag()) << ',' << format_full(g2.real()) << ','
          << format_full(g2.imag()) << '\n';
    }
}

GammaTable read_gamma_csv(const std::filesystem::path& path) {
  const CsvBody body = read_csv(path, "gamma-table");
  int order = 0;
  for (const auto& r : body.rows) {
    if (r.size() != 6) throw InputError(path.string() + ": gamma rows need 6 columns");
    order = std::max(order, static_cast<int>(r[0]));
  }
  GammaTable t(order);
  for (const auto& r : body.rows) {
    const int k = static_cast<int>(r[0]), n = static_cast<int>(r[1]);
    if (k < 1 || n < 1 || k > order || n > order)
      throw InputError(path.string() + ": gamma indices out of range");
    t.g1(k - 1, n - 1) = Complex(r[2], r[3]);
    t.g2(k - 1, n - 1) = Complex(r[4], r[5]);
  }
  return t;
}

void write_factors_csv(const std::filesystem::path& path, const FactorsFile& f) {
  auto out = open_out(path);
  out << "# npshape factors v1\n";
  out << "# capacity " << format_full(f.mapping.capacity) << '\n';
  out << "# k,Re_sigma,Im_sigma,Re_b,Im_b,Re_mu_km2,Im_mu_km2\n";
  const int K = f.sigma.order();
  for (int k = 1; k <= K; ++k) {
    const Complex s = f.sigma.sigma[k];
    const Complex b = (k <= f.mapping.b_order()) ? f.mapping.b[k] : Complex(0.0);
    const Complex mu = (k - 2 <= f.mapping.mu_order()) ? f.mapping.mu(k - 2) : Complex(0.0);
    out << k << ',' << format_full(s.real()) << ',' << format_full(s.imag()) << ','
        << format_full(b.real()) << ',' << format_full(b.imag()) << ','
        << format_full(mu.real()) << ',' << format_full(mu.imag()) << '\n';
  }
}

FactorsFile read_factors_csv(const std::filesystem::path& path) {
  const CsvBody body = read_csv(path, "factors");
  FactorsFile f;
  f.mapping.capacity = 0.0;
  for (const std::string& c : body.comments) {
    const auto pos = c.find("# capacity ");
    if (pos == 0) f.mapping.capacity = std::stod(c.substr(11));
  }
  if (!(f.mapping.capacity > 0.0))
    throw InputError(path.string() + ": missing '# capacity' header");
  if (body.rows.empty()) throw InputError(path.string() + ": no factor rows");
  const int K = static_cast<int>(body.rows.size());
  f.sigma.sigma.assign(K + 1, Complex(0.0));
  f.mapping.b.assign(K + 1, Complex(0.0));
  f.mapping.b[1] = 1.0;
  f.mapping.mu_store.assign(K, Complex(0.0));
  for (const auto& r : body.rows) {
    if (r.size() != 7) throw InputError(path.string() + ": factors rows need 7 columns");
    const int k = static_cast<int>(r[0]);
    if (k < 1 || k > K) throw InputError(path.string() + ": row index out of range");
    f.sigma.sigma[k] = Complex(r[1], r[2]);
    f.mapping.b[k] = Complex(r[3], r[4]);
    if (k - 1 < static_cast<int>(f.mapping.mu_store.size()))
      f.mapping.mu_store[k - 1] = Complex(r[5], r[6]);
  }
  return f;
}

void write_theta_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                     const std::vector<double>& values) {
  auto out = open_out(path);
  out << "# npshape theta v1\n# t,theta\n";
  for (size_t i = 0; i < grid.size(); ++i)
    out << format_full(grid[i]) << ',' << format_full(values[i]) << '\n';
}

void write_boundary_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                        const std::vector<Complex>& points) {
  auto out = open_out(path);
  out << "# npshape boundary-image v1\n# t,Re_Phi,Im_Phi\n";
  for (size_t i = 0; i < grid.size(); ++i)
    out << format_full(grid[i]) << ',' << format_full(points[i].real()) << ','
        << format_full(points[i].imag()) << '\n';
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError(what + ": malformed JSON");
  return j;
}

BoundaryCurve curve_from_piecewise(const json& j) {
  std::vector<std::shared_ptr<const Piece>> pieces;
  for (const auto& pj : j.at("pieces")) {
    const std::string kind = pj.at("kind").get<std::string>();
    const auto tr = pj.at("t_range");
    const double t0 = tr.at(0).get<double>(), t1 = tr.at(1).get<double>();
    const auto& co = pj.at("coeffs");
    if (kind == "line") {
      if (co.size() != 4) throw InputError("line piece: coeffs are x0,y0,x1,y1");
      pieces.push_back(make_line_piece(Complex(co[0], co[1]), Complex(co[2], co[3]), t0, t1));
    } else if (kind == "arc") {
      if (co.size() != 5) throw InputError("arc piece: coeffs are cx,cy,r,phase0,phase1");
      pieces.push_back(make_arc_piece(Complex(co[0], co[1]), co[2].get<double>(),
                                      t0, t1, co[3].get<double>(), co[4].get<double>()));
    } else {
      throw InputError("unknown piece kind '" + kind + "'");
    }
  }
  std::vector<Corner> corners;
  if (j.contains("corners"))
    for (const auto& cj : j.at("corners"))
      corners.push_back({cj.at("t").get<double>(), cj.at("beta").get<double>()});
  return BoundaryCurve::from_pieces(std::move(pieces), std::move(corners));
}

}  // namespace

BoundaryCurve curve_from_json_text(const std::string& text) {
  const json j = parse_json(text, "domain spec");
  if (j.contains("pieces")) return curve_from_piecewise(j);
  if (!j.contains("curve")) throw InputError("domain spec: missing 'curve' name");
  const std::string name = j.at("curve").get<std::string>();
  std::vector<double> params;
  if (j.contains("params"))
    for (const auto& p : j.at("params")) params.push_back(p.get<double>());
  return builtin_curve(name, params);
}

BoundaryCurve curve_from_json_file(const std::filesystem::path& path) {
  return curve_from_json_text(read_text(path));
}

Polygon polygon_from_json_text(const std::string& text) {
  const json j = parse_json(text, "polygon spec");
  if (j.contains("regular")) return make_regular_polygon(j.at("regular").get<int>());
  Polygon p;
  if (!j.contains("vertices")) throw InputError("polygon spec: missing 'vertices'");
  for (const auto& v : j.at("vertices"))
    p.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  if (j.contains("external_angles"))
    for (const auto& b : j.at("external_angles")) p.external_angles.push_back(b.get<double>());
  else
    p.external_angles = polygon_external_angles(p.vertices);
  if (j.contains("pre_vertices"))
    for (const auto& v : j.at("pre_vertices"))
      p.pre_vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  validate_polygon(p);
  return p;
}

Polygon polygon_from_json_file(const std::filesystem::path& path) {
  return polygon_from_json_text(read_text(path));
}

}  // namespace npshape
