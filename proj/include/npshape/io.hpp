#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "npshape/coeffs.hpp"
#include "npshape/geometry.hpp"
#include "npshape/oracle.hpp"

namespace npshape {

// All numeric CSV output carries a "# npshape <kind> v1" header line and
// prints doubles with 17 significant digits so values round-trip exactly.

std::string format_full(double x);

void write_gpt_csv(const std::filesystem::path& path, const GptTable& t);
void write_gamma_csv(const std::filesystem::path& path, const GammaTable& t);
GammaTable read_gamma_csv(const std::filesystem::path& path);

// factors.csv rows: k, Re/Im sigma_k, Re/Im b_k, Re/Im mu_{k-2}; the capacity
// rides in a "# capacity <value>" comment so the file is self-contained.
struct FactorsFile {
  MappingCoefficients mapping;
  GeometricFactors sigma;
};
void write_factors_csv(const std::filesystem::path& path, const FactorsFile& f);
FactorsFile read_factors_csv(const std::filesystem::path& path);

void write_theta_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                     const std::vector<double>& values);
void write_boundary_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                        const std::vector<Complex>& points);

// Domain spec: {"curve": name, "params": [...]} or an explicit piecewise
// form {"pieces": [{kind, coeffs, t_range}], "corners": [{t, beta}]}.
BoundaryCurve curve_from_json_text(const std::string& text);
BoundaryCurve curve_from_json_file(const std::filesystem::path& path);

// Polygon spec: {"vertices": [[x,y],...]} with optional "pre_vertices" and
// "external_angles"; or {"regular": n}.
Polygon polygon_from_json_text(const std::string& text);
Polygon polygon_from_json_file(const std::filesystem::path& path);

}  // namespace npshape
