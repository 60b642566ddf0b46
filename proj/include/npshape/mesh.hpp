#pragma once

#include <memory>
#include <span>
#include <vector>

#include "npshape/geometry.hpp"
#include "npshape/types.hpp"

namespace npshape {

struct MeshNode {
  double t = 0.0;            // nominal global parameter (informational)
  Complex position{};        // corner_position + displacement when anchored
  Complex displacement{};    // z(t) - z(corner) for anchored nodes
  int anchor = -1;           // corner index, or -1 away from corners
  Complex unit_tangent{};
  Complex outward_normal{};
  double speed = 0.0;
  double curvature = 0.0;
  double weight = 0.0;       // GL weight x param half-length x speed
};

struct MeshPanel {
  int piece = 0;
  int anchor = -1;
  double lo = 0.0, hi = 0.0;          // global parameter bounds (nominal)
  double off_lo = 0.0, off_hi = 0.0;  // corner-relative bounds when anchored
  double arclength = 0.0;
};

// Composite 16-point Gauss-Legendre panel mesh with dyadic refinement toward
// corners. Panels adjacent to a corner are stored by corner-relative offsets
// and every node sample is evaluated through the corner-anchored forms, so
// depth ~30 refinement keeps full relative accuracy. Immutable once built.
class PanelMesh {
public:
  PanelMesh(std::shared_ptr<const BoundaryCurve> curve, int base_panels_per_piece, int depth);

  const BoundaryCurve& curve() const { return *curve_; }
  std::shared_ptr<const BoundaryCurve> curve_ptr() const { return curve_; }
  const std::vector<MeshNode>& nodes() const { return nodes_; }
  const std::vector<MeshPanel>& panels() const { return panels_; }
  int depth() const { return depth_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  double arclength() const { return arclength_; }
  double max_panel_arclength() const { return max_panel_arclength_; }
  double min_panel_param_length() const { return min_panel_param_; }

  double integrate(std::span<const double> f) const;
  Complex integrate(std::span<const Complex> f) const;

private:
  std::shared_ptr<const BoundaryCurve> curve_;
  std::vector<MeshNode> nodes_;
  std::vector<MeshPanel> panels_;
  int depth_ = 0;
  double arclength_ = 0.0;
  double max_panel_arclength_ = 0.0;
  double min_panel_param_ = 0.0;
};

PanelMesh build_mesh(std::shared_ptr<const BoundaryCurve> curve, int base_panels_per_piece,
                     int depth);

}  // namespace npshape
