#include "npshape/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "npshape/quadrature.hpp"

namespace npshape {

namespace {

// Working form of a panel before node generation. Anchored panels carry
// offsets relative to their corner; plain panels carry absolute parameters.
struct ProtoPanel {
  int piece;
  int anchor;
  double lo, hi;
  double off_lo, off_hi;
};

}  // namespace

PanelMesh::PanelMesh(std::shared_ptr<const BoundaryCurve> curve, int base, int depth)
    : curve_(std::move(curve)), depth_(depth) {
  if (base < 2) throw InputError("build_mesh: need at least 2 base panels per piece");
  if (depth < 0) throw InputError("build_mesh: depth must be nonnegative");

  const BoundaryCurve& c = *curve_;
  const auto& pieces = c.pieces();
  const auto& corners = c.corners();

  // Corner adjacency: for corner l, the piece starting at it and the piece
  // ending at it (cyclic through t = 0).
  const int npieces = static_cast<int>(pieces.size());
  std::vector<int> out_piece(corners.size()), in_piece(corners.size());
  for (size_t l = 0; l < corners.size(); ++l) {
    int op = 0;
    if (corners[l].t != 0.0) {
      for (int i = 0; i < npieces; ++i)
        if (pieces[i]->t0() == corners[l].t) op = i;
    }
    out_piece[l] = op;
    in_piece[l] = (op == 0) ? npieces - 1 : op - 1;
  }

  std::vector<ProtoPanel> proto;
  for (int ip = 0; ip < npieces; ++ip) {
    const Piece& p = *pieces[ip];
    const double len = p.param_length();
    const double h = len / base;

    // Which base panels of this piece flank a corner?
    int corner_at_start = -1, corner_at_end = -1;
    for (size_t l = 0; l < corners.size(); ++l) {
      if (out_piece[l] == ip) corner_at_start = static_cast<int>(l);
      if (in_piece[l] == ip) corner_at_end = static_cast<int>(l);
    }

    for (int q = 0; q < base; ++q) {
      const double lo = p.t0() + len * q / base;
      const double hi = (q + 1 == base) ? p.t1() : p.t0() + len * (q + 1) / base;
      if (q == 0 && corner_at_start >= 0 && depth > 0) {
        // Dyadic stack growing away from the corner: offsets in [0, h].
        double prev = h * std::ldexp(1.0, -depth);
        proto.push_back({ip, corner_at_start, lo, lo + prev, 0.0, prev});
        for (int lev = depth - 1; lev >= 0; --lev) {
          const double next = h * std::ldexp(1.0, -lev);
          proto.push_back({ip, corner_at_start, lo + prev, lo + next, prev, next});
          prev = next;
        }
      } else if (q + 1 == base && corner_at_end >= 0 && depth > 0) {
        // Stack shrinking toward the corner: offsets in [-h, 0].
        double prev = -h;
        for (int lev = 1; lev <= depth; ++lev) {
          const double next = -h * std::ldexp(1.0, -lev);
          proto.push_back({ip, corner_at_end, hi + prev, hi + next, prev, next});
          prev = next;
        }
        proto.push_back({ip, corner_at_end, hi + prev, hi, prev, 0.0});
      } else {
        proto.push_back({ip, -1, lo, hi, 0.0, 0.0});
      }
    }
  }

  const QuadRule& gl = panel_rule();
  nodes_.reserve(proto.size() * gl.size());
  panels_.reserve(proto.size());
  KahanSum<double> total;
  min_panel_param_ = 1e300;

  for (const ProtoPanel& pp : proto) {
    MeshPanel panel;
    panel.piece = pp.piece;
    panel.anchor = pp.anchor;
    panel.lo = pp.lo;
    panel.hi = pp.hi;
    panel.off_lo = pp.off_lo;
    panel.off_hi = pp.off_hi;

    const bool anchored = pp.anchor >= 0;
    const double span = anchored ? (pp.off_hi - pp.off_lo) : (pp.hi - pp.lo);
    min_panel_param_ = std::min(min_panel_param_, span);
    const double half = 0.5 * span;
    const double mid_off = 0.5 * (pp.off_lo + pp.off_hi);
    const double mid_t = 0.5 * (pp.lo + pp.hi);

    KahanSum<double> panel_len;
    for (int i = 0; i < gl.size(); ++i) {
      MeshNode node;
      node.anchor = pp.anchor;
      if (anchored) {
        const double off = mid_off + half * gl.x[i];
        const CurveSample s = c.sample_near_corner(pp.anchor, off);
        node.displacement = c.local_displacement(pp.anchor, off);
        node.position = c.corner_position(pp.anchor) + node.displacement;
        node.t = c.corners()[pp.anchor].t + off;
        if (node.t < 0.0) node.t += 1.0;
        node.unit_tangent = s.unit_tangent;
        node.outward_normal = s.outward_normal;
        node.speed = s.speed;
        node.curvature = s.curvature;
      } else {
        const double t = mid_t + half * gl.x[i];
        const CurveSample s = c.sample(t);
        node.position = s.position;
        node.t = t;
        node.unit_tangent = s.unit_tangent;
        node.outward_normal = s.outward_normal;
        node.speed = s.speed;
        node.curvature = s.curvature;
      }
      node.weight = gl.w[i] * half * node.speed;
      panel_len.add(node.weight);
      total.add(node.weight);
      nodes_.push_back(node);
    }
    panel.arclength = panel_len.value();
    max_panel_arclength_ = std::max(max_panel_arclength_, panel.arclength);
    panels_.push_back(panel);
  }
  arclength_ = total.value();
}

double PanelMesh::integrate(std::span<const double> f) const {
  if (f.size() != nodes_.size()) throw InputError("integrate: value count != node count");
  KahanSum<double> acc;
  for (size_t i = 0; i < f.size(); ++i) acc.add(f[i] * nodes_[i].weight);
  return acc.value();
}

Complex PanelMesh::integrate(std::span<const Complex> f) const {
  if (f.size() != nodes_.size()) throw InputError("integrate: value count != node count");
  KahanSum<Complex> acc;
  for (size_t i = 0; i < f.size(); ++i) acc.add(f[i] * nodes_[i].weight);
  return acc.value();
}

PanelMesh build_mesh(std::shared_ptr<const BoundaryCurve> curve, int base_panels_per_piece,
                     int depth) {
  return PanelMesh(std::move(curve), base_panels_per_piece, depth);
}

}  // namespace npshape
