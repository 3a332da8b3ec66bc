#pragma once

// Steady saturated flow div(q) = 0, q = -K grad H.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/aquifer/finite_volume.hpp"
#include "pcgsa/aquifer/grid.hpp"
#include "pcgsa/error.hpp"

namespace pcgsa::aquifer {

struct FlowField {
  Eigen::VectorXd head;       // per cell (m)
  Eigen::VectorXd face_flux;  // Darcy flux density through each face along +x / +z (m/s)
};

inline FlowField solve_flow(const Grid& g, const TensorField& k, const BoundaryConditions& bc,
                            double tolerance = 1e-10) {
  for (std::size_t c = 0; c < k.size(); ++c)
    require(k.xx[c] > 0.0 && k.zz[c] > 0.0 && k.xx[c] * k.zz[c] > k.xz[c] * k.xz[c],
            "conductivity tensor is not positive definite in cell " + std::to_string(c));
  // Solve for the head relative to the mean prescribed value: fluxes come from
  // small head differences, and smaller magnitudes lose fewer digits.
  double shift = 0.0;
  std::size_t prescribed = 0;
  BoundaryConditions relative = bc;
  for (auto* side : {&relative.left, &relative.right, &relative.bottom, &relative.top})
    for (const auto& f : *side)
      if (f.value) {
        shift += *f.value;
        ++prescribed;
      }
  if (prescribed > 0) shift /= static_cast<double>(prescribed);
  for (auto* side : {&relative.left, &relative.right, &relative.bottom, &relative.top})
    for (auto& f : *side)
      if (f.value) *f.value -= shift;

  const auto forms = diffusive_face_fluxes(g, k, relative);
  FlowField f;
  const Eigen::VectorXd u =
      solve_balance(g, forms, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.cells())), tolerance);
  f.face_flux = evaluate_faces(forms, u);
  f.head = u.array() + shift;
  return f;
}

/// Largest per-cell |net outflow| relative to the cell throughflow.
inline double max_relative_imbalance(const Grid& g, const Eigen::VectorXd& face_flux,
                                     const Eigen::VectorXd& source = {}) {
  const Eigen::VectorXd net = cell_outflow(g, face_flux);
  double worst = 0.0;
  double scale = 0.0;
  std::vector<double> through(g.cells(), 0.0);
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const auto ff = [&](std::size_t face) { return std::abs(face_flux(static_cast<Eigen::Index>(face))); };
      const double t = 0.5 * (g.dz(j) * (ff(g.xface(i, j)) + ff(g.xface(i + 1, j))) +
                              g.dx(i) * (ff(g.zface(i, j)) + ff(g.zface(i, j + 1))));
      through[g.id(i, j)] = t;
      scale = std::max(scale, t);
    }
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const double s = source.size() ? source(static_cast<Eigen::Index>(c)) : 0.0;
    // Cells with no throughflow are judged against the largest one in the domain.
    const double ref = std::max(through[c], 1e-12 * scale);
    if (ref > 0.0) worst = std::max(worst, std::abs(net(static_cast<Eigen::Index>(c)) - s) / ref);
  }
  return worst;
}

/// Outward volumetric flux (per unit depth) through every boundary face.
struct BoundaryFluxes {
  std::vector<double> left, right, bottom, top;
};

inline BoundaryFluxes boundary_fluxes(const Grid& g, const Eigen::VectorXd& face_flux) {
  BoundaryFluxes b;
  const auto at = [&](std::size_t face) { return face_flux(static_cast<Eigen::Index>(face)); };
  for (std::size_t j = 0; j < g.nz(); ++j) {
    b.left.push_back(-at(g.xface(0, j)) * g.dz(j));
    b.right.push_back(at(g.xface(g.nx(), j)) * g.dz(j));
  }
  for (std::size_t i = 0; i < g.nx(); ++i) {
    b.bottom.push_back(-at(g.zface(i, 0)) * g.dx(i));
    b.top.push_back(at(g.zface(i, g.nz())) * g.dx(i));
  }
  return b;
}

}  // namespace pcgsa::aquifer
